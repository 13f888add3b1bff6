#include "itqde/dense.hpp"

#include <bit>
#include <string>

#include "itqde/errors.hpp"
#include "itqde/kernels.hpp"

namespace itqde {

DenseHermitian to_dense(const ObservableSum& obs, int qubit_cap) {
    if (obs.qubit_count > qubit_cap)
        throw resource_limit_error("dense realization capped at " +
                                   std::to_string(qubit_cap) + " qubits");
    const Eigen::Index dim = Eigen::Index{1} << obs.qubit_count;
    DenseHermitian H;
    H.entries = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& m : compile_pauli(obs)) {
        for (std::uint64_t col = 0; col < static_cast<std::uint64_t>(dim); ++col) {
            const double sign = (std::popcount(col & m.parity_mask) & 1) ? -1.0 : 1.0;
            H.entries(static_cast<Eigen::Index>(col ^ m.flip_mask),
                      static_cast<Eigen::Index>(col)) += m.weight * sign;
        }
    }
    return H;
}

EigenDecomposition eigendecompose(const DenseHermitian& H) {
    const double scale = H.entries.norm();
    const double defect = (H.entries - H.entries.adjoint()).norm();
    if (defect > 1e-12 * std::max(scale, 1.0))
        throw validation_error("matrix is not Hermitian within tolerance");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H.entries);
    if (solver.info() != Eigen::Success)
        throw validation_error("eigendecomposition failed to converge");
    EigenDecomposition out;
    out.energies = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
    return out;
}

}  // namespace itqde
