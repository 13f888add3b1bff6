#include "itqde/reference.hpp"

#include <cmath>
#include <complex>

#include "itqde/errors.hpp"

namespace itqde {

Eigen::MatrixXcd unitary_step(const DenseHermitian& H, double dtau) {
    if (!(dtau > 0.0)) throw parameter_error("dtau must be positive");
    const auto eig = eigendecompose(H);
    const double theta = std::sqrt(dtau / 2.0);
    Eigen::VectorXcd phases(eig.dim());
    for (Eigen::Index k = 0; k < eig.dim(); ++k)
        phases[k] = std::polar(1.0, -theta * eig.energies[k]);
    return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

Eigen::MatrixXcd qde_iterate(const Eigen::MatrixXcd& U, Eigen::MatrixXcd rho,
                             std::int64_t steps) {
    const Eigen::MatrixXcd Udag = U.adjoint();
    for (std::int64_t s = 0; s < steps; ++s)
        rho = 0.5 * (U * rho * U + Udag * rho * Udag);
    return rho;
}

double normalized_expectation(const Eigen::MatrixXcd& O, const Eigen::MatrixXcd& rho) {
    const std::complex<double> z = rho.trace();
    const std::complex<double> num = (O * rho).trace();
    return num.real() / z.real();
}

double gaussian_state_expectation(const DenseHermitian& H, const DenseHermitian& O,
                                  double tau, double lambda) {
    const auto eig = eigendecompose(H);
    const Eigen::MatrixXcd O_eig =
        eig.eigenvectors.adjoint() * O.entries * eig.eigenvectors;
    double num = 0.0, den = 0.0;
    for (Eigen::Index k = 0; k < eig.dim(); ++k) {
        const double shifted = eig.energies[k] + lambda;
        const double w = std::exp(-tau * shifted * shifted);
        num += O_eig(k, k).real() * w;
        den += w;
    }
    return num / den;
}

}  // namespace itqde
