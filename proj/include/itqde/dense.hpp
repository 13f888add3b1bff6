// dense.hpp — dense matrix realization of Pauli sums and its eigensolve.

#pragma once

#include <Eigen/Dense>

#include "itqde/pauli.hpp"

namespace itqde {

inline constexpr int kDefaultDenseQubitCap = 14;

// 2^n x 2^n Hermitian matrix in the computational basis. Qubit 0 owns the
// most significant bit of the basis index (Kronecker order of the letters).
struct DenseHermitian {
    Eigen::MatrixXcd entries;

    Eigen::Index dim() const { return entries.rows(); }
};

struct EigenDecomposition {
    Eigen::VectorXd energies;       // ascending
    Eigen::MatrixXcd eigenvectors;  // columns, unitary

    Eigen::Index dim() const { return energies.size(); }
};

DenseHermitian to_dense(const ObservableSum& obs, int qubit_cap = kDefaultDenseQubitCap);

// Hermiticity is checked to 1e-12 relative Frobenius before solving.
EigenDecomposition eigendecompose(const DenseHermitian& H);

}  // namespace itqde
