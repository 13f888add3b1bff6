// reference.hpp — slow dense references: the QDE superoperator iterated as
// literal matrix algebra, and Gaussian-state expectations. These share no
// code with the trajectory/assembly path, which is what makes the
// equivalence checks in `verify` and the tests decisive.

#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "itqde/dense.hpp"

namespace itqde {

// exp(-i sqrt(dtau/2) H) as a dense matrix.
Eigen::MatrixXcd unitary_step(const DenseHermitian& H, double dtau);

// steps applications of rho -> (U rho U + U^dag rho U^dag) / 2.
Eigen::MatrixXcd qde_iterate(const Eigen::MatrixXcd& U, Eigen::MatrixXcd rho,
                             std::int64_t steps);

// Tr[O rho] / Tr[rho].
double normalized_expectation(const Eigen::MatrixXcd& O, const Eigen::MatrixXcd& rho);

// Tr[O exp(-tau (H + lambda)^2)] / Tr[exp(-tau (H + lambda)^2)], the
// continuum-limit oracle for maximally mixed initial conditions.
double gaussian_state_expectation(const DenseHermitian& H, const DenseHermitian& O,
                                  double tau, double lambda);

}  // namespace itqde
