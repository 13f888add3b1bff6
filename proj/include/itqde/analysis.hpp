// analysis.hpp — operator-level checks of the discrete-to-Gaussian
// correspondence, its Hubbard-Stratonovich continuum limit, the inverted
// propagator reconstruction, and the quadrature error bound.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "itqde/dense.hpp"
#include "itqde/propagation.hpp"
#include "itqde/trajectory.hpp"

namespace itqde {

struct OperatorApproximation {
    Eigen::MatrixXcd target;
    Eigen::MatrixXcd approximation;
    double error_norm = 0.0;       // spectral norm of (target - approximation)
    double frobenius_error = 0.0;  // secondary diagnostic
    std::optional<double> bound;   // quadrature bound, when one applies
    std::map<std::string, double> parameters;
};

// 2^-m sum_j C(m,j) exp(-i (2j-m) sqrt(2 dtau) H) against exp(-tau H^2),
// tau = m dtau. Error is O(m dtau^2) = O(tau^2 / m).
OperatorApproximation discrete_gaussian_operator(const DenseHermitian& H, double dtau,
                                                 std::int64_t m);

struct Quadrature {
    enum class Rule { riemann, gauss_hermite } rule = Rule::gauss_hermite;
    std::int64_t order = 0;  // m for riemann, node count n for gauss_hermite

    static Quadrature riemann(std::int64_t m) { return {Rule::riemann, m}; }
    static Quadrature gauss_hermite(std::int64_t n) { return {Rule::gauss_hermite, n}; }
};

// (1/sqrt(pi)) integral exp(-x^2) exp(-2ix sqrt(tau) H) dx by the chosen
// rule. For Gauss-Hermite the returned bound is
//   (n! 2^n / (2n)!) (2 tau)^n ||H^2n||
// and error_norm <= bound is asserted.
OperatorApproximation hs_integral_operator(const DenseHermitian& H, double tau,
                                           Quadrature quad);

// Gauss-Hermite nodes and weights for integral exp(-x^2) f(x) dx.
struct GaussHermiteRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};
GaussHermiteRule gauss_hermite_rule(std::int64_t n);

// sqrt(2/(m pi)) sum_j exp(-2j^2/m) <psi_2j|psi_-2j> folded over conjugate
// partners; approaches <psi_0| exp(-tau H^2) |psi_0> at tau = m dtau.
double crooks_like_expectation(const Trajectory& traj);
double crooks_reference(const StateVector& psi0, const DenseHermitian& H, double tau);

// Propagator reconstruction from K shifted Gaussian operators:
//   exp(-itH) ~ sqrt(pi) e^{t^2/4tau} sum_l exp(-tau (H - pi l/sqrt(tau))^2)
//               * exp(2 pi i l k / K)
// on the grid t = 2k sqrt(2 dtau), m/2 = K^2, dtau = tau/m. The index
// aliasing j = k mod K leaves an O(e^{-1}) defect that the scalar oracle
// predicts exactly; beyond |k| = K^2 the grid wraps entirely.
OperatorApproximation invert_itqde_propagator(const DenseHermitian& H, double tau,
                                              double t, std::int64_t K);

// Nearest m with m/2 a perfect square; returns {m, K}.
std::pair<std::int64_t, std::int64_t> snap_inversion_m(std::int64_t m);

// Both readings of the mixed-state Hubbard-Stratonovich identity
//   e^{-tau H^2/2} rho_mix e^{-tau H^2/2}
//     = (1/sqrt(pi)) integral e^{-x^2} e^{-ix sqrt(tau) H} |psi0><psi0|
//       e^{-ix sqrt(tau) H} dx,
// with rho_mix entries a_k a_l* exp(-tau E_k E_l / 2) as printed versus the
// exponent exp(+tau (E_k - E_l)^2 / 4) that closes the identity.
struct GeneralizedHsResult {
    double deviation_printed = 0.0;
    double deviation_corrected = 0.0;
};
GeneralizedHsResult generalized_hs_check(const StateVector& psi0, const DenseHermitian& H,
                                         double tau, std::int64_t quad_order = 40);

// Two-level occupation ratio p(E_1)/p(E_0) = exp(-4 tau Delta (Ebar + lambda))
// under exp(-tau (H + lambda)^2).
double two_level_acceleration(double Ebar, double Delta, double lambda, double tau);

}  // namespace itqde
