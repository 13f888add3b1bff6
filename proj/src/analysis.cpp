#include "itqde/analysis.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "itqde/errors.hpp"
#include "itqde/weights.hpp"

namespace itqde {

namespace {

double spectral_norm(const Eigen::MatrixXcd& A) {
    if (A.rows() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    return svd.singularValues()(0);
}

OperatorApproximation finish(const EigenDecomposition& eig, Eigen::VectorXcd target_diag,
                             Eigen::VectorXcd approx_diag) {
    OperatorApproximation out;
    const auto& V = eig.eigenvectors;
    out.target = V * target_diag.asDiagonal() * V.adjoint();
    out.approximation = V * approx_diag.asDiagonal() * V.adjoint();
    out.error_norm = spectral_norm(out.target - out.approximation);
    out.frobenius_error = (out.target - out.approximation).norm();
    return out;
}

}  // namespace

OperatorApproximation discrete_gaussian_operator(const DenseHermitian& H, double dtau,
                                                 std::int64_t m) {
    if (!(dtau > 0.0)) throw parameter_error("dtau must be positive");
    const auto eig = eigendecompose(H);
    const auto weights = binomial_weights(m);
    const double tau = static_cast<double>(m) * dtau;
    const double step = std::sqrt(2.0 * dtau);

    const Eigen::Index d = eig.dim();
    Eigen::VectorXcd target(d), approx(d);
    for (Eigen::Index k = 0; k < d; ++k) {
        const double E = eig.energies[k];
        target[k] = std::exp(-tau * E * E);
        double acc = weights[0];
        for (std::int64_t j = 1; j <= m / 2; ++j)
            acc += 2.0 * weights[static_cast<size_t>(j)] *
                   std::cos(step * static_cast<double>(2 * j) * E);
        approx[k] = acc;
    }
    auto out = finish(eig, std::move(target), std::move(approx));
    out.parameters = {{"tau", tau}, {"dtau", dtau}, {"m", static_cast<double>(m)}};
    return out;
}

GaussHermiteRule gauss_hermite_rule(std::int64_t n) {
    if (n < 1) throw parameter_error("gauss_hermite order must be >= 1");
    // Golub-Welsch on the Hermite Jacobi matrix: off-diagonals sqrt(k/2).
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (std::int64_t k = 1; k < n; ++k) {
        const double b = std::sqrt(static_cast<double>(k) / 2.0);
        J(k, k - 1) = b;
        J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(J);
    GaussHermiteRule rule;
    rule.nodes = solver.eigenvalues();
    rule.weights.resize(n);
    const double sqrt_pi = std::sqrt(M_PI);
    for (std::int64_t k = 0; k < n; ++k) {
        const double v0 = solver.eigenvectors()(0, k);
        rule.weights[k] = sqrt_pi * v0 * v0;
    }
    return rule;
}

OperatorApproximation hs_integral_operator(const DenseHermitian& H, double tau,
                                           Quadrature quad) {
    if (!(tau > 0.0)) throw parameter_error("tau must be positive");
    const auto eig = eigendecompose(H);
    const Eigen::Index d = eig.dim();
    const double sqrt_tau = std::sqrt(tau);

    Eigen::VectorXcd target(d), approx(d);
    for (Eigen::Index k = 0; k < d; ++k)
        target[k] = std::exp(-tau * eig.energies[k] * eig.energies[k]);

    if (quad.rule == Quadrature::Rule::riemann) {
        const std::int64_t m = quad.order;
        const auto weights = gaussian_weights(m);  // delta e^{-x_j^2} / sqrt(pi) folded
        const double step = std::sqrt(2.0 / static_cast<double>(m));
        for (Eigen::Index k = 0; k < d; ++k) {
            const double omega = 2.0 * sqrt_tau * eig.energies[k];
            double acc = weights[0];
            for (std::int64_t j = 1; j <= m / 2; ++j)
                acc += 2.0 * weights[static_cast<size_t>(j)] *
                       std::cos(omega * step * static_cast<double>(j));
            approx[k] = acc;
        }
        auto out = finish(eig, std::move(target), std::move(approx));
        out.parameters = {{"tau", tau}, {"m", static_cast<double>(m)}};
        return out;
    }

    const std::int64_t n = quad.order;
    const auto rule = gauss_hermite_rule(n);
    const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
    for (Eigen::Index k = 0; k < d; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::int64_t q = 0; q < n; ++q)
            acc += rule.weights[q] *
                   std::polar(1.0, -2.0 * rule.nodes[q] * sqrt_tau * eig.energies[k]);
        approx[k] = inv_sqrt_pi * acc;
    }
    auto out = finish(eig, std::move(target), std::move(approx));

    // (n! 2^n / (2n)!) (2 tau)^n ||H^2n||, evaluated in log space.
    const double max_abs_e = eig.energies.cwiseAbs().maxCoeff();
    double log_bound = std::lgamma(static_cast<double>(n) + 1.0) -
                       std::lgamma(2.0 * static_cast<double>(n) + 1.0) +
                       static_cast<double>(n) * std::log(2.0) +
                       static_cast<double>(n) * std::log(2.0 * tau);
    if (max_abs_e > 0.0)
        log_bound += 2.0 * static_cast<double>(n) * std::log(max_abs_e);
    else if (n > 0)
        log_bound = -std::numeric_limits<double>::infinity();
    out.bound = std::exp(log_bound);
    out.parameters = {{"tau", tau}, {"n", static_cast<double>(n)}};
    if (!(out.error_norm <= *out.bound))
        throw validation_error("Gauss-Hermite error exceeded its analytic bound");
    return out;
}

double crooks_like_expectation(const Trajectory& traj) {
    validate(traj);
    if (traj.initial_condition != InitialCondition::pure)
        throw validation_error("crooks_like_expectation needs a pure-state trajectory");
    const auto weights = gaussian_weights(traj.m);
    double acc = weights[0] * traj.records[0].state_overlap.real();
    for (std::int64_t j = 1; j <= traj.m / 2; ++j)
        acc += 2.0 * weights[static_cast<size_t>(j)] *
               traj.records[static_cast<size_t>(j)].state_overlap.real();
    return acc;
}

double crooks_reference(const StateVector& psi0, const DenseHermitian& H, double tau) {
    const auto eig = eigendecompose(H);
    if (psi0.amplitudes.size() != eig.dim())
        throw validation_error("state dimension does not match Hamiltonian");
    const Eigen::VectorXcd a = eig.eigenvectors.adjoint() * psi0.amplitudes;
    double acc = 0.0;
    for (Eigen::Index k = 0; k < eig.dim(); ++k)
        acc += std::norm(a[k]) * std::exp(-tau * eig.energies[k] * eig.energies[k]);
    return acc;
}

std::pair<std::int64_t, std::int64_t> snap_inversion_m(std::int64_t m) {
    if (m < 2) throw parameter_error("m must be >= 2");
    const std::int64_t K = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(m) / 2.0))));
    return {2 * K * K, K};
}

OperatorApproximation invert_itqde_propagator(const DenseHermitian& H, double tau,
                                              double t, std::int64_t K) {
    if (K < 1) throw parameter_error("K must be >= 1");
    if (!(tau > 0.0)) throw parameter_error("tau must be positive");
    const std::int64_t m = 2 * K * K;
    const double sqrt_tau = std::sqrt(tau);
    // t must sit on the grid t = 2k sqrt(2 dtau) = 2k sqrt(tau)/K.
    const double k_real = t * static_cast<double>(K) / (2.0 * sqrt_tau);
    const double k_round = std::round(k_real);
    if (std::abs(k_real - k_round) > 1e-9 * std::max(1.0, std::abs(k_real)))
        throw parameter_error("t is not on the inversion grid t = 2k sqrt(2 dtau)");
    const std::int64_t k = static_cast<std::int64_t>(k_round);

    const auto eig = eigendecompose(H);
    const Eigen::Index d = eig.dim();
    Eigen::VectorXcd target(d), approx(d);
    const double prefactor = std::sqrt(M_PI) * std::exp(t * t / (4.0 * tau));
    for (Eigen::Index i = 0; i < d; ++i) {
        const double E = eig.energies[i];
        target[i] = std::polar(1.0, -t * E);
        std::complex<double> acc{0.0, 0.0};
        for (std::int64_t l = 0; l < K; ++l) {
            const double shifted = E - M_PI * static_cast<double>(l) / sqrt_tau;
            acc += std::exp(-tau * shifted * shifted) *
                   std::polar(1.0, 2.0 * M_PI * static_cast<double>(l) *
                                       static_cast<double>(k) / static_cast<double>(K));
        }
        approx[i] = prefactor * acc;
    }
    auto out = finish(eig, std::move(target), std::move(approx));
    out.parameters = {{"tau", tau},
                      {"t", t},
                      {"K", static_cast<double>(K)},
                      {"k", static_cast<double>(k)},
                      {"m", static_cast<double>(m)}};
    return out;
}

GeneralizedHsResult generalized_hs_check(const StateVector& psi0, const DenseHermitian& H,
                                         double tau, std::int64_t quad_order) {
    if (!(tau > 0.0)) throw parameter_error("tau must be positive");
    const auto eig = eigendecompose(H);
    const Eigen::Index d = eig.dim();
    if (psi0.amplitudes.size() != d)
        throw validation_error("state dimension does not match Hamiltonian");
    const Eigen::VectorXcd a = eig.eigenvectors.adjoint() * psi0.amplitudes;
    const double sqrt_tau = std::sqrt(tau);

    // Right-hand side by Gauss-Hermite quadrature, in the eigenbasis.
    const auto rule = gauss_hermite_rule(quad_order);
    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(d, d);
    const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
    for (std::int64_t q = 0; q < quad_order; ++q) {
        Eigen::VectorXcd rotated(d);
        for (Eigen::Index kk = 0; kk < d; ++kk)
            rotated[kk] = std::polar(1.0, -rule.nodes[q] * sqrt_tau * eig.energies[kk]) * a[kk];
        // both legs carry e^{-ix sqrt(tau) H}, so the bra picks up the
        // conjugate-of-conjugate: rotated * rotated^T with plain transpose
        // would lose the a_l conjugation; build elementwise instead.
        for (Eigen::Index r = 0; r < d; ++r)
            for (Eigen::Index c = 0; c < d; ++c)
                rhs(r, c) += inv_sqrt_pi * rule.weights[q] * rotated[r] *
                             std::polar(1.0, -rule.nodes[q] * sqrt_tau * eig.energies[c]) *
                             std::conj(a[c]);
    }

    GeneralizedHsResult out;
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
            const double Ek = eig.energies[r], El = eig.energies[c];
            const std::complex<double> rho = a[r] * std::conj(a[c]);
            const double damp = std::exp(-tau * (Ek * Ek + El * El) / 2.0);
            const std::complex<double> printed = rho * std::exp(-tau * Ek * El / 2.0) * damp;
            const std::complex<double> corrected =
                rho * std::exp(tau * (Ek - El) * (Ek - El) / 4.0) * damp;
            out.deviation_printed =
                std::max(out.deviation_printed, std::abs(printed - rhs(r, c)));
            out.deviation_corrected =
                std::max(out.deviation_corrected, std::abs(corrected - rhs(r, c)));
        }
    }
    return out;
}

double two_level_acceleration(double Ebar, double Delta, double lambda, double tau) {
    if (!(Delta > 0.0)) throw parameter_error("Delta must be positive");
    return std::exp(-4.0 * tau * Delta * (Ebar + lambda));
}

}  // namespace itqde
