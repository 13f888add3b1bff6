#include "itqde/assembly.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "assembly_internal.hpp"
#include "itqde/errors.hpp"

namespace itqde {

namespace detail {

// Per-prefix folded weight rows, shared across a lambda sweep. rows[p]
// belongs to prefix m_k = 2(p+1). Empty when the table would exceed the
// byte cap; callers then fall back to per-prefix recomputation.
WeightTable build_weight_table(std::int64_t m, WeightScheme scheme,
                               std::size_t byte_cap) {
    WeightTable table;
    const std::size_t doubles = static_cast<std::size_t>(m / 2) * (m / 2 + 3) / 2;
    if (doubles * sizeof(double) > byte_cap) return table;
    table.rows.reserve(static_cast<std::size_t>(m / 2));
    for (std::int64_t mk = 2; mk <= m; mk += 2) table.rows.push_back(make_weights(mk, scheme));
    return table;
}

ImaginaryTimeCurve assemble_with_table(const Trajectory& traj, std::int64_t obs_index,
                                       double lambda, WeightScheme scheme,
                                       double partition_floor,
                                       const WeightTable* table) {
    const std::int64_t half = traj.m / 2;

    // Phase factors exp(+i 2j sqrt(2 dtau) lambda); the sign pairs with the
    // <psi_{2j}|...|psi_{-2j}> record convention and is pinned by the dense
    // superoperator identity exercised in the tests.
    const double phase_step = 2.0 * std::sqrt(2.0 * traj.dtau) * lambda;
    std::vector<std::complex<double>> phased_s(static_cast<std::size_t>(half) + 1);
    std::vector<std::complex<double>> phased_o(static_cast<std::size_t>(half) + 1);
    for (std::int64_t j = 0; j <= half; ++j) {
        const auto phase = std::polar(1.0, phase_step * static_cast<double>(j));
        const auto& rec = traj.records[static_cast<std::size_t>(j)];
        phased_s[static_cast<std::size_t>(j)] = phase * rec.state_overlap;
        phased_o[static_cast<std::size_t>(j)] =
            phase * rec.observable_overlaps[static_cast<std::size_t>(obs_index)];
    }

    ImaginaryTimeCurve curve;
    curve.dtau = traj.dtau;
    curve.lambda = lambda;
    curve.scheme = scheme;
    curve.taus.reserve(static_cast<std::size_t>(half));
    std::vector<double> local;
    for (std::int64_t mk = 2; mk <= traj.m; mk += 2) {
        const std::size_t p = static_cast<std::size_t>(mk / 2 - 1);
        const std::vector<double>* w;
        if (table && !table->rows.empty()) {
            w = &table->rows[p];
        } else {
            local = make_weights(mk, scheme);
            w = &local;
        }
        // Folded sums: the j = 0 term enters once, j >= 1 with its conjugate
        // partner, so both Z and the numerator are real up to roundoff.
        std::complex<double> z = (*w)[0] * phased_s[0];
        std::complex<double> num = (*w)[0] * phased_o[0];
        for (std::int64_t j = 1; j <= mk / 2; ++j) {
            const double wj = (*w)[static_cast<std::size_t>(j)];
            z += 2.0 * wj * phased_s[static_cast<std::size_t>(j)].real();
            num += 2.0 * wj * phased_o[static_cast<std::size_t>(j)].real();
        }
        const double zmag = std::max(std::abs(z.real()), 1.0);
        if (std::abs(z.imag()) > 1e-9 * zmag)
            throw validation_error("partition function acquired an imaginary part");

        curve.taus.push_back(static_cast<double>(mk) * traj.dtau);
        curve.partition.push_back(z.real());
        if (std::abs(z.real()) < partition_floor) {
            curve.values.push_back(std::numeric_limits<double>::quiet_NaN());
            curve.flagged.push_back(1);
        } else {
            curve.values.push_back(num.real() / z.real());
            curve.flagged.push_back(0);
        }
    }
    return curve;
}

}  // namespace detail

ImaginaryTimeCurve assemble_curve(const Trajectory& traj,
                                  const std::string& observable_label, double lambda,
                                  WeightScheme scheme, double partition_floor) {
    validate(traj);
    const std::int64_t idx = traj.observable_index(observable_label);
    if (idx < 0)
        throw validation_error("trajectory has no observable '" + observable_label + "'");
    return detail::assemble_with_table(traj, idx, lambda, scheme, partition_floor,
                                       nullptr);
}

SteadyState steady_state(const ImaginaryTimeCurve& curve, int window) {
    if (window < 1 || static_cast<std::size_t>(window) > curve.size())
        throw parameter_error("steady-state window out of range");
    SteadyState out;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::size_t k = curve.size() - static_cast<std::size_t>(window);
         k < curve.size(); ++k) {
        if (curve.flagged[k]) continue;
        sum += curve.values[k];
        lo = std::min(lo, curve.values[k]);
        hi = std::max(hi, curve.values[k]);
        ++out.points_used;
    }
    if (out.points_used == 0)
        throw no_steady_state_error("every value in the steady-state window is singular");
    out.value = sum / out.points_used;
    out.half_range = (hi - lo) / 2.0;
    return out;
}

double relative_error(double estimate, double exact, double ground) {
    if (ground == 0.0) throw parameter_error("ground energy must be nonzero");
    return std::abs(estimate - exact) / std::abs(ground);
}

std::optional<double> convergence_tau(const ImaginaryTimeCurve& curve, double target,
                                      double tol) {
    if (!(tol > 0.0)) throw parameter_error("tolerance must be positive");
    std::optional<double> candidate;
    for (std::size_t k = 0; k < curve.size(); ++k) {
        if (curve.flagged[k]) continue;
        if (std::abs(curve.values[k] - target) < tol) {
            if (!candidate) candidate = curve.taus[k];
        } else {
            candidate.reset();
        }
    }
    return candidate;
}

}  // namespace itqde
