#include "itqde/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "assembly_internal.hpp"
#include "itqde/errors.hpp"

namespace itqde {

namespace {

constexpr std::size_t kWeightTableByteCap = 64ull << 20;

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

SpectrumEstimate sweep_lambda(const Trajectory& traj, const std::string& observable_label,
                              const std::vector<double>& lambdas, WeightScheme scheme,
                              int window, bool parallel) {
    validate(traj);
    if (lambdas.empty()) throw parameter_error("lambda grid must be non-empty");
    if (!std::is_sorted(lambdas.begin(), lambdas.end()))
        throw validation_error("lambda grid must be sorted ascending");
    const std::int64_t obs = traj.observable_index(observable_label);
    if (obs < 0)
        throw validation_error("trajectory has no observable '" + observable_label + "'");
    if (window == 0)
        window = std::max<int>(1, static_cast<int>(traj.m / 2 / 10));
    if (window < 1 || window > traj.m / 2)
        throw parameter_error("steady-state window out of range");

    const auto table = detail::build_weight_table(traj.m, scheme, kWeightTableByteCap);

    SpectrumEstimate est;
    est.lambdas = lambdas;
    const std::int64_t count = static_cast<std::int64_t>(lambdas.size());
    est.steady_values.assign(lambdas.size(), 0.0);
    est.steady_plus_lambda.assign(lambdas.size(), 0.0);
    est.half_ranges.assign(lambdas.size(), 0.0);

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::int64_t i = 0; i < count; ++i) {
        const auto curve = detail::assemble_with_table(traj, obs, lambdas[i], scheme,
                                                       kDefaultPartitionFloor, &table);
        double value = std::numeric_limits<double>::quiet_NaN();
        double half_range = std::numeric_limits<double>::quiet_NaN();
        try {
            const auto steady = steady_state(curve, window);
            value = steady.value;
            half_range = steady.half_range;
        } catch (const no_steady_state_error&) {
            // leave this lambda as NaN; plateau detection skips it
        }
        est.steady_values[i] = value;
        est.steady_plus_lambda[i] = value + lambdas[i];
        est.half_ranges[i] = half_range;
    }

    est.plateaus = detect_plateaus(est.lambdas, est.steady_values);
    return est;
}

std::vector<Plateau> detect_plateaus(const std::vector<double>& lambdas,
                                     const std::vector<double>& steady_values) {
    // Keep only finite points.
    std::vector<double> lam, val;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (std::isfinite(steady_values[i])) {
            lam.push_back(lambdas[i]);
            val.push_back(steady_values[i]);
        }
    }
    const std::size_t n = lam.size();
    std::vector<Plateau> plateaus;
    if (n == 0) return plateaus;

    auto make_plateau = [&](std::size_t lo, std::size_t hi) {
        // Flattest interior point: smallest central-difference slope.
        std::size_t best = lo;
        double best_slope = std::numeric_limits<double>::infinity();
        for (std::size_t i = lo; i <= hi; ++i) {
            const std::size_t a = i > lo ? i - 1 : i;
            const std::size_t b = i < hi ? i + 1 : i;
            const double dl = lam[b] - lam[a];
            const double slope = dl > 0.0 ? std::abs((val[b] - val[a]) / dl) : 0.0;
            if (slope < best_slope) {
                best_slope = slope;
                best = i;
            }
        }
        Plateau p;
        p.energy = val[best];
        p.lambda_lo = lam[lo];
        p.lambda_hi = lam[hi];
        p.points = static_cast<int>(hi - lo + 1);
        return p;
    };

    if (n <= 2) {
        plateaus.push_back(make_plateau(0, n - 1));
        return plateaus;
    }

    // Central-difference slope magnitudes.
    std::vector<double> slope(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double dl = lam[i + 1] - lam[i - 1];
        slope[i] = dl > 0.0 ? std::abs((val[i + 1] - val[i - 1]) / dl) : 0.0;
    }
    slope[0] = slope[1];
    slope[n - 1] = slope[n - 2];

    const auto [vmin_it, vmax_it] = std::minmax_element(val.begin(), val.end());
    const double span = *vmax_it - *vmin_it;
    const double lam_range = lam.back() - lam.front();
    const double mean_slope = lam_range > 0.0 ? span / lam_range : 0.0;

    // Cut between plateaus at interior local maxima of the slope that exceed
    // the mean staircase slope; each riser contributes exactly one maximum.
    std::vector<std::size_t> cuts;
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (slope[i] > mean_slope && slope[i] >= slope[i - 1] && slope[i] > slope[i + 1])
            cuts.push_back(i);

    std::vector<std::pair<std::size_t, std::size_t>> segments;
    std::size_t start = 0;
    for (std::size_t cut : cuts) {
        if (cut > start) segments.emplace_back(start, cut - 1);
        start = cut + 1;
    }
    if (start < n) segments.emplace_back(start, n - 1);

    // Merge adjacent segments whose plateau energies agree within epsilon;
    // the merged range spans the dropped cut point as well.
    std::vector<double> energies;
    for (auto [lo, hi] : segments) energies.push_back(make_plateau(lo, hi).energy);
    std::vector<double> gaps;
    for (std::size_t i = 1; i < energies.size(); ++i) {
        const double g = std::abs(energies[i] - energies[i - 1]);
        if (g > 0.0) gaps.push_back(g);
    }
    const double eps = std::max(1e-3 * span, 5.0 * median(gaps));
    std::vector<std::pair<std::size_t, std::size_t>> merged;
    double tail_energy = 0.0;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (!merged.empty() && std::abs(energies[s] - tail_energy) <= eps) {
            merged.back().second = segments[s].second;
        } else {
            merged.push_back(segments[s]);
        }
        tail_energy = energies[s];
    }
    for (auto [lo, hi] : merged) plateaus.push_back(make_plateau(lo, hi));
    return plateaus;
}

}  // namespace itqde
