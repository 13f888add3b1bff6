// sweep.hpp — spectrum extraction from a lambda sweep of steady-state
// expectations over one trajectory.

#pragma once

#include <string>
#include <vector>

#include "itqde/assembly.hpp"
#include "itqde/trajectory.hpp"

namespace itqde {

struct Plateau {
    double energy = 0.0;  // value at the flattest grid point of the plateau
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    int points = 0;
};

struct SpectrumEstimate {
    std::vector<double> lambdas;
    std::vector<double> steady_values;       // <H>(tau_final) per lambda
    std::vector<double> steady_plus_lambda;  // the paper's plotted <H^(lambda)>
    std::vector<double> half_ranges;
    std::vector<Plateau> plateaus;
};

// window = 0 selects the default: the last 10% of prefixes, at least one.
// The sweep parallelizes over lambda; per-lambda outputs are independent, so
// serial and parallel runs agree bit for bit.
SpectrumEstimate sweep_lambda(const Trajectory& traj, const std::string& observable_label,
                              const std::vector<double>& lambdas, WeightScheme scheme,
                              int window = 0, bool parallel = true);

// Plateau detection on a monotone staircase: cut at interior local maxima of
// |dv/dlambda| above the mean slope, take each segment's flattest point, then
// merge segments whose energies agree within
// max(1e-3 * span, 5 * median positive gap).
std::vector<Plateau> detect_plateaus(const std::vector<double>& lambdas,
                                     const std::vector<double>& steady_values);

}  // namespace itqde
