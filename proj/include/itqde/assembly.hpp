// assembly.hpp — imaginary-time expectation curves and partition functions
// assembled from a trajectory, with the lambda shift applied as a phase in
// post-processing.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "itqde/trajectory.hpp"
#include "itqde/weights.hpp"

namespace itqde {

inline constexpr double kDefaultPartitionFloor = 1e-13;

// Curves are evaluated on every even prefix m_k = 2, 4, ..., m of a single
// trajectory, at tau_k = m_k * dtau. Prefixes whose |Z| fell below the floor
// are flagged and their value is NaN.
struct ImaginaryTimeCurve {
    double dtau = 0.0;
    double lambda = 0.0;
    WeightScheme scheme = WeightScheme::exact_binomial;
    std::vector<double> taus;
    std::vector<double> values;     // <O>(tau_k) under the lambda-shifted state
    std::vector<double> partition;  // Z^(lambda)(tau_k)
    std::vector<std::uint8_t> flagged;

    std::size_t size() const { return taus.size(); }
};

ImaginaryTimeCurve assemble_curve(const Trajectory& traj,
                                  const std::string& observable_label, double lambda,
                                  WeightScheme scheme,
                                  double partition_floor = kDefaultPartitionFloor);

struct SteadyState {
    double value = 0.0;
    double half_range = 0.0;  // convergence diagnostic over the window
    int points_used = 0;
};

// Mean of the final `window` curve values, flagged points excluded.
SteadyState steady_state(const ImaginaryTimeCurve& curve, int window);

// zeta = |estimate - exact| / |ground|; `ground` is the minimum eigenenergy
// so near-zero eigenvalues do not blow the ratio up.
double relative_error(double estimate, double exact, double ground);

// Smallest tau_k whose value (and every later one) is within tol of target;
// nullopt when the curve never settles.
std::optional<double> convergence_tau(const ImaginaryTimeCurve& curve, double target,
                                      double tol);

}  // namespace itqde
