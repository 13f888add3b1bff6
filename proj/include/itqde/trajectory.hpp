// trajectory.hpp — the overlap records that are the raw material of every
// assembled quantity.

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace itqde {

enum class InitialCondition { pure, maximally_mixed };

// Overlaps at fold index j: state_overlap = <psi_{2j}|psi_{-2j}> and one
// <psi_{2j}|O|psi_{-2j}> per observable, ordered as Trajectory::observable_labels.
struct OverlapRecord {
    std::int64_t j = 0;
    std::complex<double> state_overlap{0.0, 0.0};
    std::vector<std::complex<double>> observable_overlaps;
};

struct Trajectory {
    double dtau = 0.0;
    std::int64_t m = 0;  // even; records cover j = 0..m/2
    InitialCondition initial_condition = InitialCondition::pure;
    Eigen::VectorXcd initial_amplitudes;  // empty for maximally_mixed
    std::vector<std::string> observable_labels;
    std::vector<OverlapRecord> records;

    std::int64_t observable_index(const std::string& label) const;  // -1 if absent
};

// Standard errors for a sampled trajectory, same shape as the records.
struct TrajectoryErrors {
    std::vector<std::complex<double>> state_se;                 // (re, im) packed as complex
    std::vector<std::vector<std::complex<double>>> observable_se;
};

// Structural checks: contiguous sorted j, record count m/2 + 1, label arity.
void validate(const Trajectory& traj);

}  // namespace itqde
