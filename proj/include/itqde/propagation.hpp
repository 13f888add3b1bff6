// propagation.hpp — exact real-time stepping U = exp(-i sqrt(dtau/2) H) via
// spectral phases, and the recording of forward/backward overlap trajectories.

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "itqde/dense.hpp"
#include "itqde/pauli.hpp"
#include "itqde/trajectory.hpp"

namespace itqde {

struct StateVector {
    Eigen::VectorXcd amplitudes;

    int qubit_count() const;
    bool is_normalized(double tol = 1e-10) const;
};

StateVector basis_state(int qubit_count, std::uint64_t index);

// One trajectory step. Diagonalizes once; k applications multiply the
// eigenphases raised to k, so no operator products accumulate error.
struct StepPropagator {
    EigenDecomposition eig;
    double dtau = 0.0;
    Eigen::VectorXcd step_phases;  // exp(-i sqrt(dtau/2) E_k), unit modulus

    Eigen::Index dim() const { return eig.dim(); }
};

StepPropagator make_step_propagator(const DenseHermitian& H, double dtau);

// U^steps |psi>; steps may be negative (backward evolution).
StateVector advance(const StepPropagator& prop, const StateVector& psi,
                    std::int64_t steps);

// <bra|O|ket> without densifying O.
std::complex<double> operator_overlap(const StateVector& bra, const ObservableSum& obs,
                                      const StateVector& ket);

using LabeledObservable = std::pair<std::string, ObservableSum>;

// Pure-state trajectory: maintains |psi_{+2j}> and |psi_{-2j}> and advances
// each by two steps per j increment, recording overlaps for j = 0..m/2.
Trajectory evolve_trajectory(const StateVector& psi0, const StepPropagator& prop,
                             std::int64_t m,
                             const std::vector<LabeledObservable>& observables);

// Analytic rho(0) = I/d trajectory from eigenphases:
//   state_overlap(j) = (1/d) sum_k exp(+i 2j sqrt(2 dtau) E_k)
// with observable overlaps weighted by the cached diagonal <E_k|O|E_k>.
Trajectory maximally_mixed_trajectory(const StepPropagator& prop, std::int64_t m,
                                      const std::vector<LabeledObservable>& observables);

}  // namespace itqde
