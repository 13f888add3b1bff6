// sampling.hpp — the quantum-algorithm path: Hadamard-test Bernoulli
// emulation of overlap estimates, random initial-state ensembles, and the
// Hermitian-combination estimator alternative.

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "itqde/dense.hpp"
#include "itqde/propagation.hpp"
#include "itqde/trajectory.hpp"

namespace itqde {

enum class EnsembleKind { fixed_state, basis_ensemble, clifford_ensemble };

// How trajectory overlaps are obtained: `hadamard` draws two Bernoulli
// branches per circuit; `estimator` evaluates the Hermitian combinations from
// the forward/backward states and is exact-mode only.
enum class OverlapRoute { hadamard, estimator };

struct ShotPlan {
    std::int64_t shots_per_circuit = 1;
    std::uint64_t seed = 0;
    EnsembleKind ensemble = EnsembleKind::fixed_state;
    std::int64_t ensemble_size = 1;
    bool exact = false;  // zero-noise passthrough (infinite-shot limit)
    OverlapRoute route = OverlapRoute::hadamard;
};

struct SampledOverlap {
    std::int64_t j = 0;
    std::complex<double> estimate{0.0, 0.0};
    double std_error_re = 0.0;
    double std_error_im = 0.0;
    std::int64_t shots_used = 0;
};

// Unitary applied between the state-preparation legs of a Hadamard test:
// W = U^post_steps * P * U^pre_steps (P optional).
struct OverlapCircuit {
    std::int64_t pre_steps = 0;
    std::optional<PauliTerm> pauli;
    std::int64_t post_steps = 0;
};

OverlapCircuit state_overlap_circuit(std::int64_t j);       // W = U^{4j}
OverlapCircuit observable_overlap_circuit(std::int64_t j, PauliTerm term);

std::complex<double> circuit_expectation(const StateVector& psi0,
                                         const OverlapCircuit& circuit,
                                         const StepPropagator& prop);

// Ancilla |0> probabilities of the two Hadamard-test branches:
// p0_real = (1 + Re<W>)/2 and p0_imag = (1 + Im<W>)/2.
struct HadamardProbabilities {
    double p0_real = 0.0;
    double p0_imag = 0.0;
};

HadamardProbabilities hadamard_probabilities(const StateVector& psi0,
                                             const OverlapCircuit& circuit,
                                             const StepPropagator& prop);

// Two independent binomial draws at the exact branch probabilities;
// deterministic in (plan.seed, key).
SampledOverlap sample_overlap(const StateVector& psi0, const OverlapCircuit& circuit,
                              const StepPropagator& prop, const ShotPlan& plan,
                              std::uint64_t key);

// The canonical Pauli expansion O = sum_a c_a P_a; M = result size.
std::vector<std::pair<double, PauliTerm>> decompose_observable(const ObservableSum& obs);

// Stabilizer-circuit or basis-state member `index` of the plan's ensemble;
// deterministic in (index, seed).
StateVector random_initial_state(EnsembleKind kind, int qubit_count, std::int64_t index,
                                 std::uint64_t seed);

// App.-D route: <psi_0| (W O W + W^dag O W^dag)/2 |psi_0> style Hermitian
// combinations with W = U^{2j}, cross-checked against the direct overlap.
std::complex<double> estimator_overlaps(const StateVector& psi0, const StepPropagator& prop,
                                        std::int64_t j, const ObservableSum& obs);

struct SampledTrajectory {
    Trajectory trajectory;            // ensemble mean
    TrajectoryErrors errors;          // standard errors of the mean
    std::uint64_t circuit_count = 0;  // 2 (M+1) (m/2+1) ensemble_size
    std::vector<Trajectory> members;  // per-member trajectories (for resampling)
};

SampledTrajectory sample_trajectory(const DenseHermitian& H, double dtau, std::int64_t m,
                                    const std::vector<LabeledObservable>& observables,
                                    const ShotPlan& plan, bool parallel = true,
                                    const StateVector* fixed_state = nullptr);

// Serial reference for the ensemble fan-out; bit-identical to the parallel path.
SampledTrajectory sample_trajectory_serial(const DenseHermitian& H, double dtau,
                                           std::int64_t m,
                                           const std::vector<LabeledObservable>& observables,
                                           const ShotPlan& plan,
                                           const StateVector* fixed_state = nullptr);

}  // namespace itqde
