// runner.hpp — wires models, propagation or sampling, assembly, and sweeps
// into reproducible run directories; also the small-n invariant verifier.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "itqde/config.hpp"
#include "itqde/sweep.hpp"
#include "itqde/trajectory.hpp"

namespace itqde {

struct RunResult {
    std::string directory;
    SpectrumEstimate spectrum;
    Trajectory trajectory;
    std::uint64_t circuit_count = 0;            // sampled runs only
    std::vector<double> ci_lo, ci_hi;           // per-lambda 95% CI, sampled runs
    std::vector<std::string> files;             // everything written, manifest last
};

RunResult run(const RunConfig& cfg, bool parallel = true);

// Per-lambda bootstrap confidence interval of the steady-state estimate,
// resampling ensemble members with replacement (B seeded replicas).
struct SteadyInterval {
    double lo = 0.0, hi = 0.0;
};
std::vector<SteadyInterval> bootstrap_steady_intervals(
    const std::vector<Trajectory>& members, const std::string& label,
    const std::vector<double>& lambdas, WeightScheme scheme, int window,
    std::uint64_t seed, int replicas = 400, double confidence = 0.95);

struct VerifySuite {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifySuite> suites;
    bool all_passed() const;
};

// Small-n invariant suites: dense superoperator equivalence, weight
// normalization, quadrature bounds, estimator/Hadamard agreement.
VerifyReport verify_invariants();

}  // namespace itqde
