// config.hpp — experiment configuration: one structured JSON document,
// figure presets included, with a canonical form for hashing.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "itqde/pauli.hpp"
#include "itqde/sampling.hpp"
#include "itqde/weights.hpp"

namespace itqde {

struct ModelConfig {
    enum class Kind { tfim, fermi_hubbard, custom } kind = Kind::tfim;
    // tfim
    double J = 1.0, h = 1.0;
    int L = 2;
    Boundary boundary = Boundary::open;
    // fermi_hubbard
    double t = -1.0, U = 0.0, mu = 0.0;
    enum class LatticeShape { chain, grid } lattice_shape = LatticeShape::chain;
    int rows = 1, cols = 2;
    // custom
    std::vector<PauliTerm> terms;
};

struct MethodConfig {
    enum class Kind { exact, sampled } kind = Kind::exact;
    // exact
    bool maximally_mixed = true;
    std::uint64_t basis_index = 0;  // pure initial state when not mixed
    // sampled
    std::int64_t shots = 4000;
    EnsembleKind ensemble = EnsembleKind::clifford_ensemble;
    std::int64_t ensemble_size = 1;
    bool exact_shots = false;
    OverlapRoute route = OverlapRoute::hadamard;
};

struct LambdaGrid {
    enum class Kind { list, linspace, span_spectrum, negated_spectrum } kind = Kind::list;
    std::vector<double> values;  // list
    double min = 0.0, max = 0.0;
    int count = 0;          // linspace / span_spectrum
    double factor = 1.1;    // span_spectrum: [-factor max|E|, +factor max|E|]
};

struct ItqdeConfig {
    double dtau = 0.01;
    std::int64_t m = 100;
    WeightScheme scheme = WeightScheme::exact_binomial;
    LambdaGrid lambdas;
    int window = 0;  // 0 = last 10% of prefixes
    std::vector<double> curve_lambdas;
};

struct ObservableConfig {
    std::string label = "H";
    std::vector<PauliTerm> terms;  // empty means the model Hamiltonian
};

struct RunConfig {
    ModelConfig model;
    MethodConfig method;
    ItqdeConfig itqde;
    std::vector<ObservableConfig> observables{{}};
    std::string output = "runs/out";
    std::uint64_t seed = 1;
    int dense_cap = kDefaultDenseQubitCap;
};

RunConfig parse_config(const std::string& json_text);
std::string canonical_config_json(const RunConfig& cfg);
std::string config_hash_hex(const RunConfig& cfg);  // FNV-1a 64 of the canonical form

std::vector<std::string> preset_names();
RunConfig preset_config(const std::string& name);

}  // namespace itqde
