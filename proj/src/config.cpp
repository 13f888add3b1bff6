#include "itqde/config.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "itqde/errors.hpp"

namespace itqde {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw validation_error(path + ": " + what);
}

double get_number(const json& j, const std::string& path, const char* key,
                  std::optional<double> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        fail(path + "." + key, "missing required number");
    }
    if (!j.at(key).is_number()) fail(path + "." + key, "expected a number");
    return j.at(key).get<double>();
}

std::int64_t get_int(const json& j, const std::string& path, const char* key,
                     std::optional<std::int64_t> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        fail(path + "." + key, "missing required integer");
    }
    if (!j.at(key).is_number_integer()) fail(path + "." + key, "expected an integer");
    return j.at(key).get<std::int64_t>();
}

std::string get_string(const json& j, const std::string& path, const char* key,
                       std::optional<std::string> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        fail(path + "." + key, "missing required string");
    }
    if (!j.at(key).is_string()) fail(path + "." + key, "expected a string");
    return j.at(key).get<std::string>();
}

Boundary parse_boundary(const std::string& s, const std::string& path) {
    if (s == "open") return Boundary::open;
    if (s == "periodic") return Boundary::periodic;
    fail(path, "boundary must be 'open' or 'periodic'");
}

std::vector<PauliTerm> parse_terms(const json& arr, const std::string& path) {
    if (!arr.is_array() || arr.empty()) fail(path, "expected a non-empty term array");
    std::vector<PauliTerm> terms;
    for (const auto& t : arr)
        terms.push_back({t.at("coeff").get<double>(), t.at("letters").get<std::string>()});
    return terms;
}

ModelConfig parse_model(const json& j) {
    ModelConfig m;
    const std::string kind = get_string(j, "model", "kind");
    if (kind == "tfim") {
        m.kind = ModelConfig::Kind::tfim;
        m.J = get_number(j, "model", "J");
        m.h = get_number(j, "model", "h");
        m.L = static_cast<int>(get_int(j, "model", "L"));
        m.boundary = parse_boundary(get_string(j, "model", "boundary", "open"),
                                    "model.boundary");
    } else if (kind == "fermi_hubbard") {
        m.kind = ModelConfig::Kind::fermi_hubbard;
        m.t = get_number(j, "model", "t");
        m.U = get_number(j, "model", "U");
        m.mu = get_number(j, "model", "mu");
        m.boundary = parse_boundary(get_string(j, "model", "boundary", "periodic"),
                                    "model.boundary");
        if (!j.contains("lattice")) fail("model.lattice", "missing lattice description");
        const auto& lat = j.at("lattice");
        const std::string shape = get_string(lat, "model.lattice", "shape");
        if (shape == "chain") {
            m.lattice_shape = ModelConfig::LatticeShape::chain;
            m.rows = 1;
            m.cols = static_cast<int>(get_int(lat, "model.lattice", "L"));
        } else if (shape == "grid") {
            m.lattice_shape = ModelConfig::LatticeShape::grid;
            m.rows = static_cast<int>(get_int(lat, "model.lattice", "rows"));
            m.cols = static_cast<int>(get_int(lat, "model.lattice", "cols"));
        } else {
            fail("model.lattice.shape", "must be 'chain' or 'grid'");
        }
    } else if (kind == "custom") {
        m.kind = ModelConfig::Kind::custom;
        if (!j.contains("terms")) fail("model.terms", "missing term list");
        m.terms = parse_terms(j.at("terms"), "model.terms");
    } else {
        fail("model.kind", "must be 'tfim', 'fermi_hubbard', or 'custom'");
    }
    return m;
}

MethodConfig parse_method(const json& j) {
    MethodConfig m;
    const std::string kind = get_string(j, "method", "kind", "exact");
    if (kind == "exact") {
        m.kind = MethodConfig::Kind::exact;
        const std::string initial = get_string(j, "method", "initial", "maximally_mixed");
        if (initial == "maximally_mixed") {
            m.maximally_mixed = true;
        } else if (initial == "zero") {
            m.maximally_mixed = false;
            m.basis_index = 0;
        } else if (initial == "basis") {
            m.maximally_mixed = false;
            m.basis_index = static_cast<std::uint64_t>(get_int(j, "method", "basis_index", 0));
        } else {
            fail("method.initial", "must be 'maximally_mixed', 'zero', or 'basis'");
        }
    } else if (kind == "sampled") {
        m.kind = MethodConfig::Kind::sampled;
        m.shots = get_int(j, "method", "shots", 4000);
        if (m.shots < 1) fail("method.shots", "must be >= 1");
        const std::string ens = get_string(j, "method", "ensemble", "clifford");
        if (ens == "fixed") m.ensemble = EnsembleKind::fixed_state;
        else if (ens == "basis") m.ensemble = EnsembleKind::basis_ensemble;
        else if (ens == "clifford") m.ensemble = EnsembleKind::clifford_ensemble;
        else fail("method.ensemble", "must be 'fixed', 'basis', or 'clifford'");
        m.ensemble_size = get_int(j, "method", "ensemble_size", 1);
        if (m.ensemble_size < 1) fail("method.ensemble_size", "must be >= 1");
        if (j.contains("exact_shots")) m.exact_shots = j.at("exact_shots").get<bool>();
        const std::string route = get_string(j, "method", "route", "hadamard");
        if (route == "hadamard") m.route = OverlapRoute::hadamard;
        else if (route == "estimator") m.route = OverlapRoute::estimator;
        else fail("method.route", "must be 'hadamard' or 'estimator'");
    } else {
        fail("method.kind", "must be 'exact' or 'sampled'");
    }
    return m;
}

LambdaGrid parse_lambdas(const json& j) {
    LambdaGrid g;
    if (j.is_array()) {
        g.kind = LambdaGrid::Kind::list;
        g.values = j.get<std::vector<double>>();
        if (g.values.empty()) fail("itqde.lambdas", "lambda list must be non-empty");
        if (!std::is_sorted(g.values.begin(), g.values.end()))
            fail("itqde.lambdas", "lambda list must be sorted ascending");
        return g;
    }
    if (!j.is_object()) fail("itqde.lambdas", "expected an array or an object");
    const std::string kind = get_string(j, "itqde.lambdas", "kind", "linspace");
    if (kind == "linspace") {
        g.kind = LambdaGrid::Kind::linspace;
        g.min = get_number(j, "itqde.lambdas", "min");
        g.max = get_number(j, "itqde.lambdas", "max");
        g.count = static_cast<int>(get_int(j, "itqde.lambdas", "count"));
        if (g.count < 1) fail("itqde.lambdas.count", "must be >= 1");
        if (!(g.min <= g.max)) fail("itqde.lambdas", "min must be <= max");
    } else if (kind == "span_spectrum") {
        g.kind = LambdaGrid::Kind::span_spectrum;
        g.factor = get_number(j, "itqde.lambdas", "factor", 1.1);
        g.count = static_cast<int>(get_int(j, "itqde.lambdas", "count", 200));
        if (g.count < 1) fail("itqde.lambdas.count", "must be >= 1");
    } else if (kind == "negated_spectrum") {
        g.kind = LambdaGrid::Kind::negated_spectrum;
    } else {
        fail("itqde.lambdas.kind", "must be 'linspace', 'span_spectrum', or 'negated_spectrum'");
    }
    return g;
}

ItqdeConfig parse_itqde(const json& j) {
    ItqdeConfig c;
    c.dtau = get_number(j, "itqde", "dtau");
    if (!(c.dtau > 0.0)) fail("itqde.dtau", "must be positive");
    c.m = get_int(j, "itqde", "m");
    if (c.m < 2 || c.m % 2 != 0) fail("itqde.m", "must be an even integer >= 2");
    const std::string scheme = get_string(j, "itqde", "scheme", "binomial");
    if (scheme == "binomial") c.scheme = WeightScheme::exact_binomial;
    else if (scheme == "gaussian") c.scheme = WeightScheme::gaussian_asymptotic;
    else fail("itqde.scheme", "must be 'binomial' or 'gaussian'");
    if (!j.contains("lambdas")) fail("itqde.lambdas", "missing lambda grid");
    c.lambdas = parse_lambdas(j.at("lambdas"));
    c.window = static_cast<int>(get_int(j, "itqde", "window", 0));
    if (c.window < 0 || c.window > c.m / 2) fail("itqde.window", "out of range");
    if (j.contains("curve_lambdas"))
        c.curve_lambdas = j.at("curve_lambdas").get<std::vector<double>>();
    return c;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw validation_error(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg;
    try {
        if (!root.contains("model")) fail("model", "missing section");
        cfg.model = parse_model(root.at("model"));
        cfg.method = root.contains("method") ? parse_method(root.at("method"))
                                             : MethodConfig{};
        if (!root.contains("itqde")) fail("itqde", "missing section");
        cfg.itqde = parse_itqde(root.at("itqde"));
        cfg.observables.clear();
        if (root.contains("observables")) {
            for (const auto& o : root.at("observables")) {
                ObservableConfig oc;
                if (o.is_string()) {
                    oc.label = o.get<std::string>();
                    if (oc.label != "H")
                        fail("observables", "only 'H' is built in; custom observables "
                                            "need {label, terms}");
                } else {
                    oc.label = get_string(o, "observables[]", "label");
                    oc.terms = parse_terms(o.at("terms"), "observables[].terms");
                }
                cfg.observables.push_back(std::move(oc));
            }
        }
        if (cfg.observables.empty()) cfg.observables.push_back({});
        if (root.contains("output")) cfg.output = root.at("output").get<std::string>();
        if (root.contains("seed"))
            cfg.seed = root.at("seed").get<std::uint64_t>();
        if (root.contains("dense_cap"))
            cfg.dense_cap = static_cast<int>(root.at("dense_cap").get<std::int64_t>());
        if (cfg.dense_cap < 1) fail("dense_cap", "must be >= 1");
    } catch (const json::exception& e) {
        throw validation_error(std::string("malformed config: ") + e.what());
    }
    return cfg;
}

namespace {

json lambdas_to_json(const LambdaGrid& g) {
    switch (g.kind) {
        case LambdaGrid::Kind::list: return json(g.values);
        case LambdaGrid::Kind::linspace:
            return json{{"kind", "linspace"}, {"min", g.min}, {"max", g.max},
                        {"count", g.count}};
        case LambdaGrid::Kind::span_spectrum:
            return json{{"kind", "span_spectrum"}, {"factor", g.factor},
                        {"count", g.count}};
        case LambdaGrid::Kind::negated_spectrum: return json{{"kind", "negated_spectrum"}};
    }
    return {};
}

json terms_to_json(const std::vector<PauliTerm>& terms) {
    json arr = json::array();
    for (const auto& t : terms)
        arr.push_back(json{{"coeff", t.coefficient}, {"letters", t.letters}});
    return arr;
}

}  // namespace

std::string canonical_config_json(const RunConfig& cfg) {
    json model;
    switch (cfg.model.kind) {
        case ModelConfig::Kind::tfim:
            model = {{"kind", "tfim"},
                     {"J", cfg.model.J},
                     {"h", cfg.model.h},
                     {"L", cfg.model.L},
                     {"boundary", cfg.model.boundary == Boundary::open ? "open" : "periodic"}};
            break;
        case ModelConfig::Kind::fermi_hubbard:
            model = {{"kind", "fermi_hubbard"},
                     {"t", cfg.model.t},
                     {"U", cfg.model.U},
                     {"mu", cfg.model.mu},
                     {"boundary", cfg.model.boundary == Boundary::open ? "open" : "periodic"}};
            if (cfg.model.lattice_shape == ModelConfig::LatticeShape::chain)
                model["lattice"] = {{"shape", "chain"}, {"L", cfg.model.cols}};
            else
                model["lattice"] = {{"shape", "grid"}, {"rows", cfg.model.rows},
                                    {"cols", cfg.model.cols}};
            break;
        case ModelConfig::Kind::custom:
            model = {{"kind", "custom"}, {"terms", terms_to_json(cfg.model.terms)}};
            break;
    }

    json method;
    if (cfg.method.kind == MethodConfig::Kind::exact) {
        method = {{"kind", "exact"}};
        if (cfg.method.maximally_mixed) {
            method["initial"] = "maximally_mixed";
        } else {
            method["initial"] = "basis";
            method["basis_index"] = cfg.method.basis_index;
        }
    } else {
        const char* ens = cfg.method.ensemble == EnsembleKind::fixed_state ? "fixed"
                          : cfg.method.ensemble == EnsembleKind::basis_ensemble ? "basis"
                                                                                : "clifford";
        method = {{"kind", "sampled"},
                  {"shots", cfg.method.shots},
                  {"ensemble", ens},
                  {"ensemble_size", cfg.method.ensemble_size},
                  {"exact_shots", cfg.method.exact_shots},
                  {"route", cfg.method.route == OverlapRoute::hadamard ? "hadamard"
                                                                       : "estimator"}};
    }

    json itqde = {{"dtau", cfg.itqde.dtau},
                  {"m", cfg.itqde.m},
                  {"scheme", cfg.itqde.scheme == WeightScheme::exact_binomial ? "binomial"
                                                                              : "gaussian"},
                  {"lambdas", lambdas_to_json(cfg.itqde.lambdas)},
                  {"window", cfg.itqde.window},
                  {"curve_lambdas", cfg.itqde.curve_lambdas}};

    json observables = json::array();
    for (const auto& o : cfg.observables) {
        if (o.terms.empty())
            observables.push_back(o.label);
        else
            observables.push_back(json{{"label", o.label}, {"terms", terms_to_json(o.terms)}});
    }

    const json root = {{"model", model},       {"method", method},
                       {"itqde", itqde},       {"observables", observables},
                       {"output", cfg.output}, {"seed", cfg.seed},
                       {"dense_cap", cfg.dense_cap}};
    return root.dump(2) + "\n";
}

std::string config_hash_hex(const RunConfig& cfg) {
    const std::string text = canonical_config_json(cfg);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::string> preset_names() {
    return {"tfim8-fig2", "fh4-fig4", "tfim2-hw-fig6", "tfim3-estimator"};
}

RunConfig preset_config(const std::string& name) {
    RunConfig cfg;
    if (name == "tfim8-fig2") {
        cfg.model.kind = ModelConfig::Kind::tfim;
        cfg.model.J = 1.0;
        cfg.model.h = 14.0;
        cfg.model.L = 8;
        cfg.model.boundary = Boundary::open;
        cfg.method.kind = MethodConfig::Kind::exact;
        cfg.method.maximally_mixed = true;
        cfg.itqde.dtau = 0.4e-5;
        cfg.itqde.m = 1000;
        cfg.itqde.scheme = WeightScheme::exact_binomial;
        cfg.itqde.lambdas.kind = LambdaGrid::Kind::span_spectrum;
        cfg.itqde.lambdas.factor = 1.1;
        cfg.itqde.lambdas.count = 200;
        cfg.itqde.curve_lambdas = {0.0};
        cfg.output = "runs/tfim8-fig2";
        cfg.seed = 20240201;
    } else if (name == "fh4-fig4") {
        cfg.model.kind = ModelConfig::Kind::fermi_hubbard;
        cfg.model.t = -1.0;
        cfg.model.U = 2.0;
        cfg.model.mu = 0.5;
        cfg.model.boundary = Boundary::periodic;
        cfg.model.lattice_shape = ModelConfig::LatticeShape::grid;
        cfg.model.rows = 2;
        cfg.model.cols = 2;
        cfg.method.kind = MethodConfig::Kind::exact;
        cfg.method.maximally_mixed = true;
        cfg.itqde.dtau = 0.003;
        cfg.itqde.m = 1500;
        cfg.itqde.scheme = WeightScheme::exact_binomial;
        cfg.itqde.lambdas.kind = LambdaGrid::Kind::span_spectrum;
        cfg.itqde.lambdas.factor = 1.1;
        cfg.itqde.lambdas.count = 200;
        cfg.itqde.curve_lambdas = {0.0};
        cfg.output = "runs/fh4-fig4";
        cfg.seed = 20240202;
    } else if (name == "tfim2-hw-fig6") {
        cfg.model.kind = ModelConfig::Kind::tfim;
        cfg.model.J = 1.0;
        cfg.model.h = 2.0;
        cfg.model.L = 2;
        cfg.model.boundary = Boundary::open;
        cfg.method.kind = MethodConfig::Kind::sampled;
        cfg.method.shots = 4000;
        cfg.method.ensemble = EnsembleKind::clifford_ensemble;
        cfg.method.ensemble_size = 104;
        cfg.itqde.dtau = 0.01;
        cfg.itqde.m = 100;
        cfg.itqde.scheme = WeightScheme::gaussian_asymptotic;
        cfg.itqde.lambdas.kind = LambdaGrid::Kind::negated_spectrum;
        cfg.output = "runs/tfim2-hw-fig6";
        cfg.seed = 20240203;
    } else if (name == "tfim3-estimator") {
        cfg.model.kind = ModelConfig::Kind::tfim;
        cfg.model.J = 1.0;
        cfg.model.h = 2.0;
        cfg.model.L = 3;
        cfg.model.boundary = Boundary::open;
        cfg.method.kind = MethodConfig::Kind::sampled;
        cfg.method.ensemble = EnsembleKind::fixed_state;
        cfg.method.ensemble_size = 1;
        cfg.method.exact_shots = true;
        cfg.method.route = OverlapRoute::estimator;
        cfg.itqde.dtau = 0.01;
        cfg.itqde.m = 200;
        cfg.itqde.scheme = WeightScheme::gaussian_asymptotic;
        cfg.itqde.lambdas.kind = LambdaGrid::Kind::negated_spectrum;
        cfg.output = "runs/tfim3-estimator";
        cfg.seed = 20240204;
    } else {
        throw validation_error("unknown preset '" + name + "'");
    }
    return cfg;
}

}  // namespace itqde
