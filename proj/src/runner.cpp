#include "itqde/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <functional>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "itqde/analysis.hpp"
#include "itqde/assembly.hpp"
#include "itqde/dense.hpp"
#include "itqde/errors.hpp"
#include "itqde/propagation.hpp"
#include "itqde/reference.hpp"
#include "itqde/rng.hpp"
#include "itqde/trajectory_io.hpp"

namespace itqde {

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::json;

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

ObservableSum build_model(const ModelConfig& model) {
    switch (model.kind) {
        case ModelConfig::Kind::tfim:
            return build_tfim(model.J, model.h, model.L, model.boundary);
        case ModelConfig::Kind::fermi_hubbard: {
            const LatticeGraph lattice =
                model.lattice_shape == ModelConfig::LatticeShape::chain
                    ? chain_lattice(model.cols, model.boundary)
                    : grid_lattice(model.rows, model.cols, model.boundary);
            return build_fermi_hubbard(model.t, model.U, model.mu, lattice);
        }
        case ModelConfig::Kind::custom: {
            if (model.terms.empty()) throw validation_error("model.terms: empty");
            const int n = static_cast<int>(model.terms.front().letters.size());
            return make_observable(n, model.terms);
        }
    }
    throw validation_error("model.kind: unknown");
}

std::vector<double> resolve_lambda_grid(const LambdaGrid& grid,
                                        const EigenDecomposition& eig) {
    switch (grid.kind) {
        case LambdaGrid::Kind::list: return grid.values;
        case LambdaGrid::Kind::linspace: {
            std::vector<double> out;
            out.reserve(static_cast<size_t>(grid.count));
            if (grid.count == 1) return {0.5 * (grid.min + grid.max)};
            for (int i = 0; i < grid.count; ++i)
                out.push_back(grid.min + (grid.max - grid.min) * i / (grid.count - 1));
            return out;
        }
        case LambdaGrid::Kind::span_spectrum: {
            const double max_abs = eig.energies.cwiseAbs().maxCoeff();
            LambdaGrid lin;
            lin.kind = LambdaGrid::Kind::linspace;
            lin.min = -grid.factor * max_abs;
            lin.max = grid.factor * max_abs;
            lin.count = grid.count;
            return resolve_lambda_grid(lin, eig);
        }
        case LambdaGrid::Kind::negated_spectrum: {
            const double span =
                eig.energies[eig.dim() - 1] - eig.energies[0];
            const double tol = std::max(1e-9, 1e-9 * span);
            std::vector<double> out;
            for (Eigen::Index k = 0; k < eig.dim(); ++k) {
                const double lam = -eig.energies[k];
                bool seen = false;
                for (double v : out)
                    if (std::abs(v - lam) <= tol) {
                        seen = true;
                        break;
                    }
                if (!seen) out.push_back(lam);
            }
            std::sort(out.begin(), out.end());
            return out;
        }
    }
    throw validation_error("itqde.lambdas: unknown grid kind");
}

std::string curve_csv(const ImaginaryTimeCurve& curve) {
    std::ostringstream os;
    os << "tau,value,partition_re,flagged\n";
    for (std::size_t k = 0; k < curve.size(); ++k)
        os << fmt_double(curve.taus[k]) << ',' << fmt_double(curve.values[k]) << ','
           << fmt_double(curve.partition[k]) << ',' << int(curve.flagged[k]) << '\n';
    return os.str();
}

std::string sweep_csv(const SpectrumEstimate& est) {
    std::ostringstream os;
    os << "lambda,steady_value,steady_plus_lambda,halfrange\n";
    for (std::size_t i = 0; i < est.lambdas.size(); ++i)
        os << fmt_double(est.lambdas[i]) << ',' << fmt_double(est.steady_values[i]) << ','
           << fmt_double(est.steady_plus_lambda[i]) << ','
           << fmt_double(est.half_ranges[i]) << '\n';
    return os.str();
}

std::string plateaus_json(const SpectrumEstimate& est) {
    json arr = json::array();
    for (const auto& p : est.plateaus)
        arr.push_back(json{{"energy", p.energy},
                           {"lambda_lo", p.lambda_lo},
                           {"lambda_hi", p.lambda_hi},
                           {"points", p.points}});
    return json{{"plateaus", arr}}.dump(2) + "\n";
}

}  // namespace

std::vector<SteadyInterval> bootstrap_steady_intervals(
    const std::vector<Trajectory>& members, const std::string& label,
    const std::vector<double>& lambdas, WeightScheme scheme, int window,
    std::uint64_t seed, int replicas, double confidence) {
    if (members.empty()) throw parameter_error("bootstrap needs at least one member");
    const auto ensemble = static_cast<std::int64_t>(members.size());
    const size_t rec_count = members.front().records.size();
    const size_t arity = members.front().observable_labels.size();

    std::vector<std::vector<double>> values(lambdas.size());
    Trajectory replica = members.front();
    if (window == 0) window = std::max<int>(1, static_cast<int>(replica.m / 2 / 10));

    for (int b = 0; b < replicas; ++b) {
        RandomStream stream(seed, 0xb007u, static_cast<std::uint64_t>(b));
        for (auto& rec : replica.records) {
            rec.state_overlap = {0.0, 0.0};
            for (auto& o : rec.observable_overlaps) o = {0.0, 0.0};
        }
        for (std::int64_t e = 0; e < ensemble; ++e) {
            const auto& pick =
                members[stream.next_below(static_cast<std::uint64_t>(ensemble))];
            for (size_t r = 0; r < rec_count; ++r) {
                replica.records[r].state_overlap += pick.records[r].state_overlap;
                for (size_t a = 0; a < arity; ++a)
                    replica.records[r].observable_overlaps[a] +=
                        pick.records[r].observable_overlaps[a];
            }
        }
        const double inv = 1.0 / static_cast<double>(ensemble);
        for (auto& rec : replica.records) {
            rec.state_overlap *= inv;
            for (auto& o : rec.observable_overlaps) o *= inv;
        }
        for (size_t i = 0; i < lambdas.size(); ++i) {
            try {
                const auto curve = assemble_curve(replica, label, lambdas[i], scheme);
                values[i].push_back(steady_state(curve, window).value);
            } catch (const no_steady_state_error&) {
                // replica was singular at this lambda; skip it
            }
        }
    }

    std::vector<SteadyInterval> out(lambdas.size());
    const double alpha = (1.0 - confidence) / 2.0;
    for (size_t i = 0; i < lambdas.size(); ++i) {
        auto& v = values[i];
        if (v.size() < 8) {
            out[i] = {std::numeric_limits<double>::quiet_NaN(),
                      std::numeric_limits<double>::quiet_NaN()};
            continue;
        }
        std::sort(v.begin(), v.end());
        auto quantile = [&](double q) {
            const double pos = q * static_cast<double>(v.size() - 1);
            const size_t lo = static_cast<size_t>(pos);
            const size_t hi = std::min(lo + 1, v.size() - 1);
            const double frac = pos - static_cast<double>(lo);
            return v[lo] * (1.0 - frac) + v[hi] * frac;
        };
        out[i] = {quantile(alpha), quantile(1.0 - alpha)};
    }
    return out;
}

RunResult run(const RunConfig& cfg, bool parallel) {
    namespace fs = std::filesystem;
    const auto t_start = std::chrono::steady_clock::now();

    const ObservableSum model = build_model(cfg.model);
    const DenseHermitian H = to_dense(model, cfg.dense_cap);
    const EigenDecomposition eig = eigendecompose(H);

    std::vector<LabeledObservable> observables;
    for (const auto& oc : cfg.observables) {
        if (oc.terms.empty())
            observables.emplace_back(oc.label, model);
        else
            observables.emplace_back(oc.label,
                                     make_observable(model.qubit_count, oc.terms));
    }

    RunResult result;
    TrajectoryErrors errors;
    std::vector<Trajectory> members;
    if (cfg.method.kind == MethodConfig::Kind::exact) {
        const StepPropagator prop = make_step_propagator(H, cfg.itqde.dtau);
        if (cfg.method.maximally_mixed) {
            result.trajectory = maximally_mixed_trajectory(prop, cfg.itqde.m, observables);
        } else {
            const StateVector psi0 = basis_state(model.qubit_count, cfg.method.basis_index);
            result.trajectory = evolve_trajectory(psi0, prop, cfg.itqde.m, observables);
        }
    } else {
        ShotPlan plan;
        plan.shots_per_circuit = cfg.method.shots;
        plan.seed = cfg.seed;
        plan.ensemble = cfg.method.ensemble;
        plan.ensemble_size = cfg.method.ensemble_size;
        plan.exact = cfg.method.exact_shots;
        plan.route = cfg.method.route;
        auto sampled =
            sample_trajectory(H, cfg.itqde.dtau, cfg.itqde.m, observables, plan, parallel);
        result.trajectory = std::move(sampled.trajectory);
        errors = std::move(sampled.errors);
        members = std::move(sampled.members);
        result.circuit_count = sampled.circuit_count;
    }

    const std::vector<double> lambdas = resolve_lambda_grid(cfg.itqde.lambdas, eig);
    const std::string& sweep_label = cfg.observables.front().label;
    result.spectrum = sweep_lambda(result.trajectory, sweep_label, lambdas,
                                   cfg.itqde.scheme, cfg.itqde.window, parallel);

    fs::create_directories(cfg.output);
    const fs::path dir(cfg.output);
    result.directory = dir.string();
    auto emit = [&](const std::string& name, const std::string& content) {
        write_text_file((dir / name).string(), content);
        result.files.push_back(name);
    };

    emit("trajectory.json", trajectory_to_json(result.trajectory));
    json curve_index = json::array();
    for (size_t i = 0; i < cfg.itqde.curve_lambdas.size(); ++i) {
        const double lam = cfg.itqde.curve_lambdas[i];
        const auto curve =
            assemble_curve(result.trajectory, sweep_label, lam, cfg.itqde.scheme);
        char name[32];
        std::snprintf(name, sizeof(name), "curve_%03zu.csv", i);
        emit(name, curve_csv(curve));
        curve_index.push_back(json{{"file", name}, {"lambda", lam}});
    }
    emit("sweep.csv", sweep_csv(result.spectrum));
    emit("plateaus.json", plateaus_json(result.spectrum));

    if (cfg.method.kind == MethodConfig::Kind::sampled) {
        emit("trajectory_errors.json", errors_to_json(result.trajectory, errors));
        if (members.size() >= 2) {
            const auto ci = bootstrap_steady_intervals(members, sweep_label, lambdas,
                                                       cfg.itqde.scheme, cfg.itqde.window,
                                                       cfg.seed ^ 0x c1u);
            std::ostringstream os;
            os << "lambda,steady_value,ci_lo,ci_hi\n";
            for (size_t i = 0; i < lambdas.size(); ++i) {
                os << fmt_double(lambdas[i]) << ','
                   << fmt_double(result.spectrum.steady_values[i]) << ','
                   << fmt_double(ci[i].lo) << ',' << fmt_double(ci[i].hi) << '\n';
                result.ci_lo.push_back(ci[i].lo);
                result.ci_hi.push_back(ci[i].hi);
            }
            emit("sweep_ci.csv", os.str());
        }
    }

    const auto t_end = std::chrono::steady_clock::now();
    const double wall =
        std::chrono::duration_cast<std::chrono::duration<double>>(t_end - t_start).count();
    const auto now = std::chrono::system_clock::now();
    const std::time_t now_t = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now_t));

    json manifest;
    manifest["config"] = json::parse(canonical_config_json(cfg));
    manifest["config_hash"] = config_hash_hex(cfg);
    manifest["version"] = kVersion;
    manifest["wall_time_s"] = wall;
    manifest["timestamp_utc"] = stamp;
    manifest["curves"] = curve_index;
    if (cfg.method.kind == MethodConfig::Kind::sampled)
        manifest["circuit_count"] = result.circuit_count;
    manifest["files"] = result.files;
    emit("manifest.json", manifest.dump(2) + "\n");
    return result;
}

bool VerifyReport::all_passed() const {
    for (const auto& s : suites)
        if (!s.passed) return false;
    return !suites.empty();
}

namespace {

VerifySuite run_suite(const std::string& name, const std::function<std::string()>& body) {
    VerifySuite suite;
    suite.name = name;
    try {
        suite.detail = body();
        suite.passed = true;
    } catch (const std::exception& e) {
        suite.passed = false;
        suite.detail = e.what();
    }
    return suite;
}

std::string check_superoperator_equivalence() {
    const auto model = build_tfim(1.0, 2.0, 3, Boundary::open);
    const auto H = to_dense(model);
    const double dtau = 0.01;
    const std::int64_t m = 10;
    const auto prop = make_step_propagator(H, dtau);
    const std::vector<LabeledObservable> obs{{"H", model}};
    double worst = 0.0;
    for (const double lambda : {0.0, 0.7}) {
        const auto shifted = to_dense(shift_spectrum(model, lambda));
        const Eigen::MatrixXcd U = unitary_step(shifted, dtau);
        for (const bool mixed : {false, true}) {
            const Trajectory traj =
                mixed ? maximally_mixed_trajectory(prop, m, obs)
                      : evolve_trajectory(basis_state(3, 0), prop, m, obs);
            const auto curve =
                assemble_curve(traj, "H", lambda, WeightScheme::exact_binomial);
            Eigen::MatrixXcd rho =
                mixed ? Eigen::MatrixXcd::Identity(H.dim(), H.dim()).eval()
                      : (basis_state(3, 0).amplitudes *
                         basis_state(3, 0).amplitudes.adjoint())
                            .eval();
            for (std::int64_t mk = 2; mk <= m; mk += 2) {
                rho = qde_iterate(U, rho, 2);
                const double reference = normalized_expectation(H.entries, rho);
                worst = std::max(worst,
                                 std::abs(curve.values[static_cast<size_t>(mk / 2 - 1)] -
                                          reference));
            }
        }
    }
    if (worst > 1e-9)
        throw std::runtime_error("assembled curve deviates from dense iteration by " +
                                 fmt_double(worst));
    return "max deviation " + fmt_double(worst);
}

std::string check_weight_normalization() {
    double worst = 0.0;
    for (const std::int64_t m : {2ll, 10ll, 1000ll, 100000ll}) {
        const auto w = binomial_weights(m);
        double sum = w[0];
        for (size_t j = 1; j < w.size(); ++j) sum += 2.0 * w[j];
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    if (worst > 1e-12)
        throw std::runtime_error("folded weight sum off by " + fmt_double(worst));
    return "max |sum - 1| = " + fmt_double(worst);
}

std::string check_quadrature_bounds() {
    ObservableSum z;
    z.qubit_count = 1;
    z.terms = {PauliTerm{1.0, "Z"}};
    const std::vector<DenseHermitian> hams{to_dense(z),
                                           to_dense(build_tfim(1.0, 2.0, 2, Boundary::open))};
    for (const auto& H : hams) {
        for (const double tau : {0.5, 1.0}) {
            double prev = std::numeric_limits<double>::infinity();
            for (const std::int64_t n : {2ll, 4ll, 8ll, 16ll}) {
                const auto approx =
                    hs_integral_operator(H, tau, Quadrature::gauss_hermite(n));
                if (!(approx.error_norm <= *approx.bound))
                    throw std::runtime_error("bound violated");
                if (!(approx.error_norm <= prev))
                    throw std::runtime_error("error not monotone in quadrature order");
                prev = approx.error_norm;
            }
        }
    }
    return "bounds hold, error monotone over n in {2,4,8,16}";
}

std::string check_estimator_agreement() {
    const auto model = build_tfim(1.0, 2.0, 3, Boundary::open);
    const auto H = to_dense(model);
    const std::vector<LabeledObservable> obs{{"H", model}};
    ShotPlan plan;
    plan.exact = true;
    plan.ensemble = EnsembleKind::fixed_state;
    plan.route = OverlapRoute::hadamard;
    const auto direct = sample_trajectory(H, 0.01, 8, obs, plan);
    plan.route = OverlapRoute::estimator;
    const auto estimator = sample_trajectory(H, 0.01, 8, obs, plan);
    double worst = 0.0;
    for (size_t r = 0; r < direct.trajectory.records.size(); ++r) {
        worst = std::max(worst, std::abs(direct.trajectory.records[r].state_overlap -
                                         estimator.trajectory.records[r].state_overlap));
        worst = std::max(worst,
                         std::abs(direct.trajectory.records[r].observable_overlaps[0] -
                                  estimator.trajectory.records[r].observable_overlaps[0]));
    }
    if (worst > 1e-9)
        throw std::runtime_error("estimator and Hadamard routes diverge by " +
                                 fmt_double(worst));
    return "max record deviation " + fmt_double(worst);
}

}  // namespace

VerifyReport verify_invariants() {
    VerifyReport report;
    report.suites.push_back(
        run_suite("superoperator-equivalence", check_superoperator_equivalence));
    report.suites.push_back(run_suite("weight-normalization", check_weight_normalization));
    report.suites.push_back(run_suite("gauss-hermite-bound", check_quadrature_bounds));
    report.suites.push_back(run_suite("estimator-agreement", check_estimator_agreement));
    return report;
}

}  // namespace itqde
