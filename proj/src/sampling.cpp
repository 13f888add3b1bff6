#include "itqde/sampling.hpp"

#include <cmath>

#include "itqde/errors.hpp"
#include "itqde/kernels.hpp"
#include "itqde/rng.hpp"

namespace itqde {

namespace {

// Stream ids so every draw site gets an independent keyed stream.
constexpr std::uint64_t kStreamBasisShuffle = 0x5157a11e;
constexpr std::uint64_t kStreamClifford = 0xc11ff0d5;
constexpr std::uint64_t kStreamRealBranch = 0x0b5e54e1;
constexpr std::uint64_t kStreamImagBranch = 0x0b5e54e2;

void apply_hadamard(Eigen::VectorXcd& amp, int n, int q) {
    const std::uint64_t bit = 1ull << (n - 1 - q);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(amp.size()); ++i) {
        if (i & bit) continue;
        const auto a = amp[static_cast<Eigen::Index>(i)];
        const auto b = amp[static_cast<Eigen::Index>(i | bit)];
        amp[static_cast<Eigen::Index>(i)] = inv_sqrt2 * (a + b);
        amp[static_cast<Eigen::Index>(i | bit)] = inv_sqrt2 * (a - b);
    }
}

void apply_phase(Eigen::VectorXcd& amp, int n, int q) {
    const std::uint64_t bit = 1ull << (n - 1 - q);
    const std::complex<double> im{0.0, 1.0};
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(amp.size()); ++i)
        if (i & bit) amp[static_cast<Eigen::Index>(i)] *= im;
}

void apply_cnot(Eigen::VectorXcd& amp, int n, int control, int target) {
    const std::uint64_t cbit = 1ull << (n - 1 - control);
    const std::uint64_t tbit = 1ull << (n - 1 - target);
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(amp.size()); ++i)
        if ((i & cbit) && !(i & tbit))
            std::swap(amp[static_cast<Eigen::Index>(i)],
                      amp[static_cast<Eigen::Index>(i | tbit)]);
}

std::int64_t count_successes(RandomStream& stream, std::int64_t shots, double p) {
    std::int64_t hits = 0;
    for (std::int64_t s = 0; s < shots; ++s)
        if (stream.next_double() < p) ++hits;
    return hits;
}

}  // namespace

OverlapCircuit state_overlap_circuit(std::int64_t j) {
    return OverlapCircuit{4 * j, std::nullopt, 0};
}

OverlapCircuit observable_overlap_circuit(std::int64_t j, PauliTerm term) {
    return OverlapCircuit{2 * j, std::move(term), 2 * j};
}

std::complex<double> circuit_expectation(const StateVector& psi0,
                                         const OverlapCircuit& circuit,
                                         const StepPropagator& prop) {
    if (psi0.amplitudes.size() != prop.dim())
        throw validation_error("state dimension does not match propagator");
    StateVector work = advance(prop, psi0, circuit.pre_steps);
    if (circuit.pauli) {
        ObservableSum one;
        one.qubit_count = static_cast<int>(circuit.pauli->letters.size());
        one.terms = {*circuit.pauli};
        if ((Eigen::Index{1} << one.qubit_count) != prop.dim())
            throw validation_error("pauli term does not match propagator dimension");
        const auto masks = compile_pauli(one);
        Eigen::VectorXcd applied(prop.dim());
        apply_pauli_sum(std::span<const PauliMask>(masks),
                        std::span<const cxd>(work.amplitudes.data(),
                                             static_cast<size_t>(prop.dim())),
                        std::span<cxd>(applied.data(), static_cast<size_t>(prop.dim())));
        work.amplitudes = applied;
    }
    work = advance(prop, work, circuit.post_steps);
    return psi0.amplitudes.dot(work.amplitudes);
}

HadamardProbabilities hadamard_probabilities(const StateVector& psi0,
                                             const OverlapCircuit& circuit,
                                             const StepPropagator& prop) {
    const auto w = circuit_expectation(psi0, circuit, prop);
    HadamardProbabilities p;
    p.p0_real = (1.0 + w.real()) / 2.0;
    p.p0_imag = (1.0 + w.imag()) / 2.0;
    if (p.p0_real < -1e-12 || p.p0_real > 1.0 + 1e-12 || p.p0_imag < -1e-12 ||
        p.p0_imag > 1.0 + 1e-12)
        throw validation_error("hadamard-test probability outside [0, 1]");
    p.p0_real = std::clamp(p.p0_real, 0.0, 1.0);
    p.p0_imag = std::clamp(p.p0_imag, 0.0, 1.0);
    return p;
}

SampledOverlap sample_overlap(const StateVector& psi0, const OverlapCircuit& circuit,
                              const StepPropagator& prop, const ShotPlan& plan,
                              std::uint64_t key) {
    SampledOverlap out;
    if (plan.exact) {
        out.estimate = circuit_expectation(psi0, circuit, prop);
        return out;
    }
    if (plan.shots_per_circuit < 1) throw parameter_error("shots_per_circuit must be >= 1");
    const auto p = hadamard_probabilities(psi0, circuit, prop);
    const std::int64_t shots = plan.shots_per_circuit;

    RandomStream real_stream(plan.seed, key, kStreamRealBranch);
    RandomStream imag_stream(plan.seed, key, kStreamImagBranch);
    const double p_re = static_cast<double>(count_successes(real_stream, shots, p.p0_real)) /
                        static_cast<double>(shots);
    const double p_im = static_cast<double>(count_successes(imag_stream, shots, p.p0_imag)) /
                        static_cast<double>(shots);
    out.estimate = {2.0 * p_re - 1.0, 2.0 * p_im - 1.0};
    out.std_error_re = 2.0 * std::sqrt(p_re * (1.0 - p_re) / static_cast<double>(shots));
    out.std_error_im = 2.0 * std::sqrt(p_im * (1.0 - p_im) / static_cast<double>(shots));
    out.shots_used = 2 * shots;
    return out;
}

std::vector<std::pair<double, PauliTerm>> decompose_observable(const ObservableSum& obs) {
    std::vector<std::pair<double, PauliTerm>> out;
    out.reserve(obs.terms.size());
    for (const auto& t : obs.terms) out.emplace_back(t.coefficient, PauliTerm{1.0, t.letters});
    return out;
}

StateVector random_initial_state(EnsembleKind kind, int qubit_count, std::int64_t index,
                                 std::uint64_t seed) {
    const Eigen::Index dim = Eigen::Index{1} << qubit_count;
    if (kind == EnsembleKind::fixed_state) return basis_state(qubit_count, 0);

    if (kind == EnsembleKind::basis_ensemble) {
        // Seeded permutation of the basis; a full cycle of indices visits
        // every basis state exactly once.
        const std::int64_t cycle = index / dim;
        const std::int64_t pos = index % dim;
        RandomStream stream(seed, kStreamBasisShuffle, static_cast<std::uint64_t>(cycle));
        std::vector<std::uint64_t> perm(static_cast<size_t>(dim));
        for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(dim); ++i) perm[i] = i;
        for (std::uint64_t i = static_cast<std::uint64_t>(dim) - 1; i > 0; --i)
            std::swap(perm[i], perm[stream.next_below(i + 1)]);
        return basis_state(qubit_count, perm[static_cast<size_t>(pos)]);
    }

    // Random Clifford circuit of depth 3n: per layer a uniformly drawn
    // single-qubit Clifford word on every qubit, then one CNOT. An
    // approximate twirl of |0...0> toward the maximally mixed ensemble.
    RandomStream stream(seed, kStreamClifford, static_cast<std::uint64_t>(index));
    StateVector psi = basis_state(qubit_count, 0);
    const int depth = 3 * qubit_count;
    for (int layer = 0; layer < depth; ++layer) {
        for (int q = 0; q < qubit_count; ++q) {
            switch (stream.next_below(6)) {
                case 0: break;  // identity
                case 1: apply_hadamard(psi.amplitudes, qubit_count, q); break;
                case 2: apply_phase(psi.amplitudes, qubit_count, q); break;
                case 3:
                    apply_phase(psi.amplitudes, qubit_count, q);
                    apply_hadamard(psi.amplitudes, qubit_count, q);
                    break;
                case 4:
                    apply_hadamard(psi.amplitudes, qubit_count, q);
                    apply_phase(psi.amplitudes, qubit_count, q);
                    break;
                case 5:
                    apply_hadamard(psi.amplitudes, qubit_count, q);
                    apply_phase(psi.amplitudes, qubit_count, q);
                    apply_hadamard(psi.amplitudes, qubit_count, q);
                    break;
            }
        }
        if (qubit_count >= 2) {
            const int control = static_cast<int>(stream.next_below(qubit_count));
            int target = static_cast<int>(stream.next_below(qubit_count - 1));
            if (target >= control) ++target;
            apply_cnot(psi.amplitudes, qubit_count, control, target);
        }
    }
    return psi;
}

std::complex<double> estimator_overlaps(const StateVector& psi0, const StepPropagator& prop,
                                        std::int64_t j, const ObservableSum& obs) {
    if (j < 0) throw parameter_error("j must be >= 0");
    const Eigen::Index dim = prop.dim();
    if (psi0.amplitudes.size() != dim || (Eigen::Index{1} << obs.qubit_count) != dim)
        throw validation_error("estimator_overlaps dimension mismatch");

    const auto masks = compile_pauli(obs);
    auto apply_obs = [&](const StateVector& in) {
        StateVector out;
        out.amplitudes.resize(dim);
        apply_pauli_sum(std::span<const PauliMask>(masks),
                        std::span<const cxd>(in.amplitudes.data(), static_cast<size_t>(dim)),
                        std::span<cxd>(out.amplitudes.data(), static_cast<size_t>(dim)));
        return out;
    };

    const StateVector fwd = advance(prop, psi0, 2 * j);   // |psi_{+2j}>
    const StateVector bwd = advance(prop, psi0, -2 * j);  // |psi_{-2j}>
    const StateVector a = advance(prop, apply_obs(fwd), 2 * j);    // U^{2j} O U^{2j} |psi_0>
    const StateVector b = advance(prop, apply_obs(bwd), -2 * j);   // U^{-2j} O U^{-2j} |psi_0>

    const std::complex<double> ea = psi0.amplitudes.dot(a.amplitudes);
    const std::complex<double> eb = psi0.amplitudes.dot(b.amplitudes);
    // <S_Re> = (ea + eb)/2 is real, <S_Im> = (ea - eb)/2i is real.
    const std::complex<double> result{0.5 * (ea + eb).real(), 0.5 * (ea - eb).imag()};

    const std::complex<double> direct = operator_overlap(bwd, obs, fwd);
    if (std::abs(result - direct) > 1e-9)
        throw validation_error("estimator route disagrees with the direct overlap");
    return result;
}

namespace {

struct MemberResult {
    Trajectory traj;
    TrajectoryErrors se;
};

MemberResult sample_member(const StepPropagator& prop, std::int64_t m,
                           const std::vector<LabeledObservable>& observables,
                           const std::vector<std::vector<std::pair<double, PauliTerm>>>& decomps,
                           const ShotPlan& plan, std::int64_t member,
                           const StateVector& psi0) {
    MemberResult out;
    Trajectory& traj = out.traj;
    traj.dtau = prop.dtau;
    traj.m = m;
    traj.initial_condition = InitialCondition::pure;
    traj.initial_amplitudes = psi0.amplitudes;
    for (const auto& [label, obs] : observables) traj.observable_labels.push_back(label);

    ObservableSum identity;
    identity.qubit_count = psi0.qubit_count();
    identity.terms = {PauliTerm{1.0, std::string(static_cast<size_t>(identity.qubit_count), 'I')}};

    for (std::int64_t j = 0; j <= m / 2; ++j) {
        OverlapRecord rec;
        rec.j = j;
        std::vector<std::complex<double>> se_obs;
        std::complex<double> se_state{0.0, 0.0};

        if (plan.route == OverlapRoute::estimator) {
            // Exact-mode estimator route: state overlap from the identity
            // observable, observable overlaps from the Hermitian combinations.
            rec.state_overlap = std::conj(estimator_overlaps(psi0, prop, j, identity));
            for (const auto& [label, obs] : observables) {
                rec.observable_overlaps.push_back(
                    std::conj(estimator_overlaps(psi0, prop, j, obs)));
                se_obs.push_back({0.0, 0.0});
            }
        } else {
            const std::uint64_t jkey = combine_keys(static_cast<std::uint64_t>(member),
                                                    static_cast<std::uint64_t>(j));
            const auto state_sample = sample_overlap(psi0, state_overlap_circuit(j), prop,
                                                     plan, combine_keys(jkey, 0));
            rec.state_overlap = std::conj(state_sample.estimate);
            se_state = {state_sample.std_error_re, state_sample.std_error_im};

            std::uint64_t alpha = 1;
            for (size_t a = 0; a < observables.size(); ++a) {
                std::complex<double> acc{0.0, 0.0};
                double var_re = 0.0, var_im = 0.0;
                for (const auto& [c, term] : decomps[a]) {
                    const auto s = sample_overlap(psi0, observable_overlap_circuit(j, term),
                                                  prop, plan, combine_keys(jkey, alpha++));
                    acc += c * s.estimate;
                    var_re += c * c * s.std_error_re * s.std_error_re;
                    var_im += c * c * s.std_error_im * s.std_error_im;
                }
                rec.observable_overlaps.push_back(std::conj(acc));
                se_obs.push_back({std::sqrt(var_re), std::sqrt(var_im)});
            }
        }
        traj.records.push_back(std::move(rec));
        out.se.state_se.push_back(se_state);
        out.se.observable_se.push_back(std::move(se_obs));
    }
    return out;
}

SampledTrajectory run_sampling(const DenseHermitian& H, double dtau, std::int64_t m,
                               const std::vector<LabeledObservable>& observables,
                               const ShotPlan& plan, bool parallel,
                               const StateVector* fixed_state) {
    if (m < 2 || m % 2 != 0) throw parameter_error("m must be an even integer >= 2");
    if (plan.ensemble_size < 1) throw parameter_error("ensemble_size must be >= 1");
    if (plan.route == OverlapRoute::estimator && !plan.exact)
        throw parameter_error("the estimator route is exact-mode only");
    if (fixed_state && plan.ensemble != EnsembleKind::fixed_state)
        throw parameter_error("an explicit initial state requires the fixed_state ensemble");

    const StepPropagator prop = make_step_propagator(H, dtau);
    const int n = [&] {
        int q = 0;
        while ((Eigen::Index{1} << q) < prop.dim()) ++q;
        return q;
    }();

    std::vector<std::vector<std::pair<double, PauliTerm>>> decomps;
    std::int64_t total_terms = 0;
    for (const auto& [label, obs] : observables) {
        decomps.push_back(decompose_observable(obs));
        total_terms += static_cast<std::int64_t>(decomps.back().size());
    }

    const std::int64_t ensemble = plan.ensemble_size;
    std::vector<MemberResult> members(static_cast<size_t>(ensemble));

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::int64_t e = 0; e < ensemble; ++e) {
        const StateVector psi0 =
            fixed_state ? *fixed_state
                        : random_initial_state(plan.ensemble, n, e, plan.seed);
        members[static_cast<size_t>(e)] =
            sample_member(prop, m, observables, decomps, plan, e, psi0);
    }

    SampledTrajectory result;
    result.circuit_count = 2ull * static_cast<std::uint64_t>(total_terms + 1) *
                           static_cast<std::uint64_t>(m / 2 + 1) *
                           static_cast<std::uint64_t>(ensemble);

    // Fixed-order reduction keeps the mean identical however members ran.
    Trajectory& mean = result.trajectory;
    mean = members[0].traj;
    mean.initial_amplitudes.resize(0);
    for (std::int64_t e = 1; e < ensemble; ++e) {
        const auto& traj = members[static_cast<size_t>(e)].traj;
        for (size_t r = 0; r < mean.records.size(); ++r) {
            mean.records[r].state_overlap += traj.records[r].state_overlap;
            for (size_t a = 0; a < mean.records[r].observable_overlaps.size(); ++a)
                mean.records[r].observable_overlaps[a] +=
                    traj.records[r].observable_overlaps[a];
        }
    }
    const double inv = 1.0 / static_cast<double>(ensemble);
    for (auto& rec : mean.records) {
        rec.state_overlap *= inv;
        for (auto& o : rec.observable_overlaps) o *= inv;
    }

    // Standard errors of the ensemble mean. With two or more members the
    // cross-member scatter already contains the shot noise; with one member
    // only the propagated shot errors are available.
    TrajectoryErrors& err = result.errors;
    const size_t rec_count = mean.records.size();
    err.state_se.assign(rec_count, {0.0, 0.0});
    err.observable_se.assign(rec_count,
                             std::vector<std::complex<double>>(observables.size(), {0.0, 0.0}));
    if (ensemble >= 2) {
        const double norm = 1.0 / (static_cast<double>(ensemble - 1) *
                                   static_cast<double>(ensemble));
        for (size_t r = 0; r < rec_count; ++r) {
            double sr = 0.0, si = 0.0;
            std::vector<double> or_(observables.size(), 0.0), oi(observables.size(), 0.0);
            for (const auto& memberRes : members) {
                const auto ds = memberRes.traj.records[r].state_overlap -
                                mean.records[r].state_overlap;
                sr += ds.real() * ds.real();
                si += ds.imag() * ds.imag();
                for (size_t a = 0; a < observables.size(); ++a) {
                    const auto d = memberRes.traj.records[r].observable_overlaps[a] -
                                   mean.records[r].observable_overlaps[a];
                    or_[a] += d.real() * d.real();
                    oi[a] += d.imag() * d.imag();
                }
            }
            err.state_se[r] = {std::sqrt(sr * norm), std::sqrt(si * norm)};
            for (size_t a = 0; a < observables.size(); ++a)
                err.observable_se[r][a] = {std::sqrt(or_[a] * norm),
                                           std::sqrt(oi[a] * norm)};
        }
    } else {
        err = members[0].se;
    }

    result.members.reserve(members.size());
    for (auto& memberRes : members) result.members.push_back(std::move(memberRes.traj));
    return result;
}

}  // namespace

SampledTrajectory sample_trajectory(const DenseHermitian& H, double dtau, std::int64_t m,
                                    const std::vector<LabeledObservable>& observables,
                                    const ShotPlan& plan, bool parallel,
                                    const StateVector* fixed_state) {
    return run_sampling(H, dtau, m, observables, plan, parallel, fixed_state);
}

SampledTrajectory sample_trajectory_serial(const DenseHermitian& H, double dtau,
                                           std::int64_t m,
                                           const std::vector<LabeledObservable>& observables,
                                           const ShotPlan& plan,
                                           const StateVector* fixed_state) {
    return run_sampling(H, dtau, m, observables, plan, false, fixed_state);
}

}  // namespace itqde
