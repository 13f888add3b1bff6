#include "itqde/propagation.hpp"

#include <cmath>

#include "itqde/errors.hpp"
#include "itqde/kernels.hpp"

namespace itqde {

int StateVector::qubit_count() const {
    const auto d = amplitudes.size();
    int n = 0;
    while ((Eigen::Index{1} << n) < d) ++n;
    return n;
}

bool StateVector::is_normalized(double tol) const {
    return std::abs(amplitudes.norm() - 1.0) <= tol;
}

StateVector basis_state(int qubit_count, std::uint64_t index) {
    const Eigen::Index dim = Eigen::Index{1} << qubit_count;
    if (index >= static_cast<std::uint64_t>(dim))
        throw validation_error("basis index out of range");
    StateVector psi;
    psi.amplitudes = Eigen::VectorXcd::Zero(dim);
    psi.amplitudes[static_cast<Eigen::Index>(index)] = 1.0;
    return psi;
}

StepPropagator make_step_propagator(const DenseHermitian& H, double dtau) {
    if (!(dtau > 0.0)) throw parameter_error("dtau must be positive");
    StepPropagator prop;
    prop.eig = eigendecompose(H);
    prop.dtau = dtau;
    const double theta = std::sqrt(dtau / 2.0);
    prop.step_phases.resize(prop.eig.dim());
    for (Eigen::Index k = 0; k < prop.eig.dim(); ++k)
        prop.step_phases[k] = std::polar(1.0, -theta * prop.eig.energies[k]);
    return prop;
}

namespace {

// Eigenbasis phases for U^steps, evaluated in one shot from the energies so
// that large |steps| carries no compounding error.
Eigen::VectorXcd power_phases(const StepPropagator& prop, std::int64_t steps) {
    const double angle = -std::sqrt(prop.dtau / 2.0) * static_cast<double>(steps);
    Eigen::VectorXcd ph(prop.dim());
    for (Eigen::Index k = 0; k < prop.dim(); ++k)
        ph[k] = std::polar(1.0, angle * prop.eig.energies[k]);
    return ph;
}

}  // namespace

StateVector advance(const StepPropagator& prop, const StateVector& psi,
                    std::int64_t steps) {
    if (psi.amplitudes.size() != prop.dim())
        throw validation_error("state dimension does not match propagator");
    const Eigen::VectorXcd coeffs = prop.eig.eigenvectors.adjoint() * psi.amplitudes;
    const Eigen::VectorXcd rotated = power_phases(prop, steps).cwiseProduct(coeffs);
    StateVector out;
    out.amplitudes = prop.eig.eigenvectors * rotated;
    return out;
}

std::complex<double> operator_overlap(const StateVector& bra, const ObservableSum& obs,
                                      const StateVector& ket) {
    const Eigen::Index dim = Eigen::Index{1} << obs.qubit_count;
    if (bra.amplitudes.size() != dim || ket.amplitudes.size() != dim)
        throw validation_error("operator_overlap dimension mismatch");
    const auto masks = compile_pauli(obs);
    Eigen::VectorXcd applied(dim);
    apply_pauli_sum(std::span<const PauliMask>(masks),
                    std::span<const cxd>(ket.amplitudes.data(), static_cast<size_t>(dim)),
                    std::span<cxd>(applied.data(), static_cast<size_t>(dim)));
    return bra.amplitudes.dot(applied);  // Eigen dot conjugates the left side
}

namespace {

void check_trajectory_args(const StepPropagator& prop, std::int64_t m,
                           const std::vector<LabeledObservable>& observables) {
    if (m < 2 || m % 2 != 0) throw parameter_error("m must be an even integer >= 2");
    for (const auto& [label, obs] : observables)
        if ((Eigen::Index{1} << obs.qubit_count) != prop.dim())
            throw validation_error("observable '" + label +
                                   "' does not match the propagator dimension");
}

}  // namespace

Trajectory evolve_trajectory(const StateVector& psi0, const StepPropagator& prop,
                             std::int64_t m,
                             const std::vector<LabeledObservable>& observables) {
    check_trajectory_args(prop, m, observables);
    if (psi0.amplitudes.size() != prop.dim())
        throw validation_error("initial state dimension mismatch");
    if (!psi0.is_normalized())
        throw validation_error("initial state must be normalized");

    const Eigen::Index dim = prop.dim();
    std::vector<std::vector<PauliMask>> masks;
    masks.reserve(observables.size());
    for (const auto& [label, obs] : observables) masks.push_back(compile_pauli(obs));

    Trajectory traj;
    traj.dtau = prop.dtau;
    traj.m = m;
    traj.initial_condition = InitialCondition::pure;
    traj.initial_amplitudes = psi0.amplitudes;
    for (const auto& [label, obs] : observables) traj.observable_labels.push_back(label);

    const Eigen::VectorXcd coeffs = prop.eig.eigenvectors.adjoint() * psi0.amplitudes;
    const Eigen::VectorXcd two_steps = power_phases(prop, 2);
    Eigen::VectorXcd fwd = coeffs;  // |psi_{+2j}> in the eigenbasis
    Eigen::VectorXcd bwd = coeffs;  // |psi_{-2j}>

    Eigen::VectorXcd bwd_lab(dim), fwd_lab(dim), applied(dim);
    for (std::int64_t j = 0; j <= m / 2; ++j) {
        OverlapRecord rec;
        rec.j = j;
        rec.state_overlap = fwd.dot(bwd);
        if (!observables.empty()) {
            fwd_lab = prop.eig.eigenvectors * fwd;
            bwd_lab = prop.eig.eigenvectors * bwd;
            for (const auto& mk : masks) {
                apply_pauli_sum(std::span<const PauliMask>(mk),
                                std::span<const cxd>(bwd_lab.data(), static_cast<size_t>(dim)),
                                std::span<cxd>(applied.data(), static_cast<size_t>(dim)));
                rec.observable_overlaps.push_back(fwd_lab.dot(applied));
            }
        }
        traj.records.push_back(std::move(rec));
        if (j < m / 2) {
            fwd = two_steps.cwiseProduct(fwd);
            bwd = two_steps.conjugate().cwiseProduct(bwd);
        }
    }
    return traj;
}

Trajectory maximally_mixed_trajectory(const StepPropagator& prop, std::int64_t m,
                                      const std::vector<LabeledObservable>& observables) {
    check_trajectory_args(prop, m, observables);
    const Eigen::Index dim = prop.dim();

    // diag(V^dag O V), cached once per observable and reused for every j.
    std::vector<Eigen::VectorXd> diags;
    Eigen::VectorXcd column(dim), applied(dim);
    for (const auto& [label, obs] : observables) {
        const auto mk = compile_pauli(obs);
        Eigen::VectorXd diag(dim);
        for (Eigen::Index k = 0; k < dim; ++k) {
            column = prop.eig.eigenvectors.col(k);
            apply_pauli_sum(std::span<const PauliMask>(mk),
                            std::span<const cxd>(column.data(), static_cast<size_t>(dim)),
                            std::span<cxd>(applied.data(), static_cast<size_t>(dim)));
            diag[k] = column.dot(applied).real();
        }
        diags.push_back(std::move(diag));
    }

    Trajectory traj;
    traj.dtau = prop.dtau;
    traj.m = m;
    traj.initial_condition = InitialCondition::maximally_mixed;
    for (const auto& [label, obs] : observables) traj.observable_labels.push_back(label);

    const double step = 2.0 * std::sqrt(2.0 * prop.dtau);
    const double inv_d = 1.0 / static_cast<double>(dim);
    for (std::int64_t j = 0; j <= m / 2; ++j) {
        OverlapRecord rec;
        rec.j = j;
        std::complex<double> s{0.0, 0.0};
        std::vector<std::complex<double>> o(observables.size(), {0.0, 0.0});
        for (Eigen::Index k = 0; k < dim; ++k) {
            const auto phase = std::polar(1.0, step * static_cast<double>(j) *
                                                   prop.eig.energies[k]);
            s += phase;
            for (size_t a = 0; a < diags.size(); ++a) o[a] += diags[a][k] * phase;
        }
        rec.state_overlap = inv_d * s;
        for (auto& v : o) rec.observable_overlaps.push_back(inv_d * v);
        traj.records.push_back(std::move(rec));
    }
    return traj;
}

std::int64_t Trajectory::observable_index(const std::string& label) const {
    for (size_t i = 0; i < observable_labels.size(); ++i)
        if (observable_labels[i] == label) return static_cast<std::int64_t>(i);
    return -1;
}

void validate(const Trajectory& traj) {
    if (traj.m < 2 || traj.m % 2 != 0)
        throw validation_error("trajectory m must be an even integer >= 2");
    if (static_cast<std::int64_t>(traj.records.size()) != traj.m / 2 + 1)
        throw validation_error("trajectory must hold m/2 + 1 records");
    for (std::int64_t j = 0; j <= traj.m / 2; ++j) {
        const auto& rec = traj.records[static_cast<size_t>(j)];
        if (rec.j != j) throw validation_error("trajectory records must be contiguous in j");
        if (rec.observable_overlaps.size() != traj.observable_labels.size())
            throw validation_error("record arity does not match observable labels");
    }
    for (size_t i = 0; i < traj.observable_labels.size(); ++i)
        for (size_t k = i + 1; k < traj.observable_labels.size(); ++k)
            if (traj.observable_labels[i] == traj.observable_labels[k])
                throw validation_error("observable labels must be unique");
}

}  // namespace itqde
