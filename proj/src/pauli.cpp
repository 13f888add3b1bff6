#include "itqde/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "itqde/errors.hpp"

namespace itqde {

namespace {

void check_letters(int n, const std::string& letters) {
    if (static_cast<int>(letters.size()) != n)
        throw validation_error("pauli term length does not match qubit count");
    for (char c : letters)
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
            throw validation_error("pauli letter must be one of I, X, Y, Z");
}

}  // namespace

ObservableSum make_observable(int qubit_count, std::vector<PauliTerm> terms) {
    if (qubit_count < 1) throw invalid_model_error("qubit count must be >= 1");
    std::map<std::string, double> merged;
    for (auto& t : terms) {
        check_letters(qubit_count, t.letters);
        if (!std::isfinite(t.coefficient))
            throw validation_error("pauli coefficient must be finite");
        merged[t.letters] += t.coefficient;
    }
    ObservableSum out;
    out.qubit_count = qubit_count;
    for (auto& [letters, coeff] : merged) {
        if (std::abs(coeff) < coefficient_floor()) continue;
        out.terms.push_back({coeff, letters});
    }
    return out;
}

ObservableSum build_tfim(double J, double h, int L, Boundary boundary) {
    if (L < 2) throw invalid_model_error("TFIM needs at least 2 sites");
    std::vector<PauliTerm> terms;
    const int bonds = boundary == Boundary::open ? L - 1 : L;
    for (int l = 0; l < bonds; ++l) {
        std::string s(L, 'I');
        s[l] = 'Z';
        s[(l + 1) % L] = 'Z';
        terms.push_back({-J, s});
    }
    for (int l = 0; l < L; ++l) {
        std::string s(L, 'I');
        s[l] = 'X';
        terms.push_back({-h, s});
    }
    return make_observable(L, std::move(terms));
}

LatticeGraph chain_lattice(int L, Boundary boundary) {
    if (L < 2) throw invalid_model_error("chain needs at least 2 sites");
    LatticeGraph g;
    g.sites = L;
    for (int l = 0; l + 1 < L; ++l) g.bonds.emplace_back(l, l + 1);
    if (boundary == Boundary::periodic && L > 2) g.bonds.emplace_back(L - 1, 0);
    return g;
}

LatticeGraph grid_lattice(int rows, int cols, Boundary boundary) {
    if (rows < 1 || cols < 1 || rows * cols < 2)
        throw invalid_model_error("grid needs at least 2 sites");
    LatticeGraph g;
    g.sites = rows * cols;
    auto site = [cols](int r, int c) { return r * cols + c; };
    // Each unordered neighbor pair appears once; wrap bonds that would
    // duplicate an existing open bond (2-wide periodic direction) are skipped.
    std::set<std::pair<int, int>> seen;
    auto add = [&](int a, int b) {
        auto key = std::minmax(a, b);
        if (seen.insert(key).second) g.bonds.emplace_back(key.first, key.second);
    };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) add(site(r, c), site(r, c + 1));
            if (r + 1 < rows) add(site(r, c), site(r + 1, c));
            if (boundary == Boundary::periodic) {
                if (cols > 1 && c == cols - 1) add(site(r, c), site(r, 0));
                if (rows > 1 && r == rows - 1) add(site(r, c), site(0, c));
            }
        }
    return g;
}

namespace {

// Hopping c^+_p c_q + c^+_q c_p for modes p < q under Jordan-Wigner:
// (X_p Z...Z X_q + Y_p Z...Z Y_q) / 2.
void add_hopping(std::vector<PauliTerm>& terms, int n, int p, int q, double amp) {
    if (p > q) std::swap(p, q);
    std::string x(n, 'I'), y(n, 'I');
    for (int k = p + 1; k < q; ++k) {
        x[k] = 'Z';
        y[k] = 'Z';
    }
    x[p] = x[q] = 'X';
    y[p] = y[q] = 'Y';
    terms.push_back({amp / 2.0, x});
    terms.push_back({amp / 2.0, y});
}

// Number operator n_p = (I - Z_p)/2.
void add_number(std::vector<PauliTerm>& terms, int n, int p, double amp) {
    std::string z(n, 'I');
    z[p] = 'Z';
    terms.push_back({amp / 2.0, std::string(n, 'I')});
    terms.push_back({-amp / 2.0, z});
}

}  // namespace

ObservableSum build_fermi_hubbard(double t, double U, double mu,
                                  const LatticeGraph& lattice) {
    const int L = lattice.sites;
    if (L < 2) throw invalid_model_error("Fermi-Hubbard lattice needs at least 2 sites");
    std::set<std::pair<int, int>> seen;
    for (auto [a, b] : lattice.bonds) {
        if (a < 0 || b < 0 || a >= L || b >= L)
            throw invalid_model_error("lattice bond references a site out of range");
        if (a == b) throw invalid_model_error("lattice bond may not be a self-loop");
        if (!seen.insert(std::minmax(a, b)).second)
            throw invalid_model_error("duplicate lattice bond");
    }

    const int n = 2 * L;  // modes: up sites 0..L-1, down sites L..2L-1
    std::vector<PauliTerm> terms;
    for (auto [a, b] : lattice.bonds) {
        add_hopping(terms, n, a, b, t);          // spin up
        add_hopping(terms, n, L + a, L + b, t);  // spin down
    }
    for (int j = 0; j < L; ++j) {
        // U n_ju n_jd = U/4 (I - Z_u - Z_d + Z_u Z_d)
        std::string zu(n, 'I'), zd(n, 'I'), zz(n, 'I');
        zu[j] = 'Z';
        zd[L + j] = 'Z';
        zz[j] = 'Z';
        zz[L + j] = 'Z';
        terms.push_back({U / 4.0, std::string(n, 'I')});
        terms.push_back({-U / 4.0, zu});
        terms.push_back({-U / 4.0, zd});
        terms.push_back({U / 4.0, zz});
        add_number(terms, n, j, -mu);
        add_number(terms, n, L + j, -mu);
    }
    return make_observable(n, std::move(terms));
}

ObservableSum shift_spectrum(const ObservableSum& obs, double lambda) {
    ObservableSum out = obs;
    out.terms.push_back({lambda, std::string(obs.qubit_count, 'I')});
    return make_observable(obs.qubit_count, std::move(out.terms));
}

std::string to_json_lines(const ObservableSum& obs) {
    std::ostringstream os;
    for (const auto& t : obs.terms) {
        nlohmann::json j;
        j["coeff"] = t.coefficient;
        j["letters"] = t.letters;
        os << j.dump() << "\n";
    }
    return os.str();
}

ObservableSum from_json_lines(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::vector<PauliTerm> terms;
    int n = 0;
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto j = nlohmann::json::parse(line);
        PauliTerm t{j.at("coeff").get<double>(), j.at("letters").get<std::string>()};
        n = static_cast<int>(t.letters.size());
        terms.push_back(std::move(t));
    }
    if (terms.empty()) throw validation_error("no pauli terms in input");
    return make_observable(n, std::move(terms));
}

}  // namespace itqde
