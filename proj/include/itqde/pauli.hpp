// pauli.hpp — Pauli-string observables and the lattice model builders.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace itqde {

enum class Boundary { open, periodic };

// One weighted Pauli string. `letters` has one character per qubit, drawn
// from {I, X, Y, Z}; qubit 0 is the first character.
struct PauliTerm {
    double coefficient = 0.0;
    std::string letters;
};

// Hermitian operator as a canonical sum of Pauli strings: terms share the
// qubit count, letter sequences are unique, and coefficients with
// |c| < coefficient_floor() have been dropped.
struct ObservableSum {
    int qubit_count = 0;
    std::vector<PauliTerm> terms;
};

// Below this magnitude a merged coefficient is treated as zero.
constexpr double coefficient_floor() { return 1e-14; }

// Canonicalize (merge duplicates, drop near-zero terms) and validate.
ObservableSum make_observable(int qubit_count, std::vector<PauliTerm> terms);

// Transverse-field Ising chain: -J sum Z_l Z_{l+1} - h sum X_l over L sites.
// Open boundaries couple L-1 bonds, periodic boundaries close the ring.
ObservableSum build_tfim(double J, double h, int L, Boundary boundary);

// Site-adjacency description of a lattice; bonds are unordered site pairs.
struct LatticeGraph {
    int sites = 0;
    std::vector<std::pair<int, int>> bonds;
};

LatticeGraph chain_lattice(int L, Boundary boundary);
LatticeGraph grid_lattice(int rows, int cols, Boundary boundary);

// Fermi-Hubbard model on `lattice`, mapped to 2L qubits by the Jordan-Wigner
// transformation with spin-blocked mode order (up modes 0..L-1, then down
// modes L..2L-1):
//   sum_{<i,j>,s} t (c^+_is c_js + h.c.) + U sum_j n_ju n_jd - mu sum_js n_js
ObservableSum build_fermi_hubbard(double t, double U, double mu,
                                  const LatticeGraph& lattice);

// H + lambda * identity.
ObservableSum shift_spectrum(const ObservableSum& obs, double lambda);

// One {"coeff": c, "letters": "..."} JSON object per line.
std::string to_json_lines(const ObservableSum& obs);
ObservableSum from_json_lines(const std::string& text);

}  // namespace itqde
