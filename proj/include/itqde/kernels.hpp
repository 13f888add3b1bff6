// kernels.hpp — data-parallel statevector kernels. Every kernel ships an
// OpenMP version and a serial reference; both produce bit-identical output.

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "itqde/pauli.hpp"

namespace itqde {

using cxd = std::complex<double>;

// Bit-mask form of one Pauli string acting on basis indices. Qubit q maps to
// bit (n-1-q) of the index. The phase picked up on input index b is
// weight * (-1)^popcount(b & parity_mask), with weight = coeff * i^{#Y}.
struct PauliMask {
    std::uint64_t flip_mask = 0;    // X and Y positions
    std::uint64_t parity_mask = 0;  // Y and Z positions
    cxd weight{0.0, 0.0};
};

std::vector<PauliMask> compile_pauli(const ObservableSum& obs);

// out[i] = sum_t phase_t(i ^ flip_t) * in[i ^ flip_t]; gather form, one
// writer per output element.
void apply_pauli_sum(std::span<const PauliMask> masks, std::span<const cxd> in,
                     std::span<cxd> out);
void apply_pauli_sum_serial(std::span<const PauliMask> masks, std::span<const cxd> in,
                            std::span<cxd> out);

}  // namespace itqde
