#include "itqde/kernels.hpp"

#include <bit>

#include "itqde/errors.hpp"

namespace itqde {

std::vector<PauliMask> compile_pauli(const ObservableSum& obs) {
    std::vector<PauliMask> masks;
    masks.reserve(obs.terms.size());
    const int n = obs.qubit_count;
    static constexpr cxd i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (const auto& term : obs.terms) {
        PauliMask m;
        int y_count = 0;
        for (int q = 0; q < n; ++q) {
            const std::uint64_t bit = 1ull << (n - 1 - q);
            switch (term.letters[q]) {
                case 'I': break;
                case 'X': m.flip_mask |= bit; break;
                case 'Y':
                    m.flip_mask |= bit;
                    m.parity_mask |= bit;
                    ++y_count;
                    break;
                case 'Z': m.parity_mask |= bit; break;
                default: throw validation_error("bad pauli letter");
            }
        }
        m.weight = term.coefficient * i_pow[y_count & 3];
        masks.push_back(m);
    }
    return masks;
}

namespace {

inline cxd gather_one(std::span<const PauliMask> masks, std::span<const cxd> in,
                      std::uint64_t i) {
    cxd acc{0.0, 0.0};
    for (const auto& m : masks) {
        const std::uint64_t src = i ^ m.flip_mask;
        const double sign = (std::popcount(src & m.parity_mask) & 1) ? -1.0 : 1.0;
        acc += m.weight * sign * in[src];
    }
    return acc;
}

}  // namespace

void apply_pauli_sum_serial(std::span<const PauliMask> masks, std::span<const cxd> in,
                            std::span<cxd> out) {
    if (in.size() != out.size()) throw validation_error("kernel size mismatch");
    for (std::uint64_t i = 0; i < in.size(); ++i) out[i] = gather_one(masks, in, i);
}

void apply_pauli_sum(std::span<const PauliMask> masks, std::span<const cxd> in,
                     std::span<cxd> out) {
    if (in.size() != out.size()) throw validation_error("kernel size mismatch");
    const std::int64_t dim = static_cast<std::int64_t>(in.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < dim; ++i)
        out[i] = gather_one(masks, in, static_cast<std::uint64_t>(i));
}

}  // namespace itqde
