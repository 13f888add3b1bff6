// weights.hpp — folded trajectory weights: exact binomial rows and their
// large-m Gaussian asymptotic.

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace itqde {

enum class WeightScheme { exact_binomial, gaussian_asymptotic };

// w_j = C(m, m/2+j) / 2^m for j = 0..m/2. Folded normalization:
// w_0 + 2 * sum_{j>=1} w_j = 1. Computed by a center-out ratio recurrence,
// which stays stable far beyond the range where the raw binomials overflow.
std::vector<double> binomial_weights(std::int64_t m);

// w~_j = exp(-2 j^2 / m) / sqrt(m pi / 2), the Stirling-limit row.
std::vector<double> gaussian_weights(std::int64_t m);

std::vector<double> make_weights(std::int64_t m, WeightScheme scheme);

// Read-mostly cache keyed by (m, scheme); single writer fills each entry.
std::shared_ptr<const std::vector<double>> cached_weights(std::int64_t m,
                                                          WeightScheme scheme);

}  // namespace itqde
