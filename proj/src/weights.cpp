#include "itqde/weights.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>

#include "itqde/errors.hpp"

namespace itqde {

namespace {

void check_m(std::int64_t m) {
    if (m < 2 || m % 2 != 0) throw parameter_error("m must be an even integer >= 2");
}

}  // namespace

std::vector<double> binomial_weights(std::int64_t m) {
    check_m(m);
    const std::int64_t half = m / 2;
    std::vector<double> u(static_cast<size_t>(half) + 1);
    u[0] = 1.0;
    for (std::int64_t j = 0; j < half; ++j) {
        // C(m, m/2+j+1) / C(m, m/2+j); underflows to 0 harmlessly in the far tail
        u[j + 1] = u[j] * static_cast<double>(half - j) / static_cast<double>(half + j + 1);
    }
    // Normalize against the folded sum so the row sums to 1 exactly up to
    // final rounding; compensated summation keeps that rounding ~1 ulp.
    double sum = u[0], comp = 0.0;
    for (std::int64_t j = half; j >= 1; --j) {
        const double term = 2.0 * u[j] - comp;
        const double next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    for (auto& w : u) w /= sum;
    return u;
}

std::vector<double> gaussian_weights(std::int64_t m) {
    check_m(m);
    const std::int64_t half = m / 2;
    const double norm = 1.0 / std::sqrt(static_cast<double>(m) * M_PI / 2.0);
    std::vector<double> w(static_cast<size_t>(half) + 1);
    for (std::int64_t j = 0; j <= half; ++j)
        w[j] = norm * std::exp(-2.0 * static_cast<double>(j) * static_cast<double>(j) /
                               static_cast<double>(m));
    return w;
}

std::vector<double> make_weights(std::int64_t m, WeightScheme scheme) {
    return scheme == WeightScheme::exact_binomial ? binomial_weights(m)
                                                  : gaussian_weights(m);
}

std::shared_ptr<const std::vector<double>> cached_weights(std::int64_t m,
                                                          WeightScheme scheme) {
    using Key = std::pair<std::int64_t, int>;
    static std::shared_mutex mutex;
    static std::map<Key, std::shared_ptr<const std::vector<double>>> cache;
    const Key key{m, static_cast<int>(scheme)};
    {
        std::shared_lock lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto fresh = std::make_shared<const std::vector<double>>(make_weights(m, scheme));
    std::unique_lock lock(mutex);
    auto [it, inserted] = cache.emplace(key, std::move(fresh));
    return it->second;
}

}  // namespace itqde
