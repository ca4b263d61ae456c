#ifndef MAXSPEC_HILL_HPP
#define MAXSPEC_HILL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "maxspec/errors.hpp"

namespace maxspec {

namespace detail {

// Top m values of the series in descending order, O(n + m log m) via partial
// selection. Requires 1 <= m <= n and positive values.
inline std::vector<double> top_descending(std::span<const double> series, std::int64_t m) {
    const auto n = static_cast<std::int64_t>(series.size());
    for (std::int64_t i = 0; i < n; ++i)
        if (!(series[i] > 0.0))
            throw positivity_error("non-positive value " + std::to_string(series[i]) +
                                   " at index " + std::to_string(i));
    std::vector<double> v(series.begin(), series.end());
    if (m < n)
        std::nth_element(v.begin(), v.begin() + (m - 1), v.end(), std::greater<double>());
    v.resize(static_cast<std::size_t>(m));
    std::sort(v.begin(), v.end(), std::greater<double>());
    return v;
}

}  // namespace detail

/// Hill estimator from the top k order statistics:
/// alpha_H(k) = ( mean(ln X_(1..k)) - ln X_(k+1) )^-1 with X_(1) >= ... >= X_(n).
/// Returns +infinity when the top k+1 values are all equal (degenerate).
inline double hill_estimate(std::span<const double> series, std::int64_t k) {
    const auto n = static_cast<std::int64_t>(series.size());
    if (k < 1 || k > n - 1)
        throw param_error("hill_estimate needs 1 <= k <= n-1, got k = " + std::to_string(k) +
                          " with n = " + std::to_string(n));
    const std::vector<double> top = detail::top_descending(series, k + 1);
    double sum = 0.0;
    for (std::int64_t i = 0; i < k; ++i) sum += std::log(top[static_cast<std::size_t>(i)]);
    const double denom = sum / static_cast<double>(k) - std::log(top[static_cast<std::size_t>(k)]);
    if (denom <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / denom;
}

/// Hill plot table: alpha_H(k) for k = 1..k_max, one pass over the sorted
/// top k_max + 1 values.
struct HillPlot {
    std::vector<double> alpha;  // alpha[k-1] = alpha_H(k)

    std::int64_t k_max() const { return static_cast<std::int64_t>(alpha.size()); }
};

inline HillPlot hill_plot(std::span<const double> series, std::int64_t k_max) {
    const auto n = static_cast<std::int64_t>(series.size());
    if (k_max < 1 || k_max > n - 1)
        throw param_error("hill_plot needs 1 <= k_max <= n-1, got " + std::to_string(k_max));
    const std::vector<double> top = detail::top_descending(series, k_max + 1);
    HillPlot plot;
    plot.alpha.reserve(static_cast<std::size_t>(k_max));
    double sum = 0.0;
    for (std::int64_t k = 1; k <= k_max; ++k) {
        sum += std::log(top[static_cast<std::size_t>(k - 1)]);
        const double denom = sum / static_cast<double>(k) - std::log(top[static_cast<std::size_t>(k)]);
        plot.alpha.push_back(denom <= 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / denom);
    }
    return plot;
}

}  // namespace maxspec

#endif
