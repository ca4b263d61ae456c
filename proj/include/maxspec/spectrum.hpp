#ifndef MAXSPEC_SPECTRUM_HPP
#define MAXSPEC_SPECTRUM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "maxspec/errors.hpp"

namespace maxspec {

/// Dyadic max-spectrum of a positive series: for each scale j, the mean of
/// log2 of the maxima over consecutive blocks of 2^j values. Scales run from
/// j = 1 (blocks of 2) to floor(log2 n); scales with no complete block are
/// absent. The expected spectrum of heavy-tailed data is asymptotically
/// linear in j with slope H = 1/alpha.
class MaxSpectrum {
public:
    MaxSpectrum() = default;
    MaxSpectrum(std::vector<double> y, std::vector<std::int64_t> block_counts,
                std::int64_t total)
        : y_(std::move(y)), nj_(std::move(block_counts)), n_(total) {}

    int scale_count() const { return static_cast<int>(y_.size()); }
    std::int64_t total_count() const { return n_; }

    /// Y_j for scale j in [1, scale_count()].
    double y(int j) const { return y_.at(static_cast<std::size_t>(j - 1)); }
    /// n_j = floor(n / 2^j) for scale j in [1, scale_count()].
    std::int64_t block_count(int j) const { return nj_.at(static_cast<std::size_t>(j - 1)); }

    const std::vector<double>& y_values() const { return y_; }
    const std::vector<std::int64_t>& block_counts() const { return nj_; }

    friend bool operator==(const MaxSpectrum&, const MaxSpectrum&) = default;

private:
    std::vector<double> y_;
    std::vector<std::int64_t> nj_;
    std::int64_t n_ = 0;
};

/// Batch max-spectrum in O(n) via the dyadic recursion
/// D(j+1,k) = max{D(j,2k-1), D(j,2k)}. Values past the last complete block
/// at a scale contribute nothing to that scale's Y_j.
inline MaxSpectrum compute_spectrum_batch(std::span<const double> series) {
    const std::int64_t n = static_cast<std::int64_t>(series.size());
    if (n < 2) throw insufficient_data_error("need at least 2 observations, got " + std::to_string(n));
    for (std::int64_t i = 0; i < n; ++i) {
        if (!(series[i] > 0.0))
            throw positivity_error("non-positive value " + std::to_string(series[i]) +
                                   " at index " + std::to_string(i));
    }

    std::vector<double> y;
    std::vector<std::int64_t> nj;
    std::vector<double> d(series.begin(), series.end());
    std::int64_t blocks = n;
    while (blocks >= 2) {
        const std::int64_t half = blocks / 2;
        double sum = 0.0;
        for (std::int64_t k = 0; k < half; ++k) {
            d[k] = std::max(d[2 * k], d[2 * k + 1]);
            sum += std::log2(d[k]);
        }
        y.push_back(sum / static_cast<double>(half));
        nj.push_back(half);
        blocks = half;
    }
    return MaxSpectrum(std::move(y), std::move(nj), n);
}

/// Sequential max-spectrum state: O(log n) memory, O(log n) amortized work
/// per observation. Per scale it keeps the running max of the current
/// incomplete block, the sum of log2 block maxima over completed blocks, and
/// the completed-block count. A new observation cascades upward: whenever the
/// scale-j block completes (total count divisible by 2^j), its max is logged
/// and handed to scale j+1 as a partial contribution.
class StreamState {
public:
    /// Feed one observation.
    void update(double x) {
        if (!(x > 0.0))
            throw positivity_error("non-positive value " + std::to_string(x) +
                                   " at index " + std::to_string(n_));
        ++n_;
        double carry = x;
        for (std::size_t lvl = 0;; ++lvl) {
            if (lvl == scales_.size()) scales_.push_back(Scale{});
            Scale& s = scales_[lvl];
            if (s.has_partial) {
                s.partial = std::max(s.partial, carry);
            } else {
                s.partial = carry;
                s.has_partial = true;
            }
            if (n_ % (std::int64_t{1} << (lvl + 1)) != 0) break;
            s.log_sum += std::log2(s.partial);
            ++s.completed;
            carry = s.partial;
            s.has_partial = false;
        }
    }

    std::int64_t total_count() const { return n_; }
    int scale_count() const { return static_cast<int>(scales_.size()); }

    /// Spectrum over completed blocks only; partial blocks stay in the state
    /// for future updates, so finalize / update / finalize is legal.
    MaxSpectrum finalize() const {
        if (n_ < 2) throw insufficient_data_error("need at least 2 observations, got " + std::to_string(n_));
        std::vector<double> y;
        std::vector<std::int64_t> nj;
        for (const Scale& s : scales_) {
            if (s.completed < 1) break;
            y.push_back(s.log_sum / static_cast<double>(s.completed));
            nj.push_back(s.completed);
        }
        if (y.empty()) throw insufficient_data_error("no completed block at any scale");
        return MaxSpectrum(std::move(y), std::move(nj), n_);
    }

    /// Running max of the current incomplete 2^j block (the paper's R_j role).
    bool has_partial(int j) const { return scales_.at(static_cast<std::size_t>(j - 1)).has_partial; }
    double partial_max(int j) const { return scales_.at(static_cast<std::size_t>(j - 1)).partial; }
    std::int64_t completed(int j) const { return scales_.at(static_cast<std::size_t>(j - 1)).completed; }

private:
    struct Scale {
        double partial = 0.0;
        bool has_partial = false;
        double log_sum = 0.0;
        std::int64_t completed = 0;
    };

    std::vector<Scale> scales_;
    std::int64_t n_ = 0;
};

inline void stream_update(StreamState& state, double x) { state.update(x); }

}  // namespace maxspec

#endif
