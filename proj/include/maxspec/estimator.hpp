#ifndef MAXSPEC_ESTIMATOR_HPP
#define MAXSPEC_ESTIMATOR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "maxspec/distributions.hpp"
#include "maxspec/errors.hpp"
#include "maxspec/parallel.hpp"
#include "maxspec/regression.hpp"
#include "maxspec/rng.hpp"
#include "maxspec/sigma1.hpp"
#include "maxspec/spectrum.hpp"
#include "maxspec/stats.hpp"

namespace maxspec {

enum class CiKind { asymptotic, montecarlo };

inline std::string to_string(CiKind k) {
    return k == CiKind::asymptotic ? "asymptotic" : "montecarlo";
}

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.0;
    CiKind kind = CiKind::asymptotic;
    bool upper_unbounded = false;
    std::int64_t excluded_paths = 0;  // montecarlo: simulated paths with H_F <= 0
    bool unstable = false;            // montecarlo: > 5% of paths excluded

    bool contains(double alpha) const { return lower < alpha && alpha < upper; }
};

struct TailEstimate {
    double h = 0.0;
    double alpha = 0.0;
    ScaleRange range{1, 2};
    Method method = Method::gls;
    double c_w = 0.0;        // Theorem-1 variance constant w' Sigma1 w
    std::int64_t n_eff = 0;  // block count at the base scale j1 - 1
    WeightVector weights;
    std::optional<ConfidenceInterval> ci;
};

/// Point estimate H = sum w_j Y_j over [j1, j2], alpha = 1/H. Offsets into
/// Sigma1 are taken relative to the base scale j0 = j1 - 1, whose block count
/// scales the standard errors (2 n_{j1} stands in when j1 = 1).
inline TailEstimate estimate(const MaxSpectrum& spectrum, const ScaleRange& range, Method method,
                             const CovarianceModel& cov) {
    if (range.j2 > spectrum.scale_count())
        throw scale_range_error("range (" + std::to_string(range.j1) + ", " + std::to_string(range.j2) +
                                ") exceeds available scales (" + std::to_string(spectrum.scale_count()) + ")");
    const int ell = range.length();
    if (cov.ell < ell)
        throw covariance_error("sigma1 table of size " + std::to_string(cov.ell) +
                               " too small for range length " + std::to_string(ell));

    std::vector<std::int64_t> counts(static_cast<std::size_t>(ell));
    for (int i = 0; i < ell; ++i) counts[static_cast<std::size_t>(i)] = spectrum.block_count(range.j1 + i);
    WeightVector w = regression_weights(range, method, cov, counts);

    double h = 0.0;
    for (int i = 0; i < ell; ++i) h += w.w[static_cast<std::size_t>(i)] * spectrum.y(range.j1 + i);
    if (!(h > 0.0)) throw degenerate_estimate_error(h);

    double cw = 0.0;
    for (int i = 1; i <= ell; ++i)
        for (int k = 1; k <= ell; ++k)
            cw += w.w[static_cast<std::size_t>(i - 1)] * w.w[static_cast<std::size_t>(k - 1)] * cov(i, k);

    TailEstimate est;
    est.h = h;
    est.alpha = 1.0 / h;
    est.range = range;
    est.method = method;
    est.c_w = cw;
    est.n_eff = range.j1 >= 2 ? spectrum.block_count(range.j1 - 1) : 2 * spectrum.block_count(1);
    est.weights = std::move(w);
    return est;
}

/// Theorem-1 interval: reciprocal of the symmetric interval for H,
/// delta = H z_{(1+level)/2} sqrt(c_w / n_eff). If H - delta <= 0 the upper
/// endpoint is +infinity and flagged.
inline ConfidenceInterval asymptotic_ci(const TailEstimate& est, double level) {
    if (!(level > 0.0 && level < 1.0))
        throw param_error("confidence level must be in (0,1), got " + std::to_string(level));
    if (!(est.h > 0.0)) throw degenerate_estimate_error(est.h);
    const double z = detail::normal_quantile(0.5 * (1.0 + level));
    const double delta = est.h * z * std::sqrt(est.c_w / static_cast<double>(est.n_eff));
    ConfidenceInterval ci;
    ci.level = level;
    ci.kind = CiKind::asymptotic;
    ci.lower = 1.0 / (est.h + delta);
    if (est.h - delta <= 0.0) {
        ci.upper = std::numeric_limits<double>::infinity();
        ci.upper_unbounded = true;
    } else {
        ci.upper = 1.0 / (est.h - delta);
    }
    return ci;
}

/// Theorem-2 interval for the largest scales. Simulates `reps` paths of r
/// i.i.d. standard 1-Frechet variables, applies the data weights to each
/// path's spectrum (offset i maps to path scale i) to get the pivot
/// H_F = sum w_i Y_i^Z, and inverts the pivot relation H-hat ~ H * H_F:
/// interval = alpha-hat * (q_lo(H_F), q_hi(H_F)). Paths with H_F <= 0 are
/// excluded and counted; more than 5% exclusions flags the interval unstable.
inline ConfidenceInterval montecarlo_ci(const TailEstimate& est, std::int64_t r,
                                        const WeightVector& weights, std::int64_t reps, double level,
                                        std::uint64_t seed, unsigned threads = 0) {
    const int ell = static_cast<int>(weights.w.size());
    if (r < (std::int64_t{1} << ell))
        throw param_error("montecarlo_ci needs r >= 2^ell = " + std::to_string(std::int64_t{1} << ell) +
                          ", got " + std::to_string(r));
    if (reps < 500) throw param_error("montecarlo_ci needs reps >= 500, got " + std::to_string(reps));
    if (!(level > 0.0 && level < 1.0))
        throw param_error("confidence level must be in (0,1), got " + std::to_string(level));
    if (!(est.alpha > 0.0)) throw degenerate_estimate_error(est.h);

    std::vector<double> pivots(static_cast<std::size_t>(reps),
                               std::numeric_limits<double>::quiet_NaN());
    const FrechetParams std_frechet{1.0, 1.0};
    detail::parallel_for(static_cast<std::size_t>(reps), threads, [&](std::size_t rep) {
        Rng rng = Rng::stream(seed, rep);
        std::vector<double> path(static_cast<std::size_t>(r));
        for (auto& v : path) v = frechet_sample(std_frechet, rng);
        const MaxSpectrum sp = compute_spectrum_batch(path);
        double hf = 0.0;
        for (int i = 1; i <= ell; ++i) hf += weights.w[static_cast<std::size_t>(i - 1)] * sp.y(i);
        if (hf > 0.0) pivots[rep] = hf;
    });

    std::vector<double> usable;
    usable.reserve(pivots.size());
    for (double v : pivots)
        if (!std::isnan(v)) usable.push_back(v);
    const std::int64_t excluded = reps - static_cast<std::int64_t>(usable.size());
    if (usable.size() < 2)
        throw numerical_error("montecarlo_ci: all simulated pivot paths were degenerate");
    std::sort(usable.begin(), usable.end());

    ConfidenceInterval ci;
    ci.level = level;
    ci.kind = CiKind::montecarlo;
    ci.lower = est.alpha * detail::quantile_sorted(usable, 0.5 * (1.0 - level));
    ci.upper = est.alpha * detail::quantile_sorted(usable, 0.5 * (1.0 + level));
    ci.excluded_paths = excluded;
    ci.unstable = excluded * 20 > reps;
    return ci;
}

struct PivotCheckResult {
    double ks = 0.0;
    bool pass = false;
};

/// Validates the self-normalization behind montecarlo_ci: the pivot
/// alpha-hat_F computed from alpha-Frechet paths must be distributed as
/// alpha times the pivot from standard 1-Frechet paths. Two independent
/// simulations of `reps` paths are compared by their KS distance (< 0.05).
inline PivotCheckResult pivot_scale_invariance_check(double alpha, std::int64_t reps = 5000,
                                                     std::uint64_t seed = 0, std::int64_t r = 32,
                                                     unsigned threads = 0) {
    if (!(alpha > 0.0)) throw param_error("pivot check needs alpha > 0");
    const int ell = 5;
    ScaleRange range(1, ell);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(ell));
    for (int i = 0; i < ell; ++i) counts[static_cast<std::size_t>(i)] = r >> (i + 1);
    const WeightVector w = regression_weights(range, Method::ols, CovarianceModel{}, counts);

    auto simulate = [&](double a, std::uint64_t substream) {
        std::vector<double> out(static_cast<std::size_t>(reps),
                                std::numeric_limits<double>::quiet_NaN());
        const FrechetParams params{a, 1.0};
        detail::parallel_for(static_cast<std::size_t>(reps), threads, [&](std::size_t rep) {
            Rng rng = Rng::stream(Rng::derive_seed(seed, substream), rep);
            std::vector<double> path(static_cast<std::size_t>(r));
            for (auto& v : path) v = frechet_sample(params, rng);
            const MaxSpectrum sp = compute_spectrum_batch(path);
            double hf = 0.0;
            for (int i = 1; i <= ell; ++i) hf += w.w[static_cast<std::size_t>(i - 1)] * sp.y(i);
            if (hf > 0.0) out[rep] = 1.0 / hf;
        });
        std::vector<double> usable;
        for (double v : out)
            if (!std::isnan(v)) usable.push_back(v);
        return usable;
    };

    std::vector<double> from_alpha = simulate(alpha, 1);
    std::vector<double> from_standard = simulate(1.0, 2);
    for (double& v : from_standard) v *= alpha;

    PivotCheckResult res;
    res.ks = detail::ks_two_sample(std::move(from_alpha), std::move(from_standard));
    res.pass = res.ks < 0.05;
    return res;
}

}  // namespace maxspec

#endif
