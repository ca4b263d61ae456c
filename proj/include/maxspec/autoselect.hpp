#ifndef MAXSPEC_AUTOSELECT_HPP
#define MAXSPEC_AUTOSELECT_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maxspec/errors.hpp"
#include "maxspec/estimator.hpp"
#include "maxspec/regression.hpp"
#include "maxspec/sigma1.hpp"
#include "maxspec/spectrum.hpp"
#include "maxspec/stats.hpp"

namespace maxspec {

struct AutoSelectConfig {
    double p = 0.01;                 // significance level of the linearity test
    int b = 4;                       // back-start: first candidate is j2 - b
    std::optional<int> j2;           // default: largest available scale
    Method method = Method::gls;

    void validate() const {
        if (!(p > 0.0 && p < 1.0))
            throw param_error("autoselect p must be in (0,1), got " + std::to_string(p));
        if (b < 2) throw param_error("autoselect b must be >= 2, got " + std::to_string(b));
    }
};

struct SelectionStep {
    int candidate_j1;   // the j1 whose extension to j1-1 is being tested
    double h_new;       // H(j1-1, j2)
    double h_old;       // H(j1, j2)
    double statistic;   // |h_new - h_old|
    double threshold;   // z_{1-p/2} * sqrt(var of the difference)
    bool significant;
};

struct SelectionResult {
    int j1;
    TailEstimate estimate;
    std::vector<SelectionStep> trace;
};

/// Iteratively extends the regression range downward from j1 = j2 - b until
/// the extension changes the slope by more than its Theorem-1 standard error
/// allows at level p (two-sided). On a significant deviation the last
/// accepted range (j1, j2) is kept. The difference variance is
/// H_old^2 u' C u / n_j0 with u the weight difference over scales
/// {j1-1..j2}, C the Sigma1 model at offsets relative to j0 = j1 - 2.
inline SelectionResult select_j1(const MaxSpectrum& spectrum, const AutoSelectConfig& cfg,
                                 const CovarianceModel& cov) {
    cfg.validate();
    const int j2 = cfg.j2.value_or(spectrum.scale_count());
    if (j2 > spectrum.scale_count())
        throw scale_range_error("j2 = " + std::to_string(j2) + " exceeds available scales");
    if (spectrum.scale_count() < cfg.b + 2)
        throw insufficient_data_error("autoselect needs at least b+2 = " + std::to_string(cfg.b + 2) +
                                      " scales, spectrum has " + std::to_string(spectrum.scale_count()));

    const double z = detail::normal_quantile(1.0 - 0.5 * cfg.p);
    const std::int64_t n = spectrum.total_count();

    auto fit = [&](int j1) {
        ScaleRange range(j1, j2);
        std::vector<std::int64_t> counts(static_cast<std::size_t>(range.length()));
        for (int i = 0; i < range.length(); ++i)
            counts[static_cast<std::size_t>(i)] = spectrum.block_count(j1 + i);
        WeightVector w = regression_weights(range, cfg.method, cov, counts);
        double h = 0.0;
        for (int i = 0; i < range.length(); ++i)
            h += w.w[static_cast<std::size_t>(i)] * spectrum.y(j1 + i);
        return std::pair<WeightVector, double>(std::move(w), h);
    };

    SelectionResult result;
    int j1 = std::max(1, j2 - cfg.b);
    while (j1 > 1) {
        auto [w_new, h_new] = fit(j1 - 1);
        auto [w_old, h_old] = fit(j1);

        // Weight difference over scales j1-1..j2; the old weights see a zero
        // at the prepended scale.
        const int m = j2 - (j1 - 1) + 1;
        std::vector<double> u(static_cast<std::size_t>(m));
        u[0] = w_new.w[0];
        for (int i = 1; i < m; ++i)
            u[static_cast<std::size_t>(i)] = w_new.w[static_cast<std::size_t>(i)] -
                                             w_old.w[static_cast<std::size_t>(i - 1)];

        const int j0 = j1 - 2;
        if (cov.ell < m)
            throw covariance_error("sigma1 table of size " + std::to_string(cov.ell) +
                                   " too small for selection test width " + std::to_string(m));
        double quad = 0.0;
        for (int i = 1; i <= m; ++i)
            for (int k = 1; k <= m; ++k)
                quad += u[static_cast<std::size_t>(i - 1)] * u[static_cast<std::size_t>(k - 1)] * cov(i, k);
        const double nj0 = static_cast<double>(n >> j0);
        const double var = h_old * h_old * quad / nj0;
        const double stat = std::abs(h_new - h_old);
        const double threshold = z * std::sqrt(std::max(var, 0.0));

        const bool significant = stat > threshold;
        result.trace.push_back({j1, h_new, h_old, stat, threshold, significant});
        if (significant) {
            result.j1 = j1;
            result.estimate = estimate(spectrum, ScaleRange(j1, j2), cfg.method, cov);
            return result;
        }
        --j1;
    }
    result.j1 = 1;
    result.estimate = estimate(spectrum, ScaleRange(1, j2), cfg.method, cov);
    return result;
}

struct MseCurve {
    std::vector<int> j1;
    std::vector<double> rmse;

    int argmin_j1() const {
        int best = j1.front();
        double bestv = rmse.front();
        for (std::size_t i = 1; i < rmse.size(); ++i)
            if (rmse[i] < bestv) {
                bestv = rmse[i];
                best = j1[i];
            }
        return best;
    }
};

}  // namespace maxspec

#endif
