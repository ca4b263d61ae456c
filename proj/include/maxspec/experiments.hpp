#ifndef MAXSPEC_EXPERIMENTS_HPP
#define MAXSPEC_EXPERIMENTS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "maxspec/autoselect.hpp"
#include "maxspec/errors.hpp"
#include "maxspec/estimator.hpp"
#include "maxspec/generators.hpp"
#include "maxspec/parallel.hpp"
#include "maxspec/sigma1.hpp"
#include "maxspec/spectrum.hpp"

namespace maxspec {

/// One coverage experiment: a generator sweep over phi, a j1 grid, CI levels.
/// j2 is always the largest available scale, floor(log2 n).
struct CoverageSpec {
    ModelConfig generator;            // phi ignored when phis is non-empty
    std::vector<double> phis;         // sweep values; empty = use generator.phi
    std::vector<int> j1_grid;
    std::vector<double> levels{0.95};
    CiKind ci = CiKind::asymptotic;
    int reps = 500;
    std::uint64_t seed = 0;
    Method method = Method::gls;
    int mc_inner_reps = 1000;         // pivot paths per replicate (montecarlo ci)
    unsigned threads = 0;

    void validate() const {
        if (reps < 100) throw config_error("coverage needs reps >= 100, got " + std::to_string(reps));
        if (j1_grid.empty()) throw config_error("coverage needs a non-empty j1 grid");
        for (double lv : levels)
            if (!(lv > 0.0 && lv < 1.0)) throw config_error("coverage levels must be in (0,1)");
        generator.validate();
    }
};

struct CoverageCell {
    double phi;
    int j1;
    double level;
    double coverage;       // hits / usable replicates
    double se;             // sqrt(c (1-c) / usable)
    int usable;            // replicates with a defined CI
    int degenerate;        // replicates with H <= 0 (no CI)
};

struct CoverageResult {
    std::vector<CoverageCell> cells;
};

/// Reproduces the coverage-table experiment: for each (phi, j1, level),
/// generate `reps` series, estimate H(j1, log2 n) and record whether the CI
/// contains the true alpha. Replicate r of sweep value phi_i always owns
/// stream (derive_seed(seed, i), r), so results are independent of thread
/// count and stable when reps grows.
inline CoverageResult run_coverage(const CoverageSpec& spec, const CovarianceModel& cov) {
    spec.validate();
    std::vector<double> phis = spec.phis.empty() ? std::vector<double>{spec.generator.phi} : spec.phis;
    const int nj1 = static_cast<int>(spec.j1_grid.size());
    const int nlv = static_cast<int>(spec.levels.size());

    CoverageResult result;
    for (std::size_t pi = 0; pi < phis.size(); ++pi) {
        ModelConfig cfg = spec.generator;
        cfg.phi = phis[pi];
        cfg.validate();
        const std::uint64_t series_seed = Rng::derive_seed(spec.seed, pi);
        const std::uint64_t pivot_seed = Rng::derive_seed(spec.seed, 0x1000 + pi);

        // outcome per (rep, j1, level): 1 = hit, 0 = miss, -1 = degenerate
        std::vector<signed char> outcome(
            static_cast<std::size_t>(spec.reps) * static_cast<std::size_t>(nj1) * nlv, 0);

        detail::parallel_for(static_cast<std::size_t>(spec.reps), spec.threads, [&](std::size_t rep) {
            Rng rng = Rng::stream(series_seed, rep);
            const std::vector<double> x = gen_series(cfg, rng);
            const MaxSpectrum sp = compute_spectrum_batch(x);
            const int j2 = sp.scale_count();
            for (int a = 0; a < nj1; ++a) {
                const int j1 = spec.j1_grid[static_cast<std::size_t>(a)];
                signed char* row = &outcome[(rep * nj1 + a) * nlv];
                try {
                    const TailEstimate est = estimate(sp, ScaleRange(j1, j2), spec.method, cov);
                    for (int li = 0; li < nlv; ++li) {
                        const double level = spec.levels[static_cast<std::size_t>(li)];
                        ConfidenceInterval ci;
                        if (spec.ci == CiKind::asymptotic) {
                            ci = asymptotic_ci(est, level);
                        } else {
                            ci = montecarlo_ci(est, est.n_eff, est.weights, spec.mc_inner_reps, level,
                                               Rng::derive_seed(pivot_seed, rep * 64 + a), 1);
                        }
                        row[li] = ci.contains(cfg.alpha) ? 1 : 0;
                    }
                } catch (const degenerate_estimate_error&) {
                    for (int li = 0; li < nlv; ++li) row[li] = -1;
                }
            }
        });

        for (int a = 0; a < nj1; ++a) {
            for (int li = 0; li < nlv; ++li) {
                int hits = 0, usable = 0, degenerate = 0;
                for (int rep = 0; rep < spec.reps; ++rep) {
                    const signed char v = outcome[(static_cast<std::size_t>(rep) * nj1 + a) * nlv + li];
                    if (v < 0) ++degenerate;
                    else {
                        ++usable;
                        hits += v;
                    }
                }
                CoverageCell cell;
                cell.phi = phis[pi];
                cell.j1 = spec.j1_grid[static_cast<std::size_t>(a)];
                cell.level = spec.levels[static_cast<std::size_t>(li)];
                cell.usable = usable;
                cell.degenerate = degenerate;
                cell.coverage = usable > 0 ? static_cast<double>(hits) / usable : 0.0;
                cell.se = usable > 0 ? std::sqrt(cell.coverage * (1.0 - cell.coverage) / usable) : 0.0;
                result.cells.push_back(cell);
            }
        }
    }
    return result;
}

/// Root-mean-squared error of H(j1, j2) against the true slope, per j1.
/// j1 sweeps 1..j2-1 unless a grid is given.
inline MseCurve mse_curve(const ModelConfig& generator, double true_h, int reps, std::uint64_t seed,
                          Method method, const CovarianceModel& cov,
                          std::vector<int> j1_grid = {}, unsigned threads = 0) {
    if (reps < 1) throw config_error("mse_curve needs reps >= 1");
    generator.validate();
    const int j2 = static_cast<int>(std::floor(std::log2(static_cast<double>(generator.n))));
    if (j1_grid.empty())
        for (int j1 = 1; j1 < j2; ++j1) j1_grid.push_back(j1);

    // Block counts depend only on n, so weights are shared across replicates.
    std::vector<WeightVector> weights;
    weights.reserve(j1_grid.size());
    for (int j1 : j1_grid) {
        ScaleRange range(j1, j2);
        std::vector<std::int64_t> counts(static_cast<std::size_t>(range.length()));
        for (int i = 0; i < range.length(); ++i)
            counts[static_cast<std::size_t>(i)] = generator.n >> (j1 + i);
        weights.push_back(regression_weights(range, method, cov, counts));
    }

    std::vector<double> sq(j1_grid.size() * static_cast<std::size_t>(reps), 0.0);
    detail::parallel_for(static_cast<std::size_t>(reps), threads, [&](std::size_t rep) {
        Rng rng = Rng::stream(seed, rep);
        const std::vector<double> x = gen_series(generator, rng);
        const MaxSpectrum sp = compute_spectrum_batch(x);
        for (std::size_t a = 0; a < j1_grid.size(); ++a) {
            const int j1 = j1_grid[a];
            double h = 0.0;
            for (std::size_t i = 0; i < weights[a].w.size(); ++i)
                h += weights[a].w[i] * sp.y(j1 + static_cast<int>(i));
            const double e = h - true_h;
            sq[a * static_cast<std::size_t>(reps) + rep] = e * e;
        }
    });

    MseCurve curve;
    curve.j1 = j1_grid;
    curve.rmse.resize(j1_grid.size());
    for (std::size_t a = 0; a < j1_grid.size(); ++a) {
        double s = 0.0;
        for (int rep = 0; rep < reps; ++rep) s += sq[a * static_cast<std::size_t>(reps) + rep];
        curve.rmse[a] = std::sqrt(s / reps);
    }
    return curve;
}

struct SelectionStudyResult {
    std::vector<int> j1_values;          // selected j1 per replicate (0 = degenerate fit)
    std::vector<double> alpha_hats;      // alpha from the selected range, non-degenerate reps
    std::map<int, int> j1_histogram;
    MseCurve rmse;
    int degenerate = 0;

    int modal_j1() const {
        int best = 0, bestc = -1;
        for (const auto& [j1, c] : j1_histogram)
            if (c > bestc) {
                bestc = c;
                best = j1;
            }
        return best;
    }
};

/// The three panels of the automatic-selection study: histogram of selected
/// j1, the resulting alpha estimates, and the RMSE-vs-j1 curve.
inline SelectionStudyResult run_selection_study(const ModelConfig& generator,
                                                const AutoSelectConfig& auto_cfg, int reps,
                                                std::uint64_t seed, const CovarianceModel& cov,
                                                unsigned threads = 0) {
    if (reps < 100) throw config_error("selection study needs reps >= 100");
    generator.validate();
    auto_cfg.validate();

    std::vector<int> sel(static_cast<std::size_t>(reps), 0);
    std::vector<double> alphas(static_cast<std::size_t>(reps), 0.0);
    detail::parallel_for(static_cast<std::size_t>(reps), threads, [&](std::size_t rep) {
        Rng rng = Rng::stream(Rng::derive_seed(seed, 1), rep);
        const std::vector<double> x = gen_series(generator, rng);
        const MaxSpectrum sp = compute_spectrum_batch(x);
        try {
            const SelectionResult r = select_j1(sp, auto_cfg, cov);
            sel[rep] = r.j1;
            alphas[rep] = r.estimate.alpha;
        } catch (const degenerate_estimate_error&) {
            sel[rep] = 0;
        }
    });

    SelectionStudyResult out;
    out.j1_values = std::move(sel);
    for (std::size_t rep = 0; rep < out.j1_values.size(); ++rep) {
        if (out.j1_values[rep] == 0) {
            ++out.degenerate;
            continue;
        }
        ++out.j1_histogram[out.j1_values[rep]];
        out.alpha_hats.push_back(alphas[rep]);
    }
    // Same replicate streams as the selection pass, so the RMSE curve and the
    // histograms describe the same series.
    out.rmse = mse_curve(generator, 1.0 / generator.alpha, reps, Rng::derive_seed(seed, 1),
                         auto_cfg.method, cov, {}, threads);
    return out;
}

}  // namespace maxspec

#endif
