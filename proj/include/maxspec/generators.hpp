#ifndef MAXSPEC_GENERATORS_HPP
#define MAXSPEC_GENERATORS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "maxspec/distributions.hpp"
#include "maxspec/errors.hpp"
#include "maxspec/rng.hpp"

namespace maxspec {

enum class ModelVariant { iid_pareto, iid_frechet, ar1_pareto, max_ar1_frechet, moving_maxima };
enum class InnovationLaw { frechet, pareto };

inline std::string to_string(ModelVariant v) {
    switch (v) {
        case ModelVariant::iid_pareto: return "iid_pareto";
        case ModelVariant::iid_frechet: return "iid_frechet";
        case ModelVariant::ar1_pareto: return "ar1_pareto";
        case ModelVariant::max_ar1_frechet: return "max_ar1_frechet";
        default: return "moving_maxima";
    }
}

inline ModelVariant model_variant_from_string(const std::string& s) {
    if (s == "iid_pareto") return ModelVariant::iid_pareto;
    if (s == "iid_frechet") return ModelVariant::iid_frechet;
    if (s == "ar1_pareto") return ModelVariant::ar1_pareto;
    if (s == "max_ar1_frechet") return ModelVariant::max_ar1_frechet;
    if (s == "moving_maxima") return ModelVariant::moving_maxima;
    throw config_error("unknown model variant: " + s);
}

/// Synthetic heavy-tailed series with known tail exponent and dependence:
///   iid_pareto        Z with P{Z > x} = x^-alpha, x > 1
///   iid_frechet       standard alpha-Frechet
///   ar1_pareto        X(k) = phi X(k-1) + Z(k), Pareto innovations, burn-in
///   max_ar1_frechet   X(k) = phi X(k-1) v Z(k), Frechet innovations,
///                     exact stationary start
///   moving_maxima     X(k) = max_i a_i Z(k-i+1), m-dependent
struct ModelConfig {
    ModelVariant variant = ModelVariant::iid_frechet;
    double alpha = 1.5;
    double phi = 0.0;                  // ar1 / max_ar1 coefficient, in [0,1)
    std::vector<double> coeffs;        // moving_maxima a_1..a_m, all > 0
    std::int64_t n = 0;
    std::uint64_t seed = 0;
    InnovationLaw innovation = InnovationLaw::frechet;  // moving_maxima only

    void validate() const {
        if (!(alpha > 0.0)) throw config_error("generator alpha must be > 0");
        if (n < 2) throw config_error("generator length must be >= 2, got " + std::to_string(n));
        const bool uses_phi =
            variant == ModelVariant::ar1_pareto || variant == ModelVariant::max_ar1_frechet;
        if (uses_phi && !(phi >= 0.0 && phi < 1.0))
            throw config_error("phi must be in [0,1), got " + std::to_string(phi));
        if (variant == ModelVariant::moving_maxima) {
            if (coeffs.empty()) throw config_error("moving_maxima needs at least one coefficient");
            for (double a : coeffs)
                if (!(a > 0.0)) throw config_error("moving_maxima coefficients must be > 0");
        }
    }
};

/// Generate from an explicit rng (callers that manage replicate streams).
inline std::vector<double> gen_series(const ModelConfig& cfg, Rng& rng) {
    cfg.validate();
    std::vector<double> x(static_cast<std::size_t>(cfg.n));
    switch (cfg.variant) {
        case ModelVariant::iid_pareto: {
            const ParetoParams p{cfg.alpha, 1.0};
            for (auto& v : x) v = pareto_sample(p, rng);
            break;
        }
        case ModelVariant::iid_frechet: {
            const FrechetParams p{cfg.alpha, 1.0};
            for (auto& v : x) v = frechet_sample(p, rng);
            break;
        }
        case ModelVariant::ar1_pareto: {
            // Burn-in approximates the stationary infinite sum; the geometric
            // memory makes 10/(1-phi) steps ample.
            const ParetoParams p{cfg.alpha, 1.0};
            const std::int64_t burn =
                cfg.phi > 0.0 ? 10 * static_cast<std::int64_t>(std::ceil(1.0 / (1.0 - cfg.phi))) : 0;
            double acc = 0.0;
            for (std::int64_t i = 0; i < burn; ++i) acc = cfg.phi * acc + pareto_sample(p, rng);
            for (auto& v : x) {
                acc = cfg.phi * acc + pareto_sample(p, rng);
                v = acc;
            }
            break;
        }
        case ModelVariant::max_ar1_frechet: {
            // Stationary law of the max-recursion is Frechet with scale
            // (1 - phi^alpha)^(-1/alpha); start there, no burn-in needed.
            const FrechetParams innov{cfg.alpha, 1.0};
            double acc;
            if (cfg.phi > 0.0) {
                const double stat_scale = std::pow(1.0 - std::pow(cfg.phi, cfg.alpha), -1.0 / cfg.alpha);
                acc = frechet_sample(FrechetParams{cfg.alpha, stat_scale}, rng);
            } else {
                acc = 0.0;
            }
            for (auto& v : x) {
                acc = std::max(cfg.phi * acc, frechet_sample(innov, rng));
                v = acc;
            }
            break;
        }
        case ModelVariant::moving_maxima: {
            const auto m = static_cast<std::int64_t>(cfg.coeffs.size());
            auto draw = [&] {
                return cfg.innovation == InnovationLaw::frechet
                           ? frechet_sample(FrechetParams{cfg.alpha, 1.0}, rng)
                           : pareto_sample(ParetoParams{cfg.alpha, 1.0}, rng);
            };
            // Ring buffer of the last m innovations, primed with m-1 draws.
            std::vector<double> z(static_cast<std::size_t>(m));
            for (std::int64_t i = 0; i + 1 < m; ++i) z[static_cast<std::size_t>(i)] = draw();
            std::int64_t head = m - 1;
            for (auto& v : x) {
                z[static_cast<std::size_t>(head)] = draw();
                double mx = 0.0;
                for (std::int64_t i = 0; i < m; ++i) {
                    const std::int64_t idx = (head - i + m) % m;
                    mx = std::max(mx, cfg.coeffs[static_cast<std::size_t>(i)] *
                                          z[static_cast<std::size_t>(idx)]);
                }
                v = mx;
                head = (head + 1) % m;
            }
            break;
        }
    }
    return x;
}

inline std::vector<double> gen_series(const ModelConfig& cfg) {
    Rng rng(cfg.seed);
    return gen_series(cfg, rng);
}

/// Extremal index of the moving-maxima process: theta = max a_i^alpha / sum a_i^alpha.
inline double extremal_index_moving_maxima(std::span<const double> a, double alpha) {
    if (a.empty()) throw config_error("moving_maxima needs at least one coefficient");
    if (!(alpha > 0.0)) throw config_error("alpha must be > 0");
    double mx = 0.0, sum = 0.0;
    for (double ai : a) {
        if (!(ai > 0.0)) throw config_error("moving_maxima coefficients must be > 0");
        const double p = std::pow(ai, alpha);
        mx = std::max(mx, p);
        sum += p;
    }
    return mx / sum;
}

}  // namespace maxspec

#endif
