#ifndef MAXSPEC_DISTRIBUTIONS_HPP
#define MAXSPEC_DISTRIBUTIONS_HPP

#include <cmath>
#include <string>

#include "maxspec/errors.hpp"
#include "maxspec/rng.hpp"

namespace maxspec {

namespace constants {
inline constexpr double euler_gamma = 0.57721566490153286060651209008;
inline constexpr double ln2 = 0.69314718055994530941723212146;
inline constexpr double pi_sq_over_6 = 1.64493406684822643647241516665;
}  // namespace constants

/// Frechet law with c.d.f. exp(-sigma^alpha x^-alpha) on x > 0.
/// "Standard" means sigma = 1.
struct FrechetParams {
    double alpha;
    double sigma = 1.0;

    void validate() const {
        if (!(alpha > 0.0) || !std::isfinite(alpha))
            throw param_error("Frechet alpha must be finite and > 0, got " + std::to_string(alpha));
        if (!(sigma > 0.0) || !std::isfinite(sigma))
            throw param_error("Frechet sigma must be finite and > 0, got " + std::to_string(sigma));
    }
};

/// Pareto law with survival (x/xm)^-alpha on x > xm.
struct ParetoParams {
    double alpha;
    double xm = 1.0;

    void validate() const {
        if (!(alpha > 0.0) || !std::isfinite(alpha))
            throw param_error("Pareto alpha must be finite and > 0, got " + std::to_string(alpha));
        if (!(xm > 0.0) || !std::isfinite(xm))
            throw param_error("Pareto xm must be finite and > 0, got " + std::to_string(xm));
    }
};

inline double frechet_cdf(double x, const FrechetParams& p) {
    p.validate();
    if (x <= 0.0) return 0.0;
    return std::exp(-std::pow(p.sigma / x, p.alpha));
}

inline double frechet_quantile(double u, const FrechetParams& p) {
    p.validate();
    if (!(u > 0.0 && u < 1.0))
        throw param_error("Frechet quantile needs u in (0,1), got " + std::to_string(u));
    return p.sigma * std::pow(-std::log(u), -1.0 / p.alpha);
}

/// Inverse-transform sampler; quantile correctness implies sampler correctness.
inline double frechet_sample(const FrechetParams& p, Rng& rng) {
    return frechet_quantile(rng.open_unit(), p);
}

inline double pareto_cdf(double x, const ParetoParams& p) {
    p.validate();
    if (x <= p.xm) return 0.0;
    return 1.0 - std::pow(p.xm / x, p.alpha);
}

inline double pareto_sample(const ParetoParams& p, Rng& rng) {
    p.validate();
    return p.xm * std::pow(rng.open_unit(), -1.0 / p.alpha);
}

struct Log2Moments {
    double mean;
    double variance;
};

/// Exact moments of log2(Z) for standard alpha-Frechet Z: ln Z is Gumbel
/// with scale 1/alpha, so E log2 Z = gamma_E/(alpha ln 2) and
/// Var log2 Z = pi^2/(6 alpha^2 ln^2 2).
inline Log2Moments log2_frechet_moments(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw param_error("log2_frechet_moments needs alpha > 0, got " + std::to_string(alpha));
    const double al = alpha * constants::ln2;
    return {constants::euler_gamma / al, constants::pi_sq_over_6 / (al * al)};
}

}  // namespace maxspec

#endif
