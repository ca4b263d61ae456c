#ifndef MAXSPEC_REGRESSION_HPP
#define MAXSPEC_REGRESSION_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "maxspec/errors.hpp"
#include "maxspec/sigma1.hpp"

namespace maxspec {

/// Closed range of spectrum scales [j1, j2], j2 > j1 >= 1.
struct ScaleRange {
    int j1;
    int j2;

    ScaleRange(int j1_, int j2_) : j1(j1_), j2(j2_) {
        if (j1 < 1 || j2 < j1 + 1)
            throw scale_range_error("need 1 <= j1 < j2, got (" + std::to_string(j1) + ", " +
                                    std::to_string(j2) + ")");
    }
    int length() const { return j2 - j1 + 1; }
};

enum class Method { ols, wls, gls };

inline std::string to_string(Method m) {
    switch (m) {
        case Method::ols: return "ols";
        case Method::wls: return "wls";
        default: return "gls";
    }
}

inline Method method_from_string(const std::string& s) {
    if (s == "ols") return Method::ols;
    if (s == "wls") return Method::wls;
    if (s == "gls") return Method::gls;
    throw config_error("unknown regression method: " + s);
}

/// Regression weights over scales j1..j2 satisfying sum w_j = 0 and
/// sum j w_j = 1, so that sum w_j Y_j estimates the spectrum slope.
struct WeightVector {
    int j1 = 1;
    std::vector<double> w;

    double slope(std::span<const double> y) const {
        double h = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) h += w[i] * y[i];
        return h;
    }
};

namespace detail {

// In-place Cholesky of a symmetric positive-definite row-major matrix.
inline void cholesky(std::vector<double>& a, int n) {
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k <= i; ++k) {
            double s = a[static_cast<std::size_t>(i) * n + k];
            for (int t = 0; t < k; ++t)
                s -= a[static_cast<std::size_t>(i) * n + t] * a[static_cast<std::size_t>(k) * n + t];
            if (i == k) {
                if (!(s > 0.0))
                    throw covariance_error("covariance matrix is not positive definite (pivot " +
                                           std::to_string(i + 1) + ")");
                a[static_cast<std::size_t>(i) * n + i] = std::sqrt(s);
            } else {
                a[static_cast<std::size_t>(i) * n + k] = s / a[static_cast<std::size_t>(k) * n + k];
            }
        }
    }
}

// Solve L L^T x = b given the Cholesky factor in the lower triangle.
inline void cholesky_solve(const std::vector<double>& l, int n, std::vector<double>& b) {
    for (int i = 0; i < n; ++i) {
        double s = b[static_cast<std::size_t>(i)];
        for (int k = 0; k < i; ++k) s -= l[static_cast<std::size_t>(i) * n + k] * b[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(i)] = s / l[static_cast<std::size_t>(i) * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < n; ++k) s -= l[static_cast<std::size_t>(k) * n + i] * b[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(i)] = s / l[static_cast<std::size_t>(i) * n + i];
    }
}

}  // namespace detail

/// Minimum-variance weights under the covariance model C, subject to the two
/// linear constraints. Closed form w = C^-1 A^T (A C^-1 A^T)^-1 b with
/// A = [1...1; j1...j2] and b = (0,1).
///
/// C by method, with block counts n_j for j = j1..j2:
///   ols: identity;
///   wls: diag(1/n_j), the Frechet-limit variance profile of the Y_j;
///   gls: Sigma1(i',i'') / (2^min(i',i'') n_min(j',j'')), the finite-sample
///        covariance of the Y_j under the same limit (proportional to Sigma1
///        itself when n is a power of two).
inline WeightVector regression_weights(const ScaleRange& range, Method method,
                                       const CovarianceModel& cov,
                                       std::span<const std::int64_t> block_counts) {
    const int ell = range.length();
    if (static_cast<int>(block_counts.size()) != ell)
        throw param_error("block_counts size " + std::to_string(block_counts.size()) +
                          " does not match range length " + std::to_string(ell));
    for (std::int64_t c : block_counts)
        if (c < 1) throw param_error("block counts must be positive");

    std::vector<double> c(static_cast<std::size_t>(ell) * static_cast<std::size_t>(ell), 0.0);
    switch (method) {
        case Method::ols:
            for (int i = 0; i < ell; ++i) c[static_cast<std::size_t>(i) * ell + i] = 1.0;
            break;
        case Method::wls:
            for (int i = 0; i < ell; ++i)
                c[static_cast<std::size_t>(i) * ell + i] =
                    1.0 / static_cast<double>(block_counts[static_cast<std::size_t>(i)]);
            break;
        case Method::gls: {
            if (cov.ell < ell)
                throw covariance_error("sigma1 table of size " + std::to_string(cov.ell) +
                                       " too small for range length " + std::to_string(ell));
            for (int i = 1; i <= ell; ++i) {
                for (int k = 1; k <= ell; ++k) {
                    const int lo = std::min(i, k);
                    const double nmin = static_cast<double>(block_counts[static_cast<std::size_t>(lo - 1)]);
                    c[static_cast<std::size_t>(i - 1) * ell + (k - 1)] =
                        cov(i, k) / (std::ldexp(1.0, lo) * nmin);
                }
            }
            break;
        }
    }

    detail::cholesky(c, ell);

    // X = C^-1 A^T, columns for the two constraints.
    std::vector<double> x0(static_cast<std::size_t>(ell), 1.0);
    std::vector<double> x1(static_cast<std::size_t>(ell));
    for (int i = 0; i < ell; ++i) x1[static_cast<std::size_t>(i)] = static_cast<double>(range.j1 + i);
    detail::cholesky_solve(c, ell, x0);
    detail::cholesky_solve(c, ell, x1);

    // M = A C^-1 A^T (2x2), rhs b = (0,1).
    double m00 = 0.0, m01 = 0.0, m11 = 0.0;
    for (int i = 0; i < ell; ++i) {
        const double ji = static_cast<double>(range.j1 + i);
        m00 += x0[static_cast<std::size_t>(i)];
        m01 += ji * x0[static_cast<std::size_t>(i)];
        m11 += ji * x1[static_cast<std::size_t>(i)];
    }
    const double det = m00 * m11 - m01 * m01;
    if (det == 0.0) throw covariance_error("constraint system is singular");
    const double y0 = -m01 / det;
    const double y1 = m00 / det;

    WeightVector out;
    out.j1 = range.j1;
    out.w.resize(static_cast<std::size_t>(ell));
    for (int i = 0; i < ell; ++i)
        out.w[static_cast<std::size_t>(i)] =
            x0[static_cast<std::size_t>(i)] * y0 + x1[static_cast<std::size_t>(i)] * y1;
    return out;
}

}  // namespace maxspec

#endif
