#ifndef MAXSPEC_SIGMA1_HPP
#define MAXSPEC_SIGMA1_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "maxspec/distributions.hpp"
#include "maxspec/errors.hpp"
#include "maxspec/rng.hpp"

namespace maxspec {

// ---------------------------------------------------------------------------
// The scale covariance matrix Sigma1 of the normalized max-spectrum. For
// standard Frechet data, n_j0 * Cov(Y_{j0+i'}, Y_{j0+i''}) converges to
//
//   Sigma1(i',i'') = 2^max(i',i'') * Cov(log2 Z1, log2(Z1 v (2^D - 1) Z2)),
//
// with D = |i'-i''| and Z1, Z2 independent standard 1-Frechet. The diagonal
// has the closed form 2^i * pi^2/(6 ln^2 2). The off-diagonal covariance
// reduces to the one-dimensional integral
//
//   Cov(ln Z1, ln(Z1 v (2^D-1) Z2)) = int_0^x (-ln u)/(1-u) du,  x = 2^-D,
//
// which the quadrature mode evaluates numerically and the Monte-Carlo mode
// estimates from paired draws.
// ---------------------------------------------------------------------------

namespace detail {

// Integrand of the smooth part after peeling off the analytic piece
// int_0^x (-ln u) du = x (1 - ln x).
inline double ccov_smooth_part(double u) {
    if (u <= 0.0) return 0.0;
    return -std::log(u) * u / (1.0 - u);
}

// Adaptive Simpson on [a,b] with an absolute tolerance budget.
inline double adaptive_simpson(double (*f)(double), double a, double b, double fa, double fm,
                               double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0)
        throw numerical_error("sigma1 quadrature failed to converge on [" + std::to_string(a) +
                              ", " + std::to_string(b) + "], residual " + std::to_string(delta));
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(double (*f)(double), double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

/// Cov(ln Z1, ln(Z1 v (2^delta - 1) Z2)) by quadrature; natural-log units.
inline double ccov_ln_quadrature(int delta, double tol = 1e-13) {
    if (delta == 0) return constants::pi_sq_over_6;
    const double x = std::ldexp(1.0, -delta);
    return x * (1.0 - std::log(x)) + integrate(&ccov_smooth_part, 0.0, x, tol);
}

}  // namespace detail

enum class Sigma1Mode { quadrature, montecarlo };

inline std::string to_string(Sigma1Mode m) {
    return m == Sigma1Mode::quadrature ? "quadrature" : "montecarlo";
}

/// Sigma1 over relative scale offsets 1..ell, with provenance. Entries are in
/// log2^2 units. For Monte-Carlo tables, offset_se[d-1] is the standard error
/// of the offset-d covariance estimate (log2^2 units, before the 2^max row
/// scaling).
struct CovarianceModel {
    int ell = 0;
    std::vector<double> entries;  // row-major ell x ell
    Sigma1Mode mode = Sigma1Mode::quadrature;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::vector<double> offset_se;

    double operator()(int i, int k) const {
        return entries[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(ell) +
                       static_cast<std::size_t>(k - 1)];
    }

    /// 3-sigma Monte-Carlo band for entry (i,k); 0 for quadrature tables.
    double entry_se(int i, int k) const {
        const int d = std::abs(i - k);
        if (d == 0 || offset_se.empty()) return 0.0;
        return std::ldexp(offset_se[static_cast<std::size_t>(d - 1)], std::max(i, k));
    }
};

namespace detail {

inline CovarianceModel assemble_sigma1(int ell, const std::vector<double>& ccov_log2) {
    CovarianceModel model;
    model.ell = ell;
    model.entries.resize(static_cast<std::size_t>(ell) * static_cast<std::size_t>(ell));
    const double diag = constants::pi_sq_over_6 / (constants::ln2 * constants::ln2);
    for (int i = 1; i <= ell; ++i) {
        for (int k = 1; k <= ell; ++k) {
            const int d = std::abs(i - k);
            const double base = d == 0 ? diag : ccov_log2[static_cast<std::size_t>(d - 1)];
            model.entries[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(ell) +
                          static_cast<std::size_t>(k - 1)] = std::ldexp(base, std::max(i, k));
        }
    }
    return model;
}

}  // namespace detail

/// Build Sigma1 for offsets 1..ell. Monte-Carlo mode estimates each distinct
/// offset's covariance from `mc_samples` paired standard 1-Frechet draws
/// (shared across offsets); the diagonal is always the analytic value.
inline CovarianceModel sigma1_matrix(int ell, Sigma1Mode mode, std::uint64_t mc_samples = 10'000'000,
                                     std::uint64_t seed = 0) {
    if (ell < 2) throw param_error("sigma1_matrix needs ell >= 2, got " + std::to_string(ell));
    const double ln2sq = constants::ln2 * constants::ln2;

    if (mode == Sigma1Mode::quadrature) {
        std::vector<double> ccov(static_cast<std::size_t>(ell - 1));
        for (int d = 1; d < ell; ++d)
            ccov[static_cast<std::size_t>(d - 1)] = detail::ccov_ln_quadrature(d) / ln2sq;
        CovarianceModel model = detail::assemble_sigma1(ell, ccov);
        model.mode = Sigma1Mode::quadrature;
        return model;
    }

    if (mc_samples < 1'000'000)
        throw param_error("montecarlo sigma1 needs >= 1e6 samples, got " + std::to_string(mc_samples));
    const int nd = ell - 1;
    double sum_a = 0.0, sum_a2 = 0.0;
    std::vector<double> sum_b(nd, 0.0), sum_b2(nd, 0.0), sum_ab(nd, 0.0);
    std::vector<double> sum_a2b(nd, 0.0), sum_ab2(nd, 0.0), sum_a2b2(nd, 0.0);
    std::vector<double> scale(nd);
    for (int d = 1; d <= nd; ++d) scale[d - 1] = std::ldexp(1.0, d) - 1.0;

    Rng rng(seed);
    const FrechetParams std_frechet{1.0, 1.0};
    const auto m = static_cast<double>(mc_samples);
    for (std::uint64_t t = 0; t < mc_samples; ++t) {
        const double z1 = frechet_sample(std_frechet, rng);
        const double z2 = frechet_sample(std_frechet, rng);
        const double a = std::log2(z1);
        sum_a += a;
        sum_a2 += a * a;
        for (int d = 0; d < nd; ++d) {
            const double b = std::log2(std::max(z1, scale[d] * z2));
            sum_b[d] += b;
            sum_b2[d] += b * b;
            sum_ab[d] += a * b;
            sum_a2b[d] += a * a * b;
            sum_ab2[d] += a * b * b;
            sum_a2b2[d] += a * a * b * b;
        }
    }

    std::vector<double> ccov(nd), ses(nd);
    const double ma = sum_a / m, ea2 = sum_a2 / m;
    for (int d = 0; d < nd; ++d) {
        const double mb = sum_b[d] / m, eb2 = sum_b2[d] / m, eab = sum_ab[d] / m;
        const double cov = eab - ma * mb;
        ccov[d] = cov;
        // Var of the covariance estimator: (E[(a-ma)^2 (b-mb)^2] - cov^2)/m.
        const double e_c4 = sum_a2b2[d] / m - 2.0 * mb * sum_a2b[d] / m -
                            2.0 * ma * sum_ab2[d] / m + mb * mb * ea2 + ma * ma * eb2 +
                            4.0 * ma * mb * eab - 3.0 * ma * ma * mb * mb;
        ses[d] = std::sqrt(std::max(e_c4 - cov * cov, 0.0) / m);
    }
    CovarianceModel model = detail::assemble_sigma1(ell, ccov);
    model.mode = Sigma1Mode::montecarlo;
    model.samples = mc_samples;
    model.seed = seed;
    model.offset_se = std::move(ses);
    return model;
}

/// Cholesky-based positive-semidefiniteness check with a relative jitter
/// tolerance of 1e-8 on the diagonal.
inline bool sigma1_is_psd(const CovarianceModel& model) {
    const int n = model.ell;
    std::vector<double> a = model.entries;
    double max_diag = 0.0;
    for (int i = 0; i < n; ++i)
        max_diag = std::max(max_diag, a[static_cast<std::size_t>(i) * n + i]);
    const double jitter = 1e-8 * max_diag;
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i) * n + i] += jitter;
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k <= i; ++k) {
            double s = a[static_cast<std::size_t>(i) * n + k];
            for (int t = 0; t < k; ++t)
                s -= a[static_cast<std::size_t>(i) * n + t] * a[static_cast<std::size_t>(k) * n + t];
            if (i == k) {
                if (s <= 0.0) return false;
                a[static_cast<std::size_t>(i) * n + i] = std::sqrt(s);
            } else {
                a[static_cast<std::size_t>(i) * n + k] = s / a[static_cast<std::size_t>(k) * n + k];
            }
        }
    }
    return true;
}

// --------------------------------------------------------------------------
// Versioned text format:
//
//   # optional comments
//   format maxspec-sigma1/1
//   ell <L>
//   mode <quadrature|montecarlo>
//   samples <N>
//   seed <S>
//   offset_se <L-1 values>        (montecarlo only)
//   matrix
//   <L rows of L values>
//   end
// --------------------------------------------------------------------------

inline void save_sigma1(std::ostream& os, const CovarianceModel& model) {
    os << "# max-spectrum scale covariance table\n";
    os << "format maxspec-sigma1/1\n";
    os << "ell " << model.ell << "\n";
    os << "mode " << to_string(model.mode) << "\n";
    os << "samples " << model.samples << "\n";
    os << "seed " << model.seed << "\n";
    os.precision(17);
    if (!model.offset_se.empty()) {
        os << "offset_se";
        for (double v : model.offset_se) os << ' ' << v;
        os << "\n";
    }
    os << "matrix\n";
    for (int i = 1; i <= model.ell; ++i) {
        for (int k = 1; k <= model.ell; ++k) os << (k > 1 ? " " : "") << model(i, k);
        os << "\n";
    }
    os << "end\n";
}

inline CovarianceModel load_sigma1(std::istream& is) {
    CovarianceModel model;
    std::string line;
    bool saw_format = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "format") {
            std::string fmt;
            ls >> fmt;
            if (fmt != "maxspec-sigma1/1")
                throw config_error("unsupported sigma1 table format: " + fmt);
            saw_format = true;
        } else if (key == "ell") {
            ls >> model.ell;
        } else if (key == "mode") {
            std::string m;
            ls >> m;
            if (m == "quadrature") model.mode = Sigma1Mode::quadrature;
            else if (m == "montecarlo") model.mode = Sigma1Mode::montecarlo;
            else throw config_error("unknown sigma1 mode: " + m);
        } else if (key == "samples") {
            ls >> model.samples;
        } else if (key == "seed") {
            ls >> model.seed;
        } else if (key == "offset_se") {
            double v;
            while (ls >> v) model.offset_se.push_back(v);
        } else if (key == "matrix") {
            break;
        } else {
            throw config_error("unknown sigma1 table key: " + key);
        }
    }
    if (!saw_format) throw config_error("sigma1 table missing format line");
    if (model.ell < 2) throw config_error("sigma1 table missing or bad ell");
    model.entries.resize(static_cast<std::size_t>(model.ell) * static_cast<std::size_t>(model.ell));
    for (auto& v : model.entries) {
        if (!(is >> v)) throw config_error("sigma1 table matrix truncated");
    }
    std::string tail;
    is >> tail;
    if (tail != "end") throw config_error("sigma1 table missing end marker");
    return model;
}

inline CovarianceModel load_sigma1_string(const std::string& text) {
    std::istringstream is(text);
    return load_sigma1(is);
}

}  // namespace maxspec

#endif
