#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "transform.hpp"

namespace fptlab {

// Numerical Laplace inversion from real-axis transform values only.
//
// Two engines sit behind one contract:
//  * Gaver-Stehfest for smooth functions on (0, inf) -- FPT densities and
//    CDFs. Accuracy ~1e-4..1e-6 relative at order 14 in doubles.
//  * A Legendre least-squares fit for densities with known compact support
//    (0,S). Gaver-Stehfest cannot resolve the e^{-S lambda} delay structure
//    of compact-support transforms at any double-precision order (errors
//    stay O(0.1)); the fit recovers smooth densities to ~1e-7.

struct InversionConfig {
    int order = 14;              // Gaver-Stehfest stages, even, in [8,18]
    std::vector<double> grid;    // strictly increasing, positive
    double tail_cut = 1e7;       // max abscissa passed to the transform
    double support = 0.0;        // > 0: invert as a density on (0, support)
    int fit_degree = 24;         // Legendre degree for the support-aware path

    void validate() const {
        if (order < 8 || order > 18 || order % 2 != 0)
            throw std::invalid_argument("InversionConfig: order must be even in [8,18]");
        if (!(tail_cut > 0))
            throw std::invalid_argument("InversionConfig: tail_cut must be > 0");
        if (fit_degree < 4 || fit_degree > 40)
            throw std::invalid_argument("InversionConfig: fit_degree must be in [4,40]");
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (!(grid[i] > 0))
                throw std::invalid_argument("InversionConfig: grid points must be > 0");
            if (i && !(grid[i] > grid[i - 1]))
                throw std::invalid_argument("InversionConfig: grid must be strictly increasing");
        }
    }
};

struct InvertedTable {
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<std::uint8_t> ok;          // per-point success
    double max_monotone_violation = 0.0;   // cdf_from_lt only

    bool all_ok() const {
        for (auto f : ok) if (!f) return false;
        return true;
    }
};

inline std::vector<double> stehfest_coefficients(int order) {
    if (order < 2 || order % 2 != 0)
        throw std::invalid_argument("stehfest_coefficients: order must be even");
    auto factl = [](int n) {
        long double f = 1.0L;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    const int half = order / 2;
    std::vector<double> a(order);
    for (int k = 1; k <= order; ++k) {
        long double s = 0.0L;
        for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
            long double num = powl(static_cast<long double>(j), half) * factl(2 * j);
            long double den = factl(half - j) * factl(j) * factl(j - 1) *
                              factl(k - j) * factl(2 * j - k);
            s += num / den;
        }
        a[k - 1] = static_cast<double>(((k + half) % 2) ? -s : s);
    }
    return a;
}

// Gaver-Stehfest value at one point; sets ok=false on overflow/NaN or when
// an abscissa would exceed tail_cut (per-point failure, never a global abort).
template <class F>
double gs_invert_at(F&& transform, double t, const std::vector<double>& coef,
                    double tail_cut, bool& ok) {
    ok = true;
    const double ln2t = 0.6931471805599453 / t;
    double s = 0.0;
    for (std::size_t k = 1; k <= coef.size(); ++k) {
        const double lam = k * ln2t;
        if (lam > tail_cut) { ok = false; return std::numeric_limits<double>::quiet_NaN(); }
        double v;
        try {
            v = transform(lam);
        } catch (const std::exception&) {
            ok = false;
            return std::numeric_limits<double>::quiet_NaN();
        }
        if (!std::isfinite(v)) { ok = false; return std::numeric_limits<double>::quiet_NaN(); }
        s += coef[k - 1] * v;
    }
    const double r = ln2t * s;
    if (!std::isfinite(r)) { ok = false; return std::numeric_limits<double>::quiet_NaN(); }
    return r;
}

namespace detail {

// Modified spherical Bessel i_j(z) by its positive-term series.
inline double modified_spherical_bessel_i(int j, double z) {
    double dfac = 1.0;
    for (int l = 3; l <= 2 * j + 1; l += 2) dfac *= l;
    const double pref = (j == 0 ? 1.0 : std::pow(z, j)) / dfac;
    double sum = 1.0, term = 1.0;
    for (int m = 1; m <= 300; ++m) {
        term *= (z * z / 2.0) / (m * (2.0 * j + 2.0 * m + 1.0));
        sum += term;
        if (term <= 1e-18 * sum) break;
    }
    return pref * sum;
}

// integral_0^S e^{-lambda u} P_j(2u/S - 1) du = S e^{-z} (-1)^j i_j(z),
// z = lambda S / 2.
inline double legendre_basis_lt(int j, double lambda, double S) {
    const double z = 0.5 * lambda * S;
    const double sign = (j % 2) ? -1.0 : 1.0;
    return S * std::exp(-z) * sign * modified_spherical_bessel_i(j, z);
}

inline double legendre_sum(const std::vector<double>& c, double x) {
    // sum c_j P_j(x) by upward recurrence
    double pm1 = 1.0, p = x, s = c[0];
    if (c.size() > 1) s += c[1] * x;
    for (std::size_t j = 2; j < c.size(); ++j) {
        const double pj = ((2.0 * j - 1.0) * x * p - (j - 1.0) * pm1) / j;
        s += c[j] * pj;
        pm1 = p;
        p = pj;
    }
    return s;
}

// Householder QR least squares, A row-major M x N with M >= N.
inline std::vector<double> solve_least_squares(std::vector<double> A, int M, int N,
                                               std::vector<double> b) {
    std::vector<double> rdiag(N);
    for (int k = 0; k < N; ++k) {
        double nrm = 0.0;
        for (int i = k; i < M; ++i) nrm += A[i * N + k] * A[i * N + k];
        nrm = std::sqrt(nrm);
        if (!(nrm > 0.0)) throw std::runtime_error("least squares: rank deficient");
        const double alpha = A[k * N + k] > 0 ? -nrm : nrm;
        A[k * N + k] -= alpha;
        rdiag[k] = alpha;
        double vtv = 0.0;
        for (int i = k; i < M; ++i) vtv += A[i * N + k] * A[i * N + k];
        for (int j = k + 1; j < N; ++j) {
            double dot = 0.0;
            for (int i = k; i < M; ++i) dot += A[i * N + k] * A[i * N + j];
            const double f = 2.0 * dot / vtv;
            for (int i = k; i < M; ++i) A[i * N + j] -= f * A[i * N + k];
        }
        double dot = 0.0;
        for (int i = k; i < M; ++i) dot += A[i * N + k] * b[i];
        const double f = 2.0 * dot / vtv;
        for (int i = k; i < M; ++i) b[i] -= f * A[i * N + k];
    }
    std::vector<double> c(N);
    for (int k = N - 1; k >= 0; --k) {
        double s = b[k];
        for (int j = k + 1; j < N; ++j) s -= A[k * N + j] * c[j];
        c[k] = s / rdiag[k];
    }
    return c;
}

} // namespace detail

// Density on (0,S) reconstructed as a truncated Legendre series fitted in
// least squares to bilateral transform values on a symmetric real grid.
struct LegendreDensityFit {
    double support = 1.0;
    std::vector<double> coef;
    bool ok = false;

    double operator()(double u) const {
        if (!(u > 0.0 && u < support)) return 0.0;
        return detail::legendre_sum(coef, 2.0 * u / support - 1.0);
    }
    double mass() const { return support * coef[0]; }
};

template <class G>
LegendreDensityFit fit_density_from_lt(G&& ghat, double S, int degree = 24) {
    if (!(S > 0)) throw std::domain_error("fit_density_from_lt: S must be > 0");
    const int N = degree + 1;
    const int per_side = (3 * degree) / 2;
    const double zmax = degree + 8.0;
    std::vector<double> rows;
    std::vector<double> rhs;
    rows.reserve(2 * per_side * N);
    for (int side = 0; side < 2; ++side) {
        for (int m = 0; m < per_side; ++m) {
            const double z = 0.25 + (zmax - 0.25) * m / (per_side - 1);
            const double lam = (side ? -2.0 : 2.0) * z / S;
            double g;
            try {
                g = ghat(lam);
            } catch (const std::exception&) {
                continue;
            }
            if (!std::isfinite(g)) continue;
            std::vector<double> row(N);
            double rmax = std::abs(g);
            for (int j = 0; j < N; ++j) {
                row[j] = detail::legendre_basis_lt(j, lam, S);
                rmax = std::max(rmax, std::abs(row[j]));
            }
            if (!(rmax > 0) || !std::isfinite(rmax)) continue;
            const double w = 1.0 / rmax;
            for (int j = 0; j < N; ++j) rows.push_back(row[j] * w);
            rhs.push_back(g * w);
        }
    }
    LegendreDensityFit fit;
    fit.support = S;
    const int M = static_cast<int>(rhs.size());
    if (M < 2 * N) return fit; // not enough usable transform evaluations
    try {
        fit.coef = detail::solve_least_squares(std::move(rows), M, N, std::move(rhs));
    } catch (const std::exception&) {
        return fit;
    }
    for (double c : fit.coef)
        if (!std::isfinite(c)) return fit;
    fit.ok = true;
    return fit;
}

// Invert a transform on cfg.grid. With cfg.support > 0 the support-aware
// density fit is used; otherwise plain Gaver-Stehfest.
template <class F>
InvertedTable invert(F&& transform, const InversionConfig& cfg) {
    cfg.validate();
    InvertedTable out;
    out.grid = cfg.grid;
    out.values.assign(cfg.grid.size(), 0.0);
    out.ok.assign(cfg.grid.size(), 1);
    if (cfg.support > 0.0) {
        auto fit = fit_density_from_lt(transform, cfg.support, cfg.fit_degree);
        for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
            if (fit.ok) {
                out.values[i] = fit(cfg.grid[i]);
            } else {
                out.values[i] = std::numeric_limits<double>::quiet_NaN();
                out.ok[i] = 0;
            }
        }
        return out;
    }
    const auto coef = stehfest_coefficients(cfg.order);
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
        bool ok = true;
        out.values[i] = gs_invert_at(transform, cfg.grid[i], coef, cfg.tail_cut, ok);
        out.ok[i] = ok ? 1 : 0;
    }
    return out;
}

// Invert fhat(lambda)/lambda to a CDF table: clipped to [0,1], made
// nondecreasing, with the largest raw monotonicity violation reported
// (violations above 1e-3 mark the offending point as not ok).
template <class F>
InvertedTable cdf_from_lt(F&& transform, const std::vector<double>& t_grid,
                          int order = 14, double tail_cut = 1e7) {
    InversionConfig cfg;
    cfg.order = order;
    cfg.grid = t_grid;
    cfg.tail_cut = tail_cut;
    cfg.validate();
    const auto coef = stehfest_coefficients(cfg.order);
    InvertedTable out;
    out.grid = t_grid;
    out.values.assign(t_grid.size(), 0.0);
    out.ok.assign(t_grid.size(), 1);
    double running = 0.0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        bool ok = true;
        const double raw = gs_invert_at(
            [&](double lam) { return transform(lam) / lam; }, t_grid[i], coef,
            cfg.tail_cut, ok);
        if (!ok) {
            out.values[i] = running;
            out.ok[i] = 0;
            continue;
        }
        const double clipped = std::clamp(raw, 0.0, 1.0);
        if (clipped < running) {
            const double viol = running - clipped;
            out.max_monotone_violation = std::max(out.max_monotone_violation, viol);
            if (viol > 1e-3) out.ok[i] = 0;
        }
        running = std::max(running, clipped);
        out.values[i] = running;
    }
    return out;
}

// Outcome of checking whether a candidate bilateral transform is the
// transform of a genuine probability density on (0,S).
struct ValidityReport {
    enum class Verdict { valid, invalid, inconclusive };

    double min_value = 0.0;            // most negative fitted value
    double peak_value = 0.0;
    double normalization_defect = 0.0; // |mass - 1|
    double m1 = 0.0, m2 = 0.0, m3 = 0.0;
    Verdict verdict = Verdict::inconclusive;
    std::vector<std::string> reasons;

    bool valid() const { return verdict == Verdict::valid; }
    bool invalid() const { return verdict == Verdict::invalid; }

    std::string verdict_str() const {
        switch (verdict) {
            case Verdict::valid: return "valid";
            case Verdict::invalid: return "invalid";
            default: return "inconclusive";
        }
    }

    // flat key=value block
    std::string to_text() const {
        std::ostringstream os;
        os.precision(12);
        os << "verdict=" << verdict_str() << "\n"
           << "min_value=" << min_value << "\n"
           << "peak_value=" << peak_value << "\n"
           << "normalization_defect=" << normalization_defect << "\n"
           << "m1=" << m1 << "\n"
           << "m2=" << m2 << "\n"
           << "m3=" << m3 << "\n";
        os << "reasons=";
        for (std::size_t i = 0; i < reasons.size(); ++i)
            os << (i ? ";" : "") << reasons[i];
        os << "\n";
        return os.str();
    }
};

namespace detail {
// First three moments from central differences at 0 with one Richardson
// step. The transforms are entire near 0 for compact-support densities.
template <class G>
void moments_from_lt(G&& g, double h, double& m1, double& m2, double& m3) {
    auto d1 = [&](double hh) { return -(g(hh) - g(-hh)) / (2.0 * hh); };
    auto d2 = [&](double hh) { return (g(hh) - 2.0 * g(0.0) + g(-hh)) / (hh * hh); };
    auto d3 = [&](double hh) {
        return -(g(2.0 * hh) - 2.0 * g(hh) + 2.0 * g(-hh) - g(-2.0 * hh)) /
               (2.0 * hh * hh * hh);
    };
    m1 = (4.0 * d1(h / 2.0) - d1(h)) / 3.0;
    m2 = (4.0 * d2(h / 2.0) - d2(h)) / 3.0;
    m3 = (4.0 * d3(h / 2.0) - d3(h)) / 3.0;
}
} // namespace detail

// Decide whether ghat can be the transform of a density on (0,S).
// invalid: fitted negativity beyond 2% of peak, normalization off by more
// than 2%, or any of the first three moments outside its window (0, S^k).
// valid: all criteria pass with a 2x margin. Anything else: inconclusive.
template <class G>
ValidityReport check_density(G&& ghat, double S, const InversionConfig& cfg = {}) {
    ValidityReport rep;
    try {
        cfg.validate();
        auto fit = fit_density_from_lt(ghat, S, cfg.fit_degree);
        if (!fit.ok) {
            rep.reasons.push_back("density fit failed");
            rep.verdict = ValidityReport::Verdict::inconclusive;
            return rep;
        }
        const int n = 399;
        double mn = std::numeric_limits<double>::infinity();
        double mx = -mn;
        for (int i = 0; i < n; ++i) {
            const double u = S * (0.005 + 0.99 * i / (n - 1.0));
            const double v = fit(u);
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        rep.min_value = mn;
        rep.peak_value = mx;
        rep.normalization_defect = std::abs(fit.mass() - 1.0);
        detail::moments_from_lt(ghat, 1e-3, rep.m1, rep.m2, rep.m3);

        const bool finite = std::isfinite(mn) && std::isfinite(mx) &&
                            std::isfinite(rep.m1) && std::isfinite(rep.m2) &&
                            std::isfinite(rep.m3) && std::isfinite(rep.normalization_defect);
        if (!finite) {
            rep.reasons.push_back("non-finite diagnostics");
            rep.verdict = ValidityReport::Verdict::inconclusive;
            return rep;
        }

        const double scale = std::max(std::abs(mx), 1e-12);
        auto fmt = [](double v) {
            std::ostringstream os;
            os.precision(6);
            os << v;
            return os.str();
        };
        if (rep.min_value < -0.02 * scale)
            rep.reasons.push_back("negative density values (min " + fmt(rep.min_value) + ")");
        if (rep.normalization_defect > 0.02)
            rep.reasons.push_back("normalization defect " + fmt(rep.normalization_defect));
        const double mom[3] = {rep.m1, rep.m2, rep.m3};
        const double win[3] = {S, S * S, S * S * S};
        for (int k = 0; k < 3; ++k) {
            if (!(mom[k] > 0.0 && mom[k] < win[k]))
                rep.reasons.push_back("m" + std::to_string(k + 1) + "=" + fmt(mom[k]) +
                                      " outside (0," + fmt(win[k]) + ")");
        }
        if (!rep.reasons.empty()) {
            rep.verdict = ValidityReport::Verdict::invalid;
            return rep;
        }
        bool comfortable = rep.min_value >= -0.01 * scale &&
                           rep.normalization_defect <= 0.01;
        for (int k = 0; k < 3; ++k)
            comfortable = comfortable && mom[k] > 0.01 * win[k] && mom[k] < 0.99 * win[k];
        if (comfortable) {
            rep.verdict = ValidityReport::Verdict::valid;
        } else {
            rep.reasons.push_back("criteria met without the required margin");
            rep.verdict = ValidityReport::Verdict::inconclusive;
        }
        return rep;
    } catch (const std::exception& e) {
        rep.reasons.push_back(std::string("numerical failure: ") + e.what());
        rep.verdict = ValidityReport::Verdict::inconclusive;
        return rep;
    }
}

} // namespace fptlab
