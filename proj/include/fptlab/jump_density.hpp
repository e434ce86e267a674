#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "csv.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

namespace fptlab {

// I_k(lambda) = integral_{-1}^{1} e^{-lambda x} x^k dx.
//
// Evaluated by the power series sum_{m+k even} 2 (-lambda)^m / (m! (m+k+1)),
// whose terms all carry the sign (-1)^k, so there is no cancellation for
// any lambda. The textbook forward recursion
//   I_k = ((-1)^k e^l - e^{-l})/l + (k/l) I_{k-1}
// amplifies rounding error by k!/lambda^k and is useless in doubles for
// k >> lambda; it is kept as a tested identity, not as the evaluation path.
inline double ik_integral(int k, double lambda) {
    if (k < 0) throw std::domain_error("ik_integral: k must be >= 0");
    double sum = 0.0;
    double term = 1.0; // (-lambda)^m / m!
    for (int m = 0; m <= 700; ++m) {
        if ((m + k) % 2 == 0) {
            const double add = term * 2.0 / (m + k + 1);
            sum += add;
            if (m > 2 && std::abs(add) <= 1e-18 * std::abs(sum) + 1e-300) break;
        }
        term *= -lambda / (m + 1);
    }
    return sum;
}

// A jump distribution on (0,S): pointwise pdf/cdf, bilateral Laplace
// transform (finite for all real lambda since the support is compact),
// and an exact sampler drawing from a caller-supplied stream.
struct JumpDensity {
    double support = 1.0; // S
    bool symmetric = false;
    std::string name;
    std::function<double(double)> pdf;
    std::function<double(double)> cdf;
    std::function<double(double)> lt;       // two-sided, any real argument
    std::function<double(Rng&)> sampler;

    double sample(Rng& rng) const { return sampler(rng); }
};

namespace detail {

// (1 - e^{-z})/z with the removable singularity handled.
inline double one_minus_exp_over(double z) {
    if (std::abs(z) < 1e-4)
        return 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0;
    return -std::expm1(-z) / z;
}

// 6 [e^{-z}(z+2) + z - 2] / z^3 as a series for small |z|:
// sum_j 6 (-1)^j (j+1) z^j / (j+3)!.
inline double parabolic_lt_scalar(double z) {
    if (std::abs(z) <= 1.0) {
        double sum = 0.0;
        double zj = 1.0;     // z^j
        double fct = 6.0;    // (j+3)!
        for (int j = 0; j <= 40; ++j) {
            const double add = 6.0 * ((j % 2) ? -1.0 : 1.0) * (j + 1) * zj / fct;
            sum += add;
            if (j > 3 && std::abs(add) <= 1e-18 * std::abs(sum)) break;
            zj *= z;
            fct *= (j + 4);
        }
        return sum;
    }
    return 6.0 / (z * z * z) * (std::exp(-z) * (z + 2.0) + z - 2.0);
}

} // namespace detail

// Uniform density on (0,S): ghat(lambda) = (1 - e^{-S lambda})/(S lambda).
inline JumpDensity uniform_density(double S) {
    if (!(S > 0)) throw std::domain_error("uniform_density: S must be > 0");
    JumpDensity d;
    d.support = S;
    d.symmetric = true;
    d.name = "uniform";
    d.pdf = [S](double u) { return (u > 0.0 && u < S) ? 1.0 / S : 0.0; };
    d.cdf = [S](double u) { return std::clamp(u / S, 0.0, 1.0); };
    d.lt = [S](double lam) { return detail::one_minus_exp_over(S * lam); };
    d.sampler = [S](Rng& r) { return S * r.u01(); };
    return d;
}

// Sine density (pi/2S) sin(pi u/S):
// ghat(lambda) = (pi^2/2)(1 + e^{-lambda S}) / (lambda^2 S^2 + pi^2).
inline JumpDensity sine_density(double S) {
    if (!(S > 0)) throw std::domain_error("sine_density: S must be > 0");
    const double pi = 3.14159265358979323846;
    JumpDensity d;
    d.support = S;
    d.symmetric = true;
    d.name = "sine";
    d.pdf = [S, pi](double u) {
        return (u > 0.0 && u < S) ? (pi / (2.0 * S)) * std::sin(pi * u / S) : 0.0;
    };
    d.cdf = [S, pi](double u) {
        if (u <= 0) return 0.0;
        if (u >= S) return 1.0;
        return 0.5 * (1.0 - std::cos(pi * u / S));
    };
    d.lt = [S, pi](double lam) {
        return (pi * pi / 2.0) * (1.0 + std::exp(-lam * S)) /
               (lam * lam * S * S + pi * pi);
    };
    // closed-form inverse CDF
    d.sampler = [S, pi](Rng& r) {
        return (S / pi) * std::acos(1.0 - 2.0 * r.u01());
    };
    return d;
}

// Parabolic (Beta-type) density 6 u (S-u)/S^3:
// ghat(lambda) = 6 [e^{-S lambda}(S lambda + 2) + S lambda - 2] / (S lambda)^3.
inline JumpDensity parabolic_density(double S) {
    if (!(S > 0)) throw std::domain_error("parabolic_density: S must be > 0");
    JumpDensity d;
    d.support = S;
    d.symmetric = true;
    d.name = "parabolic";
    d.pdf = [S](double u) {
        return (u > 0.0 && u < S) ? 6.0 * u * (S - u) / (S * S * S) : 0.0;
    };
    d.cdf = [S](double u) {
        if (u <= 0) return 0.0;
        if (u >= S) return 1.0;
        return u * u * (3.0 * S - 2.0 * u) / (S * S * S);
    };
    d.lt = [S](double lam) { return detail::parabolic_lt_scalar(S * lam); };
    // rejection against the uniform envelope, acceptance rate 2/3
    d.sampler = [S](Rng& r) {
        const double peak = 1.5 / S;
        for (;;) {
            const double u = S * r.u01();
            if (r.u01() * peak <= 6.0 * u * (S - u) / (S * S * S)) return u;
        }
    };
    return d;
}

// Triangular density on (0,1): 4u on (0,1/2], 4(1-u) on (1/2,1);
// ghat(lambda) = (4/lambda^2)(1 - e^{-lambda/2})^2.
inline JumpDensity triangular_density() {
    JumpDensity d;
    d.support = 1.0;
    d.symmetric = true;
    d.name = "triangular";
    d.pdf = [](double u) {
        if (u <= 0.0 || u >= 1.0) return 0.0;
        return u <= 0.5 ? 4.0 * u : 4.0 * (1.0 - u);
    };
    d.cdf = [](double u) {
        if (u <= 0) return 0.0;
        if (u >= 1) return 1.0;
        return u <= 0.5 ? 2.0 * u * u : 1.0 - 2.0 * (1.0 - u) * (1.0 - u);
    };
    d.lt = [](double lam) {
        if (std::abs(lam) < 1e-8) return 1.0 - lam / 2.0 + 7.0 * lam * lam / 48.0;
        const double e = -std::expm1(-lam / 2.0); // 1 - e^{-lam/2}, exact
        return 4.0 * e * e / (lam * lam);
    };
    d.sampler = [](Rng& r) {
        const double p = r.u01();
        return p <= 0.5 ? std::sqrt(p / 2.0) : 1.0 - std::sqrt((1.0 - p) / 2.0);
    };
    return d;
}

// Polynomial family on (0,1):
//   g_{2k}(u) = (1 + 1/(2k)) (1 - (2u-1)^{2k}),  k >= 1.
// Bilateral transform, with z = lambda/2:
//   ghat(lambda) = (1 + 1/(2k)) e^{-z} (1/2) [I_0(z) - I_{2k}(z)],
// computed as a single positive-term series in z (no cancellation,
// removable singularity included). k = 0 would make the normalizing
// factor undefined, so it is rejected.
inline double g2k_lt_value(int k, double lambda) {
    const double z = 0.5 * lambda;
    double sum = 0.0;
    double term = 1.0; // z^m/m!
    for (int m = 0; m <= 700; ++m) {
        if (m % 2 == 0) {
            const double add = term * 2.0 * (1.0 / (m + 1) - 1.0 / (m + 2 * k + 1));
            sum += add;
            if (m > 2 && std::abs(add) <= 1e-18 * std::abs(sum) + 1e-300) break;
        }
        term *= z / (m + 1);
    }
    return (1.0 + 0.5 / k) * std::exp(-z) * 0.5 * sum;
}

inline JumpDensity g2k_density(int k) {
    if (k < 1)
        throw std::domain_error("g2k_density: k must be >= 1 "
                                "(the normalizing factor is undefined at k = 0)");
    JumpDensity d;
    d.support = 1.0;
    d.symmetric = true;
    d.name = "g2k:" + std::to_string(k);
    const double c = 1.0 + 0.5 / k;
    d.pdf = [k, c](double u) {
        if (u <= 0.0 || u >= 1.0) return 0.0;
        return c * (1.0 - std::pow(2.0 * u - 1.0, 2 * k));
    };
    d.cdf = [k, c](double u) {
        if (u <= 0) return 0.0;
        if (u >= 1) return 1.0;
        const double w = 2.0 * u - 1.0;
        return c * (u - (std::pow(w, 2 * k + 1) + 1.0) / (2.0 * (2 * k + 1)));
    };
    d.lt = [k](double lam) { return g2k_lt_value(k, lam); };
    d.sampler = [k, c](Rng& r) {
        for (;;) {
            const double u = r.u01();
            if (r.u01() * c <= c * (1.0 - std::pow(2.0 * u - 1.0, 2 * k)))
                return u;
        }
    };
    return d;
}

// Density registered from tabulated (u, pdf) pairs. The pdf is linearly
// interpolated; the transform is evaluated by trapezoid on the table, so
// its accuracy degrades with table resolution (roughly O(h^2)).
inline JumpDensity tabulated_density(std::vector<double> us,
                                     std::vector<double> ps, double S) {
    if (us.size() != ps.size() || us.size() < 3)
        throw std::invalid_argument("tabulated_density: need >= 3 (u,pdf) pairs");
    if (!(S > 0)) throw std::domain_error("tabulated_density: S must be > 0");
    for (std::size_t i = 0; i < us.size(); ++i) {
        if (i && !(us[i] > us[i - 1]))
            throw std::invalid_argument("tabulated_density: u must be strictly increasing");
        if (!(us[i] > 0.0 && us[i] < S))
            throw std::invalid_argument("tabulated_density: u must lie in (0,S)");
        if (!(ps[i] >= 0.0))
            throw std::invalid_argument("tabulated_density: pdf must be >= 0");
    }
    const double mass = trapezoid(us.data(), ps.data(), us.size());
    if (std::abs(mass - 1.0) > 1e-3)
        throw std::invalid_argument("tabulated_density: pdf integrates to " +
                                    std::to_string(mass) + ", expected 1 within 1e-3");
    for (auto& p : ps) p /= mass; // renormalize the residual defect

    auto n = us.size();
    // cumulative trapezoid for the cdf / inverse-cdf sampler
    std::vector<double> cum(n, 0.0);
    for (std::size_t i = 1; i < n; ++i)
        cum[i] = cum[i - 1] + 0.5 * (ps[i] + ps[i - 1]) * (us[i] - us[i - 1]);
    const double total = cum.back();
    for (auto& c : cum) c /= total;

    auto interp = [](const std::vector<double>& xs, const std::vector<double>& ys,
                     double x) {
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        if (it == xs.begin() || it == xs.end()) return 0.0;
        const std::size_t i = static_cast<std::size_t>(it - xs.begin());
        const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return ys[i - 1] + w * (ys[i] - ys[i - 1]);
    };

    // detect symmetry about S/2 on a mirror grid
    bool sym = true;
    for (int i = 0; i <= 20 && sym; ++i) {
        const double u = S * (0.05 + 0.9 * i / 20.0);
        if (std::abs(interp(us, ps, u) - interp(us, ps, S - u)) > 1e-8) sym = false;
    }

    JumpDensity d;
    d.support = S;
    d.symmetric = sym;
    d.name = "tabulated";
    d.pdf = [us, ps, interp](double u) { return interp(us, ps, u); };
    d.cdf = [us, cum, interp, S](double u) {
        if (u <= us.front()) return 0.0;
        if (u >= us.back()) return 1.0;
        return interp(us, cum, u);
    };
    d.lt = [us, ps](double lam) {
        std::vector<double> w(us.size());
        for (std::size_t i = 0; i < us.size(); ++i)
            w[i] = std::exp(-lam * us[i]) * ps[i];
        return trapezoid(us.data(), w.data(), us.size());
    };
    d.sampler = [us, cum](Rng& r) {
        const double p = r.u01();
        auto it = std::upper_bound(cum.begin(), cum.end(), p);
        if (it == cum.begin()) return us.front();
        if (it == cum.end()) return us.back();
        const std::size_t i = static_cast<std::size_t>(it - cum.begin());
        const double w = (p - cum[i - 1]) / (cum[i] - cum[i - 1]);
        return us[i - 1] + w * (us[i] - us[i - 1]);
    };
    return d;
}

// Two-column CSV (u, pdf), header optional, u strictly increasing in (0,S).
inline JumpDensity tabulated_density_csv(const std::string& path, double S) {
    CsvTable t = read_csv(path);
    if (t.columns.size() < 2)
        throw std::invalid_argument(path + ": expected two columns (u, pdf)");
    return tabulated_density(t.columns[0], t.columns[1], S);
}

} // namespace fptlab
