#pragma once

// Test-only oracles: independent routes to the quantities the library
// computes in closed form. These stay deliberately dumb (quadrature,
// renewal identities, exact samplers) and must not share code with the
// implementation paths they check.

#include <cmath>
#include <functional>
#include <vector>

#include "fptlab/jump_density.hpp"
#include "fptlab/quadrature.hpp"
#include "fptlab/rng.hpp"

namespace oracles {

// Bilateral transform of a pdf on (0,S) by quadrature, split at S/2 so
// that piecewise densities (the triangular one has a kink there) still
// integrate to full accuracy.
inline double lt_by_quadrature(const std::function<double(double)>& pdf, double S,
                               double lambda) {
    auto f = [&](double u) { return std::exp(-lambda * u) * pdf(u); };
    return fptlab::integrate(f, 0.0, 0.5 * S, 1e-13) +
           fptlab::integrate(f, 0.5 * S, S, 1e-13);
}

// Transition density of drifted BM killed at 0.
inline double killed_kernel_time(double t, double x, double y, double mu) {
    const double a = y - mu * t - x;
    const double b = y - mu * t + x;
    return 1.0 / std::sqrt(2.0 * 3.14159265358979323846 * t) *
           (std::exp(-a * a / (2.0 * t)) -
            std::exp(-2.0 * mu * x) * std::exp(-b * b / (2.0 * t)));
}

// Laplace transform of the killed kernel by time quadrature on (0, T).
inline double killed_lt_by_quadrature(double lambda, double x, double y, double mu,
                                      double T = 50.0) {
    return fptlab::integrate(
        [&](double t) { return std::exp(-lambda * t) * killed_kernel_time(t, x, y, mu); },
        0.0, T, 1e-12);
}

// Density of the first hitting time of 0 from x > 0 under drift mu <= 0,
// and its transform by quadrature. Evaluated in log space so the t^{-3/2}
// prefactor cannot overflow before the Gaussian kills it.
inline double hitting_density_time(double t, double x, double mu) {
    if (!(t > 0.0)) return 0.0;
    const double z = x + mu * t;
    const double logf = std::log(x) -
                        0.5 * std::log(2.0 * 3.14159265358979323846) -
                        1.5 * std::log(t) - z * z / (2.0 * t);
    return logf < -700.0 ? 0.0 : std::exp(logf);
}

inline double hitting_lt_by_quadrature(double lambda, double x, double mu,
                                       double T = 200.0) {
    return fptlab::integrate(
        [&](double t) { return std::exp(-lambda * t) * hitting_density_time(t, x, mu); },
        0.0, T, 1e-12);
}

// Renewal-form FPT transform of the holding-and-jumping process started at
// 0 (initial holding included): phi = w<A>/(1 - w<B>), w = beta/(beta+lam),
// with the drifted two-barrier exit transforms
//   A(u) = e^{-mu(u-S)} sinh(u q)/sinh(S q),
//   B(u) = e^{-mu u} sinh((S-u) q)/sinh(S q),   q = sqrt(mu^2 + 2 lam).
// Independent of the resolvent algebra used by the implementation.
inline double renewal_forward_lt(double lambda, double S, double beta, double mu,
                                 const std::function<double(double)>& pdf) {
    const double q = std::sqrt(mu * mu + 2.0 * lambda);
    const double shS = std::sinh(S * q);
    const double A = fptlab::integrate(
        [&](double u) { return std::exp(-mu * (u - S)) * std::sinh(u * q) / shS * pdf(u); },
        0.0, S, 1e-13);
    const double B = fptlab::integrate(
        [&](double u) { return std::exp(-mu * u) * std::sinh((S - u) * q) / shS * pdf(u); },
        0.0, S, 1e-13);
    const double w = beta / (beta + lambda);
    return w * A / (1.0 - w * B);
}

// No-holding forward transform implied by the beta -> infinity inverse map:
// fhat = ghat(th)/(1 + e^{-S th} - ghat(th)), th = sqrt(2 lambda).
inline double no_hold_forward(double lambda, double S,
                              const std::function<double(double)>& ghat) {
    const double th = std::sqrt(2.0 * lambda);
    const double g = ghat(th);
    return g / (1.0 + std::exp(-S * th) - g);
}

// Exact draw of the one-sided BM first passage time over a gap a > 0:
// tau = a^2 / Z^2, Z standard normal.
inline double bm_first_passage_draw(fptlab::Rng& rng, double gap) {
    double z;
    do { z = rng.normal(); } while (z == 0.0);
    return gap * gap / (z * z);
}

// Exact two-sided KS statistic of sorted samples against a CDF.
inline double ks_stat_exact(const std::vector<double>& sorted,
                            const std::function<double(double)>& cdf) {
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double F = cdf(sorted[i]);
        d = std::max(d, std::max((i + 1) / n - F, F - i / n));
    }
    return d;
}

// Paper-example closed forms for the forward transform of the explicit
// symmetric-case family (the worked catalog): uniform, sine, parabolic
// (repaired display), triangular (S = 1).
inline double fhat_example_uniform(double lam, double S, double b) {
    const double th = std::sqrt(2.0 * lam);
    const double E = std::exp(-S * th);
    const double one_minus_E = -std::expm1(-S * th);
    return b * one_minus_E / (S * th * (lam + b * (1.0 + E)) - b * one_minus_E);
}

inline double fhat_example_sine(double lam, double S, double b) {
    const double pi = 3.14159265358979323846;
    const double E = std::exp(-S * std::sqrt(2.0 * lam));
    return b * pi * pi * (1.0 + E) /
           ((4.0 * lam * S * S + 2.0 * pi * pi) * (lam + b * (1.0 + E)) -
            b * pi * pi * (1.0 + E));
}

inline double fhat_example_parabolic(double lam, double S, double b) {
    const double th = std::sqrt(2.0 * lam);
    const double E = std::exp(-S * th);
    const double B = E * (S * th + 2.0) + S * th - 2.0;
    const double c = S * S * S * th * th * th;
    return 6.0 * B / (c * (1.0 + E) + c * lam / b - 6.0 * B);
}

inline double fhat_example_triangular(double lam, double b) {
    const double e = -std::expm1(-std::sqrt(lam / 2.0)); // 1 - e^{-sqrt(lam/2)}
    const double E = std::exp(-std::sqrt(2.0 * lam));
    return 2.0 * b * e * e / (lam * (lam + b * (1.0 + E)) - 2.0 * b * e * e);
}

// Analytic pdfs/cdfs of the catalog entries (independent expressions).
inline double uniform_cdf(double u, double S) { return std::min(std::max(u / S, 0.0), 1.0); }
inline double sine_cdf(double u, double S) {
    const double pi = 3.14159265358979323846;
    if (u <= 0) return 0.0;
    if (u >= S) return 1.0;
    return 0.5 * (1.0 - std::cos(pi * u / S));
}
inline double parabolic_cdf(double u, double S) {
    if (u <= 0) return 0.0;
    if (u >= S) return 1.0;
    return u * u * (3.0 * S - 2.0 * u) / (S * S * S);
}
inline double triangular_cdf(double u) {
    if (u <= 0) return 0.0;
    if (u >= 1) return 1.0;
    return u <= 0.5 ? 2.0 * u * u : 1.0 - 2.0 * (1.0 - u) * (1.0 - u);
}

} // namespace oracles
