#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jump_density.hpp"
#include "params.hpp"
#include "quadrature.hpp"

namespace fptlab {

// Reduction of diffusions conjugate to Brownian motion: an increasing map
// v with v(0) = 0 such that X(t) = v^{-1}(B_t + v(x)). First passages map
// to BM first passages over v(S); jump densities transport by
// g(x) = q(v(x)) v'(x).

struct VariableChange {
    std::function<double(double)> v;
    std::function<double(double)> v_inv;
    std::function<double(double)> v_prime;
    double domain_hi = std::numeric_limits<double>::infinity(); // J = [0, domain_hi]
    std::string label;
};

inline VariableChange identity_change() {
    VariableChange vc;
    vc.v = [](double z) { return z; };
    vc.v_inv = [](double y) { return y; };
    vc.v_prime = [](double) { return 1.0; };
    vc.label = "identity";
    return vc;
}

// v(z) = 2 sqrt(z): the change for diffusion coefficient sigma(r) = sqrt(r).
inline VariableChange sqrt_diffusion_change() {
    VariableChange vc;
    vc.v = [](double z) { return 2.0 * std::sqrt(z); };
    vc.v_inv = [](double y) { return 0.25 * y * y; };
    vc.v_prime = [](double z) { return 1.0 / std::sqrt(z); };
    vc.label = "2*sqrt(z)";
    return vc;
}

inline VariableChange change_from_functions(std::function<double(double)> v,
                                            std::function<double(double)> v_inv,
                                            std::function<double(double)> v_prime,
                                            std::string label,
                                            double domain_hi = std::numeric_limits<double>::infinity()) {
    VariableChange vc;
    vc.v = std::move(v);
    vc.v_inv = std::move(v_inv);
    vc.v_prime = std::move(v_prime);
    vc.domain_hi = domain_hi;
    vc.label = std::move(label);
    return vc;
}

// Build v(z) = integral_0^z dr/sigma(r) from a tabulated sigma. sigma is
// interpolated linearly between nodes (segment integrals are closed-form);
// below the first node a power law sigma(r) ~ sigma_0 (r/r_0)^p fitted to
// the first two nodes supplies the head integral, which must converge
// (p < 1), otherwise the change does not exist and a domain_error is thrown.
inline VariableChange change_from_sigma_table(std::vector<double> r,
                                              std::vector<double> sg) {
    if (r.size() != sg.size() || r.size() < 3)
        throw std::invalid_argument("change_from_sigma_table: need >= 3 (r,sigma) rows");
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!(sg[i] > 0.0))
            throw std::invalid_argument("change_from_sigma_table: sigma must be > 0");
        if (!(r[i] > 0.0) || (i && !(r[i] > r[i - 1])))
            throw std::invalid_argument("change_from_sigma_table: r must be positive, strictly increasing");
    }
    const double p = std::log(sg[1] / sg[0]) / std::log(r[1] / r[0]);
    if (!(p < 1.0))
        throw std::domain_error("change_from_sigma_table: integral of 1/sigma "
                                "diverges at 0 (fitted exponent " + std::to_string(p) + ")");
    const double head = r[0] / (sg[0] * (1.0 - p)); // integral_0^{r0} (r/r0)^{-p}/sigma0
    const double r0 = r[0], s0 = sg[0];

    // cumulative integral of 1/sigma at the nodes
    const std::size_t n = r.size();
    std::vector<double> cum(n);
    cum[0] = head;
    for (std::size_t i = 1; i < n; ++i) {
        const double dr = r[i] - r[i - 1];
        const double ds = sg[i] - sg[i - 1];
        cum[i] = cum[i - 1] + (std::abs(ds) < 1e-14 * sg[i]
                                   ? dr / sg[i - 1]
                                   : dr * std::log(sg[i] / sg[i - 1]) / ds);
    }

    auto sigma_at = [r, sg, r0, s0, p](double z) {
        if (z <= r0) return s0 * std::pow(z / r0, p);
        auto it = std::upper_bound(r.begin(), r.end(), z);
        if (it == r.end()) return sg.back();
        const std::size_t i = static_cast<std::size_t>(it - r.begin());
        const double w = (z - r[i - 1]) / (r[i] - r[i - 1]);
        return sg[i - 1] + w * (sg[i] - sg[i - 1]);
    };

    auto v = [r, sg, cum, r0, s0, p, head](double z) {
        if (!(z >= 0.0)) throw std::domain_error("variable change: z must be >= 0");
        if (z == 0.0) return 0.0;
        if (z <= r0) return head * std::pow(z / r0, 1.0 - p);
        auto it = std::upper_bound(r.begin(), r.end(), z);
        const std::size_t i = std::min<std::size_t>(
            static_cast<std::size_t>(it - r.begin()), r.size() - 1);
        const double dr = z - r[i - 1];
        const double slope = (sg[i] - sg[i - 1]) / (r[i] - r[i - 1]);
        const double siz = sg[i - 1] + slope * dr;
        const double seg = std::abs(slope) < 1e-14
                               ? dr / sg[i - 1]
                               : std::log(siz / sg[i - 1]) / slope;
        return cum[i - 1] + seg;
    };

    const double vmax = v(r.back());
    auto v_inv = [v, rback = r.back(), vmax](double y) {
        if (!(y >= 0.0 && y <= vmax))
            throw std::domain_error("variable change: value outside v(J)");
        double lo = 0.0, hi = rback;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (v(mid) < y ? lo : hi) = mid;
            if (hi - lo < 1e-15 * std::max(1.0, hi)) break;
        }
        return 0.5 * (lo + hi);
    };

    VariableChange vc;
    vc.v = v;
    vc.v_inv = v_inv;
    vc.v_prime = [sigma_at](double z) { return 1.0 / sigma_at(z); };
    vc.domain_hi = r.back();
    vc.label = "sigma-table";
    return vc;
}

struct ReducedProblem {
    double barrier = 1.0;  // v(S)
    double start = 0.0;    // v(x)
    double drift = 0.0;
    std::function<double(double)> time_map = [](double t) { return t; };
};

inline ReducedProblem reduce_problem(const VariableChange& vc, double S, double x) {
    if (!(S > 0.0) || !(x >= 0.0 && x < S))
        throw std::domain_error("reduce_problem: need 0 <= x < S, S > 0");
    if (!(S <= vc.domain_hi))
        throw std::domain_error("reduce_problem: S outside the domain of the change");
    ReducedProblem rp;
    rp.barrier = vc.v(S);
    rp.start = vc.v(x);
    rp.drift = 0.0;
    if (!(rp.barrier > rp.start))
        throw std::domain_error("reduce_problem: barrier must exceed start");
    return rp;
}

// Transport a density q on (0, v(S)) back to (0,S): g(x) = q(v(x)) v'(x).
// Sampling is exact (draw y ~ q, return v^{-1}(y)); the cdf is Q(v(x)).
// Normalization is re-verified by quadrature in x (the transported pdf may
// be endpoint-singular when v' is unbounded, which tanh-sinh tolerates).
inline JumpDensity transport_density(const JumpDensity& q, const VariableChange& vc,
                                     double S) {
    if (!(S > 0.0)) throw std::domain_error("transport_density: S must be > 0");
    const double vS = vc.v(S);
    if (std::abs(vS - q.support) > 1e-9 * std::max(1.0, q.support))
        throw std::invalid_argument("transport_density: q must live on (0, v(S))");

    auto v = vc.v;
    auto v_inv = vc.v_inv;
    auto v_prime = vc.v_prime;
    auto qpdf = q.pdf;
    auto qcdf = q.cdf;
    auto qlt = q.lt;
    auto qsampler = q.sampler;

    JumpDensity d;
    d.support = S;
    d.symmetric = false;
    d.name = q.name + "<-" + vc.label;
    d.pdf = [qpdf, v, v_prime, S](double x) {
        if (!(x > 0.0 && x < S)) return 0.0;
        return qpdf(v(x)) * v_prime(x);
    };
    d.cdf = [qcdf, v, S](double x) {
        if (x <= 0.0) return 0.0;
        if (x >= S) return 1.0;
        return qcdf(v(x));
    };
    // bilateral transform by quadrature in the flat coordinate:
    // integral e^{-lam x} g(x) dx = integral e^{-lam v^{-1}(y)} q(y) dy
    d.lt = [qpdf, v_inv, vS](double lam) {
        return integrate(
            [&](double y) { return std::exp(-lam * v_inv(y)) * qpdf(y); }, 0.0,
            vS, 1e-11);
    };
    d.sampler = [qsampler, v_inv](Rng& r) { return v_inv(qsampler(r)); };

    const double mass = integrate(d.pdf, 0.0, S, 1e-10);
    if (std::abs(mass - 1.0) > 1e-6)
        throw std::runtime_error("transport_density: transported pdf integrates to " +
                                 std::to_string(mass) + " (quadrature check failed)");
    return d;
}

// Deterministic clock for the mean-reverting (OU) reduction:
//   rho(t)     = sigma^2/(2 mu) (e^{2 mu t} - 1)
//   rho_inv(u) = log(1 + 2 mu u / sigma^2) / (2 mu)
struct OuTimeChange {
    double mu = 1.0;
    double sigma = 1.0;

    OuTimeChange(double mu_, double sigma_) : mu(mu_), sigma(sigma_) {
        if (!(mu > 0.0 && sigma > 0.0))
            throw std::domain_error("OuTimeChange: mu and sigma must be > 0");
    }
    double rho(double t) const {
        return sigma * sigma / (2.0 * mu) * std::expm1(2.0 * mu * t);
    }
    double rho_inv(double u) const {
        return std::log1p(2.0 * mu * u / (sigma * sigma)) / (2.0 * mu);
    }
};

// Compose a tabulated CDF in the flat clock with the time change:
// G(t) = F(rho(t)). Nondecreasing by construction, endpoints preserved.
inline std::vector<double> map_fpt_distribution(const std::vector<double>& u_grid,
                                                const std::vector<double>& F,
                                                const OuTimeChange& tc,
                                                const std::vector<double>& t_grid) {
    if (u_grid.size() != F.size() || u_grid.size() < 2)
        throw std::invalid_argument("map_fpt_distribution: bad CDF table");
    for (std::size_t i = 1; i < F.size(); ++i)
        if (F[i] < F[i - 1] - 1e-12)
            throw std::invalid_argument("map_fpt_distribution: CDF must be nondecreasing");
    auto interp = [&](double u) {
        if (u <= u_grid.front()) return F.front();
        if (u >= u_grid.back()) return F.back();
        const auto it = std::upper_bound(u_grid.begin(), u_grid.end(), u);
        const std::size_t i = static_cast<std::size_t>(it - u_grid.begin());
        const double w = (u - u_grid[i - 1]) / (u_grid[i] - u_grid[i - 1]);
        return F[i - 1] + w * (F[i] - F[i - 1]);
    };
    std::vector<double> out(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        out[i] = std::clamp(interp(tc.rho(t_grid[i])), 0.0, 1.0);
    return out;
}

// Direct Euler+bridge first-passage sampler for the mean-reverting
// diffusion dX = -mu X dt + sigma dB started at x0, over the decaying
// barrier S0 e^{-mu t}. Companion to the time-change identity
// tau = rho_inv(tau_BM over S0): both sides can be simulated and compared.
inline std::vector<double> simulate_ou_fpt_samples(double mu, double sigma,
                                                   double x0, double S0,
                                                   std::size_t n, double dt,
                                                   std::uint64_t seed) {
    if (!(mu > 0.0 && sigma > 0.0 && S0 > x0))
        throw std::domain_error("simulate_ou_fpt_samples: need mu, sigma > 0, S0 > x0");
    std::vector<double> out(n);
    const double sdt = sigma * std::sqrt(dt);
    const double var_dt = sigma * sigma * dt;
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng(seed, i);
        double t = 0.0, x = x0;
        for (;;) {
            const double b0 = S0 * std::exp(-mu * t);
            const double xn = x - mu * x * dt + sdt * rng.normal();
            t += dt;
            const double b1 = S0 * std::exp(-mu * t);
            if (xn >= b1) break;
            const double a = (b0 - x) * (b1 - xn);
            if (a < 22.0 * var_dt && rng.u01() < std::exp(-2.0 * a / var_dt)) break;
            x = xn;
        }
        out[i] = t;
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Geometric BM problem rewriter: dX = r X dt + sigma X dB over the moving
// barrier e^{sigma S + mu' t} reduces to drifted BM with drift
// (r - sigma^2/2 - mu')/sigma from log(x)/sigma over the constant barrier S.
inline ReducedProblem gbm_reduce(double x0, double r, double sigma,
                                 double mu_prime, double S) {
    if (!(x0 > 0.0) || !(sigma > 0.0))
        throw std::domain_error("gbm_reduce: need x0 > 0, sigma > 0");
    ReducedProblem rp;
    rp.barrier = S;
    rp.start = std::log(x0) / sigma;
    rp.drift = (r - 0.5 * sigma * sigma - mu_prime) / sigma;
    if (!(rp.barrier > rp.start))
        throw std::domain_error("gbm_reduce: barrier must exceed start");
    return rp;
}

} // namespace fptlab
