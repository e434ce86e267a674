#pragma once

#include <cmath>
#include <stdexcept>

#include "jump_density.hpp"
#include "params.hpp"
#include "transform.hpp"

namespace fptlab {

// Closed-form Laplace kernels for drifted Brownian motion killed at 0 and
// the forward/inverse maps between the jump density and the FPT law of the
// process with holding-and-jumping boundary at 0.
//
// Two forward routes coexist and do not coincide:
//
//  * forward_fpt_lt       -- the resolvent ratio phat(.,0,S)/phat(.,S,S).
//    This is the transform of the realized first-passage time of the
//    constructed process (initial holding at x=0 included). It matches an
//    independent renewal-form oracle and Monte Carlo for all mu <= 0.
//
//  * forward_fpt_lt_sym0  -- the explicit symmetric-density closed form
//    (mu = 0), beta*g/(lambda + beta(1+e^{-S sqrt(2 lambda)}) - beta*g).
//    The catalog of worked closed-form examples, the inverse map
//    inverse_g_lt and mean_fpt are all algebraically consistent with this
//    family. It differs from the resolvent ratio by a lambda*e^{-S theta}
//    term in the denominator; the cross-formula test suite documents the
//    gap. Its derivative at 0 corresponds to the FPT clock starting at the
//    first jump when x = 0, which is also the simulator's convention.

// Laplace transform of the transition density of drifted BM killed at 0,
// evaluated at y > 0. Zero when x = 0 (absorbed start).
inline double killed_transition_lt(double lambda, double x, double y, double mu) {
    if (!(lambda > 0.0)) throw std::domain_error("killed_transition_lt: lambda must be > 0");
    if (!(x >= 0.0) || !(y > 0.0))
        throw std::domain_error("killed_transition_lt: need x >= 0, y > 0");
    const double q = std::sqrt(2.0 * lambda + mu * mu);
    return std::exp(mu * (y - x)) / q *
           (std::exp(-std::abs(y - x) * q) - std::exp(-(y + x) * q));
}

// E[e^{-lambda T_0}] for drifted BM started at x >= 0, drift mu <= 0.
inline double hitting_time_lt_to_zero(double lambda, double x, double mu) {
    if (!(lambda > 0.0)) throw std::domain_error("hitting_time_lt_to_zero: lambda must be > 0");
    if (!(x >= 0.0)) throw std::domain_error("hitting_time_lt_to_zero: need x >= 0");
    if (!(mu <= 0.0)) throw std::domain_error("hitting_time_lt_to_zero: need mu <= 0");
    return std::exp(-x * (std::sqrt(mu * mu + 2.0 * lambda) + mu));
}

namespace detail {
template <class G>
struct PhatParts {
    double q, D0, dghat, ES; // q = sqrt(2 lambda + mu^2)
};

// Shared pieces of the resolvent formulas. The bilateral transform enters
// at the drift-shifted points mu -/+ q; the holding denominator is
// lambda + beta (1 - ghat(q + mu)) and must stay positive for a genuine
// density input.
template <class G>
PhatParts<G> phat_parts(double lambda, const DriftParams& p, G&& ghat) {
    if (!(lambda > 0.0)) throw std::domain_error("phat: lambda must be > 0");
    p.validate(true);
    PhatParts<G> c{};
    c.q = std::sqrt(2.0 * lambda + p.mu * p.mu);
    const double gp = ghat(p.mu + c.q);
    c.D0 = lambda + p.beta * (1.0 - gp);
    if (!(c.D0 > 0.0))
        throw std::domain_error("phat: nonpositive holding denominator "
                                "(transform input exceeds 1 where it must not)");
    c.dghat = ghat(p.mu - c.q) - ghat(p.mu + c.q);
    c.ES = std::exp(-p.S * (c.q - p.mu));
    return c;
}
} // namespace detail

// Resolvent transform phat(lambda, 0, S) of the holding-and-jumping process.
template <class G>
double phat_0S(double lambda, const DriftParams& p, G&& ghat) {
    const auto c = detail::phat_parts(lambda, p, ghat);
    return (p.beta / c.q) * c.ES * c.dghat / c.D0;
}

// Resolvent transform phat(lambda, S, S); strictly positive.
template <class G>
double phat_SS(double lambda, const DriftParams& p, G&& ghat) {
    const auto c = detail::phat_parts(lambda, p, ghat);
    const double e2 = std::exp(-2.0 * p.S * c.q);
    return -std::expm1(-2.0 * p.S * c.q) / c.q +
           (p.beta / c.q) * e2 * c.dghat / c.D0;
}

// FPT transform of the process started at x = 0 as the resolvent ratio.
// Normalizes to 1 as lambda -> 0+ for every mu <= 0.
template <class G>
double forward_fpt_lt(double lambda, const DriftParams& p, G&& ghat) {
    if (p.x != 0.0) throw std::domain_error("forward_fpt_lt: requires x = 0");
    const auto c = detail::phat_parts(lambda, p, ghat);
    const double e2 = std::exp(-2.0 * p.S * c.q);
    const double num = p.beta * c.ES * c.dghat / c.D0;
    const double den = -std::expm1(-2.0 * p.S * c.q) + p.beta * e2 * c.dghat / c.D0;
    return num / den;
}

// Same law with the initial holding period removed (the FPT clock starts
// at the first jump); this is what the simulator realizes for x = 0.
template <class G>
double forward_fpt_lt_no_initial_hold(double lambda, const DriftParams& p, G&& ghat) {
    return (p.beta + lambda) / p.beta * forward_fpt_lt(lambda, p, ghat);
}

// Explicit symmetric-density closed form at mu = 0:
//   fhat0(lambda) = beta ghat(sqrt(2 lambda)) /
//                   (lambda + beta (1 + e^{-S sqrt(2 lambda)}) - beta ghat).
template <class G>
double forward_fpt_lt_sym0(double lambda, double S, double beta, G&& ghat) {
    if (!(lambda > 0.0)) throw std::domain_error("forward_fpt_lt_sym0: lambda must be > 0");
    if (!(S > 0.0 && beta > 0.0))
        throw std::domain_error("forward_fpt_lt_sym0: need S > 0, beta > 0");
    const double th = std::sqrt(2.0 * lambda);
    const double g = ghat(th);
    const double den = lambda + beta * (1.0 + std::exp(-S * th)) - beta * g;
    if (!(den > 0.0))
        throw std::domain_error("forward_fpt_lt_sym0: nonpositive denominator");
    return beta * g / den;
}

// Inverse map: candidate bilateral transform of a density symmetric about
// S/2 recovered from an FPT transform fhat0. Validity is not guaranteed and
// must be checked (see laplace_inversion::check_density).
template <class F>
double inverse_g_lt(double lambda, F&& fhat0, double S, double beta) {
    if (!(lambda > 0.0)) throw std::domain_error("inverse_g_lt: lambda must be > 0");
    const double f = fhat0(lambda * lambda / 2.0);
    return f * (lambda * lambda / 2.0 + beta * (1.0 + std::exp(-S * lambda))) /
           (beta * (1.0 + f));
}

// beta -> infinity specialization (no holding at the boundary).
template <class F>
double inverse_g_lt_nohold(double lambda, F&& fhat0, double S) {
    if (!(lambda > 0.0)) throw std::domain_error("inverse_g_lt_nohold: lambda must be > 0");
    const double f = fhat0(lambda * lambda / 2.0);
    return f * (1.0 + std::exp(-S * lambda)) / (1.0 + f);
}

// Mean FPT of the symmetric-form family: 1/beta + S^2 - 2 E(U^2).
inline double mean_fpt(double beta, double second_moment_U, double S) {
    if (!(beta > 0.0)) throw std::domain_error("mean_fpt: beta must be > 0");
    if (!(second_moment_U > 0.0 && second_moment_U < S * S))
        throw std::domain_error("mean_fpt: second moment must lie in (0, S^2)");
    return 1.0 / beta + S * S - 2.0 * second_moment_U;
}

// Convenience TransformFn wrappers.
inline TransformFn forward_transform_sym0(const JumpDensity& d, double beta) {
    const double S = d.support;
    auto lt = d.lt;
    return make_transform(
        [S, beta, lt](double lam) {
            return forward_fpt_lt_sym0(lam, S, beta, lt);
        },
        "fhat0[" + d.name + "]");
}

inline TransformFn forward_transform_ratio(const JumpDensity& d, double beta,
                                           double mu = 0.0) {
    DriftParams p;
    p.S = d.support;
    p.beta = beta;
    p.mu = mu;
    p.x = 0.0;
    auto lt = d.lt;
    return make_transform(
        [p, lt](double lam) { return forward_fpt_lt(lam, p, lt); },
        "fhat_ratio[" + d.name + "]");
}

inline TransformFn forward_transform_no_initial_hold(const JumpDensity& d,
                                                     double beta, double mu = 0.0) {
    DriftParams p;
    p.S = d.support;
    p.beta = beta;
    p.mu = mu;
    p.x = 0.0;
    auto lt = d.lt;
    return make_transform(
        [p, lt](double lam) { return forward_fpt_lt_no_initial_hold(lam, p, lt); },
        "fhat_sim[" + d.name + "]");
}

// Candidate inverse transform as a TransformFn on the whole line (the
// formula is even in lambda up to the explicit factors, and evaluable for
// lambda < 0 as required by the density-fit inversion).
template <class F>
TransformFn inverse_transform(F fhat0, double S, double beta, std::string label) {
    return make_transform(
        [fhat0, S, beta](double lam) {
            if (lam == 0.0) return 1.0;
            const double a = std::abs(lam);
            const double g = inverse_g_lt(a, fhat0, S, beta);
            if (lam > 0) return g;
            // bilateral evaluation of the symmetric candidate: the
            // recovered family satisfies g(-a) = e^{S a} g(a)
            return std::exp(S * a) * g;
        },
        std::move(label), -std::numeric_limits<double>::infinity());
}

} // namespace fptlab
