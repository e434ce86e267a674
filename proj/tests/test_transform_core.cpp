#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fptlab/transform_core.hpp"
#include "oracles.hpp"

using namespace fptlab;

namespace {
const std::vector<double> kLambdaGrid = {1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0};

std::vector<JumpDensity> symmetric_catalog(double S) {
    std::vector<JumpDensity> v = {uniform_density(S), sine_density(S),
                                  parabolic_density(S)};
    if (S == 1.0) {
        v.push_back(triangular_density());
        v.push_back(g2k_density(1));
        v.push_back(g2k_density(2));
        v.push_back(g2k_density(3));
    }
    return v;
}
} // namespace

TEST_CASE("killed_transition_lt anchors and oracle quadrature") {
    CHECK(killed_transition_lt(1.0, 0.0, 1.0, 0.0) == 0.0);
    CHECK(killed_transition_lt(0.5, 1.0, 1.0, 0.0) ==
          Catch::Approx(1.0 - std::exp(-2.0)).epsilon(1e-14));
    CHECK(killed_transition_lt(0.5, 1.0, 1.0, 0.0) ==
          Catch::Approx(oracles::killed_lt_by_quadrature(0.5, 1.0, 1.0, 0.0))
              .epsilon(1e-9));
    CHECK(killed_transition_lt(1.0, 0.5, 0.7, -1.0) ==
          Catch::Approx(oracles::killed_lt_by_quadrature(1.0, 0.5, 0.7, -1.0))
              .margin(1e-6));
    CHECK(killed_transition_lt(2.0, 0.25, 0.8, 0.0) > 0.0);
    CHECK_THROWS_AS(killed_transition_lt(0.0, 1.0, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(killed_transition_lt(1.0, -0.5, 1.0, 0.0), std::domain_error);
}

TEST_CASE("hitting_time_lt_to_zero anchors and oracle") {
    CHECK(hitting_time_lt_to_zero(1.0, 0.0, 0.0) == Catch::Approx(1.0));
    CHECK(hitting_time_lt_to_zero(0.5, 1.0, 0.0) ==
          Catch::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(hitting_time_lt_to_zero(1.0, 1.0, -1.0) ==
          Catch::Approx(std::exp(-(std::sqrt(3.0) - 1.0))).epsilon(1e-14));
    // inverse-Gaussian density quadrature cross-checks
    CHECK(hitting_time_lt_to_zero(0.5, 1.0, 0.0) ==
          Catch::Approx(oracles::hitting_lt_by_quadrature(0.5, 1.0, 0.0, 2000.0))
              .epsilon(1e-7));
    CHECK(hitting_time_lt_to_zero(1.0, 1.0, -1.0) ==
          Catch::Approx(oracles::hitting_lt_by_quadrature(1.0, 1.0, -1.0))
              .epsilon(1e-9));
    // Monte Carlo check via the exact reflection-law sampler
    Rng rng(31, 0);
    double acc = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
        acc += std::exp(-0.5 * oracles::bm_first_passage_draw(rng, 1.0));
    CHECK(acc / n == Catch::Approx(std::exp(-1.0)).margin(3.0 * 0.35 / std::sqrt(double(n))));
    CHECK_THROWS_AS(hitting_time_lt_to_zero(-1.0, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(hitting_time_lt_to_zero(1.0, 1.0, 0.5), std::domain_error);
}

TEST_CASE("phat denominators guard against transform inputs exceeding 1") {
    DriftParams p;
    p.S = 1.0;
    p.beta = 10.0;
    auto bad = [](double) { return 1.2; }; // not a density transform
    CHECK_THROWS_AS(phat_0S(0.5, p, bad), std::domain_error);
    CHECK_THROWS_AS(phat_SS(0.5, p, bad), std::domain_error);
    auto uni = uniform_density(1.0);
    CHECK(phat_SS(1.0, p, uni.lt) > 0.0);
    CHECK(phat_0S(1.0, p, uni.lt) > 0.0);
}

TEST_CASE("forward_fpt_lt equals the renewal oracle for mu = 0 and mu < 0") {
    for (double mu : {0.0, -0.4, -1.0}) {
        for (const auto& d : {uniform_density(1.0), parabolic_density(1.0)}) {
            DriftParams p;
            p.mu = mu;
            p.S = 1.0;
            p.beta = 1.3;
            for (double lam : {0.05, 0.5, 1.0, 4.0}) {
                INFO("mu=" << mu << " density=" << d.name << " lam=" << lam);
                const double got = forward_fpt_lt(lam, p, d.lt);
                const double want =
                    oracles::renewal_forward_lt(lam, 1.0, 1.3, mu, d.pdf);
                CHECK(got == Catch::Approx(want).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("forward transforms normalize at lambda -> 0+ and decrease") {
    auto uni = uniform_density(1.0);
    for (double mu : {0.0, -0.5}) {
        DriftParams p;
        p.mu = mu;
        p.S = 1.0;
        p.beta = 1.0;
        CHECK(forward_fpt_lt(1e-8, p, uni.lt) == Catch::Approx(1.0).margin(1e-4));
        double prev = 2.0;
        for (double lam : kLambdaGrid) {
            const double v = forward_fpt_lt(lam, p, uni.lt);
            CHECK(v > 0.0);
            CHECK(v < prev);
            prev = v;
        }
    }
    for (const auto& d : symmetric_catalog(1.0)) {
        INFO("density " << d.name);
        CHECK(forward_fpt_lt_sym0(1e-8, 1.0, 1.0, d.lt) == Catch::Approx(1.0).margin(1e-4));
        double prev = 2.0;
        for (double lam : kLambdaGrid) {
            const double v = forward_fpt_lt_sym0(lam, 1.0, 1.0, d.lt);
            CHECK(v > 0.0);
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("forward_fpt_lt_sym0 reproduces the worked closed forms") {
    auto uni = uniform_density(1.0);
    const double v1 = forward_fpt_lt_sym0(1.0, 1.0, 1.0, uni.lt);
    CHECK(v1 == Catch::Approx(oracles::fhat_example_uniform(1.0, 1.0, 1.0)).epsilon(1e-13));
    auto sin1 = sine_density(1.0);
    const double v2 = forward_fpt_lt_sym0(2.0, 1.0, 3.0, sin1.lt);
    CHECK(v2 == Catch::Approx(oracles::fhat_example_sine(2.0, 1.0, 3.0)).epsilon(1e-12));
}

TEST_CASE("beta -> infinity limit of the symmetric forward transform") {
    auto d = sine_density(1.0);
    for (double lam : {0.1, 1.0, 10.0}) {
        const double big = forward_fpt_lt_sym0(lam, 1.0, 1e6, d.lt);
        const double nohold = oracles::no_hold_forward(lam, 1.0, d.lt);
        CHECK(std::abs(big - nohold) < 1e-4);
    }
}

TEST_CASE("inverse_g_lt recovers the uniform transform from its forward law") {
    auto uni = uniform_density(1.0);
    const double b = 1.0;
    auto fhat = [&](double lam) { return oracles::fhat_example_uniform(lam, 1.0, b); };
    for (double lam : {0.5, 1.0, 2.0, 5.0}) {
        const double got = inverse_g_lt(lam, fhat, 1.0, b);
        CHECK(got == Catch::Approx(uni.lt(lam)).epsilon(1e-10));
    }
    // normalization at 0+
    CHECK(inverse_g_lt(1e-8, fhat, 1.0, b) == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("inverse_g_lt of the unit-rate exponential law gives the known candidate") {
    // fhat(lam) = 1/(1+lam); the recovered candidate must be
    // (lam^2 + 2 beta (1 + e^{-lam})) / (beta (4 + lam^2)).
    auto fhat = [](double lam) { return 1.0 / (1.0 + lam); };
    for (double beta : {0.5, 1.0, 2.0}) {
        for (double lam : {0.3, 1.0, 2.5, 7.0}) {
            const double want = (lam * lam + 2.0 * beta * (1.0 + std::exp(-lam))) /
                                (beta * (4.0 + lam * lam));
            CHECK(inverse_g_lt(lam, fhat, 1.0, beta) == Catch::Approx(want).epsilon(1e-13));
        }
    }
}

TEST_CASE("no-hold inverse map agrees with the large-beta limit") {
    auto d = parabolic_density(1.0);
    auto fhat_b = [&](double lam) { return forward_fpt_lt_sym0(lam, 1.0, 1e8, d.lt); };
    for (double lam : {0.5, 1.0, 3.0}) {
        const double lim = inverse_g_lt(lam, fhat_b, 1.0, 1e8);
        const double nh = inverse_g_lt_nohold(lam, fhat_b, 1.0);
        CHECK(std::abs(lim - nh) < 1e-6);
    }
}

TEST_CASE("round trip: inverse_g_lt after forward_fpt_lt_sym0 returns ghat") {
    for (double S : {1.0, 2.0}) {
        for (const auto& d : symmetric_catalog(S)) {
            for (double beta : {0.5, 1.0, 5.0}) {
                auto fhat = [&](double lam) {
                    return forward_fpt_lt_sym0(lam, S, beta, d.lt);
                };
                for (double lam : kLambdaGrid) {
                    INFO("S=" << S << " density=" << d.name << " beta=" << beta
                              << " lam=" << lam);
                    const double rec = inverse_g_lt(lam, fhat, S, beta);
                    CHECK(rec == Catch::Approx(d.lt(lam)).margin(1e-10));
                }
            }
        }
    }
}

TEST_CASE("mean_fpt values and domain") {
    CHECK(mean_fpt(1.0, 1.0 / 3.0, 1.0) == Catch::Approx(4.0 / 3.0));
    for (double b : {0.5, 2.0})
        CHECK(mean_fpt(b, 1.0 / 3.0, 1.0) == Catch::Approx(1.0 / 3.0 + 1.0 / b));
    // g2k with k = 1: 2(k+2)/(3(2k+3)) + 1/b at b = 1 -> 1.4
    CHECK(mean_fpt(1.0, 0.3, 1.0) == Catch::Approx(1.4));
    CHECK_THROWS_AS(mean_fpt(1.0, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(mean_fpt(1.0, 1.1, 1.0), std::domain_error);
    CHECK_THROWS_AS(mean_fpt(0.0, 0.3, 1.0), std::domain_error);
}

TEST_CASE("mean identity: difference quotient of the symmetric forward transform") {
    const double h = 1e-6;
    for (double S : {1.0, 2.0}) {
        for (const auto& d : symmetric_catalog(S)) {
            const double m2 = fptlab::integrate(
                [&](double u) { return u * u * d.pdf(u); }, 0.0, S, 1e-13);
            for (double beta : {0.5, 1.0, 5.0}) {
                const double f = forward_fpt_lt_sym0(h, S, beta, d.lt);
                const double est = (1.0 - f) / h;
                const double want = mean_fpt(beta, m2, S);
                INFO("S=" << S << " density=" << d.name << " beta=" << beta);
                CHECK(std::abs(est - want) / want < 1e-3);
            }
        }
    }
    // beta -> infinity: the mean tends to S^2 - 2 E(U^2) = S^2/3 for uniform
    const double S = 1.5;
    auto uni = uniform_density(S);
    const double f = forward_fpt_lt_sym0(1e-6, S, 1e9, uni.lt);
    CHECK((1.0 - f) / 1e-6 == Catch::Approx(S * S / 3.0).epsilon(1e-3));
}

TEST_CASE("simulator-law transform removes exactly one holding factor") {
    auto d = uniform_density(1.0);
    DriftParams p;
    p.S = 1.0;
    p.beta = 2.0;
    for (double lam : {0.2, 1.0, 5.0}) {
        CHECK(forward_fpt_lt_no_initial_hold(lam, p, d.lt) ==
              Catch::Approx((p.beta + lam) / p.beta * forward_fpt_lt(lam, p, d.lt))
                  .epsilon(1e-14));
    }
    // normalization is preserved
    CHECK(forward_fpt_lt_no_initial_hold(1e-8, p, d.lt) == Catch::Approx(1.0).margin(1e-4));
}

TEST_CASE("TransformFn domain checking and FPT grid diagnostics") {
    auto t = make_transform([](double l) { return 1.0 / (1.0 + l); }, "exp-law");
    CHECK_THROWS_AS(t(-1.0), std::domain_error);
    CHECK(t(1.0) == Catch::Approx(0.5));
    auto chk = check_fpt_transform(t.eval, kLambdaGrid);
    CHECK(chk.ok());
    auto bad = check_fpt_transform([](double l) { return 1.0 + l; }, kLambdaGrid);
    CHECK_FALSE(bad.ok());
}
