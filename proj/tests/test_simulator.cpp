#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fptlab/laplace_inversion.hpp"
#include "fptlab/simulator.hpp"
#include "fptlab/transform_core.hpp"
#include "oracles.hpp"

using namespace fptlab;

namespace {
SimConfig example1_config(std::size_t n, double dt, std::uint64_t seed) {
    SimConfig cfg;
    cfg.params = DriftParams{0.0, 1.0, 1.0, 0.0};
    cfg.density = uniform_density(1.0);
    cfg.n_paths = n;
    cfg.dt = dt;
    cfg.seed = seed;
    return cfg;
}

std::vector<double> logspace(double a, double b, int n) {
    std::vector<double> g(n);
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < n; ++i) g[i] = std::exp(la + (lb - la) * i / (n - 1));
    return g;
}
} // namespace

TEST_CASE("config validation") {
    auto cfg = example1_config(100, 1e-3, 1);
    CHECK_NOTHROW(cfg.validate());
    cfg.dt = 0.02;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.dt = 1e-3;
    cfg.n_paths = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.n_paths = 10;
    cfg.params.x = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);
    cfg.params.x = 0.0;
    cfg.density = uniform_density(2.0); // support != barrier
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    // the simulator takes positive drift even though the transforms do not
    cfg = example1_config(10, 1e-3, 1);
    cfg.params.mu = 0.3;
    CHECK_NOTHROW(cfg.validate());
    CHECK(example1_config(10, 1e-3, 1).effective_t_max() == Catch::Approx(2000.0));
}

TEST_CASE("determinism: same config, same samples; thread-count independent") {
    auto cfg = example1_config(4000, 1e-3, 99);
    cfg.threads = 1;
    auto a = simulate_fpt(cfg);
    auto b = simulate_fpt(cfg);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        CHECK(a.samples[i] == b.samples[i]);
    CHECK(a.censored_count == b.censored_count);

    cfg.threads = 2;
    auto c = simulate_fpt(cfg);
    REQUIRE(a.samples.size() == c.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        CHECK(a.samples[i] == c.samples[i]);

    auto cfg2 = example1_config(4000, 1e-3, 100);
    auto d = simulate_fpt(cfg2);
    CHECK(a.samples != d.samples);
}

TEST_CASE("mean FPT matches 1/beta + S^2 - 2 E(U^2) on the reference config") {
    auto set = simulate_fpt(example1_config(100000, 1e-4, 20240817));
    CHECK(set.nan_count == 0);
    CHECK(set.censored_count == 0);
    const double want = mean_fpt(1.0, 1.0 / 3.0, 1.0); // 4/3
    CHECK(std::abs(set.mean() - want) < 3.0 * set.standard_error());
    CHECK(set.samples.front() > 0.0);
    CHECK(set.samples.back() <= set.config.t_max);
}

TEST_CASE("large beta removes holding: mean tends to S^2 - 2 E(U^2)") {
    auto cfg = example1_config(100000, 1e-4, 5150);
    cfg.params.beta = 1e6;
    auto set = simulate_fpt(cfg);
    CHECK(std::abs(set.mean() - 1.0 / 3.0) < 3.0 * set.standard_error());
}

TEST_CASE("starting adjacent to the barrier exits almost immediately") {
    auto cfg = example1_config(4000, 1e-4, 7);
    cfg.params.x = 1.0 - 1e-3;
    auto set = simulate_fpt(cfg);
    const double median = set.samples[set.samples.size() / 2];
    CHECK(median < 0.01);
}

TEST_CASE("halving dt moves the mean by less than one standard error") {
    auto a = simulate_fpt(example1_config(40000, 2e-4, 31415));
    auto b = simulate_fpt(example1_config(40000, 1e-4, 31415));
    const double se = std::hypot(a.standard_error(), b.standard_error());
    CHECK(std::abs(a.mean() - b.mean()) < se);
}

TEST_CASE("bridge correction beats the uncorrected scheme at coarse dt") {
    auto cfg = example1_config(100000, 1e-3, 271828);
    auto with = simulate_fpt(cfg);
    cfg.scheme = Scheme::euler_no_bridge;
    auto without = simulate_fpt(cfg);
    const double target = 4.0 / 3.0;
    INFO("with=" << with.mean() << " without=" << without.mean());
    CHECK(std::abs(with.mean() - target) < std::abs(without.mean() - target));
}

TEST_CASE("negative drift increases the mean FPT") {
    auto cfg0 = example1_config(30000, 2e-4, 777);
    auto neg = cfg0;
    neg.params.mu = -0.5;
    CHECK(simulate_fpt(neg).mean() > simulate_fpt(cfg0).mean());
}

TEST_CASE("censoring accounting with a tiny horizon") {
    auto cfg = example1_config(2000, 1e-3, 3);
    cfg.t_max = 0.5;
    auto set = simulate_fpt(cfg);
    CHECK(set.censored_count > 0);
    CHECK(set.samples.size() + set.censored_count == cfg.n_paths);
    for (double v : set.samples) CHECK(v <= 0.5 + 1e-12);
}

TEST_CASE("empirical cdf: censored paths only count in the denominator") {
    FPTSampleSet set;
    set.samples = {1.0, 2.0, 3.0};
    set.censored_count = 1;
    auto e = empirical_cdf(set, {0.5, 1.0, 2.5, 10.0});
    CHECK(e[0] == Catch::Approx(0.0));
    CHECK(e[1] == Catch::Approx(0.25));
    CHECK(e[2] == Catch::Approx(0.5));
    CHECK(e[3] == Catch::Approx(0.75));
}

TEST_CASE("ks critical value formula") {
    CHECK(ks_critical_value(100000, 0.01) ==
          Catch::Approx(1.6276 / std::sqrt(1e5)).epsilon(1e-3));
    CHECK_THROWS_AS(ks_critical_value(100, 1.5), std::invalid_argument);
}

TEST_CASE("distribution matches the transform of the simulated law") {
    // The simulated law (clock starting at the first jump) has transform
    // (beta+lambda)/beta * forward_fpt_lt; its inverted CDF is the
    // correct reference for a KS comparison.
    auto set = simulate_fpt(example1_config(100000, 1e-4, 90210));
    auto d = uniform_density(1.0);
    DriftParams p{0.0, 1.0, 1.0, 0.0};
    auto law = [&](double lam) { return forward_fpt_lt_no_initial_hold(lam, p, d.lt); };
    auto grid = logspace(0.02, 25.0, 160);
    auto ref = cdf_from_lt(law, grid);
    REQUIRE(ref.all_ok());
    auto ks = ks_compare(set, grid, ref.values, 0.01);
    INFO("ks statistic " << ks.statistic << " critical " << ks.critical);
    CHECK(ks.pass);
}

TEST_CASE("sample set summary statistics") {
    FPTSampleSet set;
    set.samples = {1.0, 2.0, 3.0, 4.0};
    CHECK(set.mean() == Catch::Approx(2.5));
    CHECK(set.stddev() == Catch::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(set.standard_error() == Catch::Approx(std::sqrt(5.0 / 3.0) / 2.0));
}
