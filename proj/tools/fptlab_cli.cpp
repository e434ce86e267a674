// fptlab command line: forward / inverse / simulate / check / example.
//
// Batch interface over the library. Every command is deterministic given
// its flags (including --seed); all CSV outputs carry a '#'-comment header
// echoing the parameter set; exit code is 0 iff all internal checks pass,
// otherwise a machine-readable FAIL list is printed and the exit code is 1.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fptlab/conjugation.hpp"
#include "fptlab/csv.hpp"
#include "fptlab/laplace_inversion.hpp"
#include "fptlab/simulator.hpp"
#include "fptlab/transform_core.hpp"

using namespace fptlab;

namespace {

struct CheckList {
    int failures = 0;
    void report(const std::string& name, bool ok, const std::string& detail) {
        std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
        if (!ok) ++failures;
    }
    void hard_fail(const std::string& name, const std::string& detail) {
        report(name, false, detail);
    }
};

using KV = std::vector<std::pair<std::string, std::string>>;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> logspace(double a, double b, int n) {
    std::vector<double> g(n);
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < n; ++i) g[i] = std::exp(la + (lb - la) * i / (n - 1));
    return g;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
    return g;
}

std::vector<double> default_lambda_grid() { return logspace(1e-3, 1e2, 25); }

std::vector<double> default_u_grid(double S) {
    return linspace(0.02 * S, 0.98 * S, 49);
}

// density spec: uniform | sine | parabolic | triangular | g2k:<k> | csv:<path>
JumpDensity make_density(const std::string& spec, double S) {
    if (spec == "uniform") return uniform_density(S);
    if (spec == "sine") return sine_density(S);
    if (spec == "parabolic") return parabolic_density(S);
    if (spec == "triangular") {
        if (S != 1.0)
            throw std::invalid_argument("triangular density is defined on (0,1); use --barrier 1");
        return triangular_density();
    }
    if (spec.rfind("g2k:", 0) == 0) {
        if (S != 1.0)
            throw std::invalid_argument("g2k densities are defined on (0,1); use --barrier 1");
        return g2k_density(std::stoi(spec.substr(4)));
    }
    if (spec.rfind("csv:", 0) == 0) return tabulated_density_csv(spec.substr(4), S);
    throw std::invalid_argument("unknown density spec '" + spec + "'");
}

// named forward laws for the inverse command:
//   ex1..ex4 (catalog closed forms with S, b), g2k:<k> (S=1), exponential:<rate>
TransformFn named_fhat(const std::string& name, double S, double beta) {
    auto catalog_forward = [S, beta](const JumpDensity& d, const std::string& label) {
        auto lt = d.lt;
        return make_transform(
            [S, beta, lt](double lam) { return forward_fpt_lt_sym0(lam, S, beta, lt); },
            label);
    };
    if (name == "ex1") return catalog_forward(uniform_density(S), "ex1");
    if (name == "ex2") return catalog_forward(sine_density(S), "ex2");
    if (name == "ex3") return catalog_forward(parabolic_density(S), "ex3");
    if (name == "ex4") {
        if (S != 1.0) throw std::invalid_argument("ex4 requires --barrier 1");
        return catalog_forward(triangular_density(), "ex4");
    }
    if (name.rfind("g2k:", 0) == 0) {
        if (S != 1.0) throw std::invalid_argument("g2k requires --barrier 1");
        return catalog_forward(g2k_density(std::stoi(name.substr(4))), name);
    }
    if (name.rfind("exponential:", 0) == 0) {
        const double rate = std::stod(name.substr(12));
        if (!(rate > 0)) throw std::invalid_argument("exponential rate must be > 0");
        return make_transform([rate](double lam) { return rate / (rate + lam); },
                              name);
    }
    throw std::invalid_argument("unknown transform name '" + name + "'");
}

// tabulated (lambda, fhat) input; rejected when non-monotone or above 1
TransformFn fhat_from_csv(const std::string& path) {
    auto t = read_csv(path);
    if (t.columns.size() < 2 || t.rows() < 4)
        throw std::invalid_argument(path + ": expected columns (lambda, fhat) with >= 4 rows");
    const auto& lam = t.columns[0];
    const auto& f = t.columns[1];
    for (std::size_t i = 0; i < lam.size(); ++i) {
        if (i && !(lam[i] > lam[i - 1]))
            throw std::invalid_argument(path + ": lambda must be strictly increasing");
        if (!(f[i] >= 0.0 && f[i] <= 1.0 + 1e-12))
            throw std::invalid_argument(path + ": fhat outside [0,1] at row " +
                                        std::to_string(i + 1) + " (not an FPT transform)");
        if (i && f[i] > f[i - 1] + 1e-12)
            throw std::invalid_argument(path + ": fhat is non-monotone at row " +
                                        std::to_string(i + 1) + " (not an FPT transform)");
    }
    return make_transform(
        [lam, f, path](double x) {
            if (x <= lam.front()) return f.front();
            if (x > lam.back())
                throw std::domain_error(path + ": transform requested at lambda=" +
                                        std::to_string(x) + " beyond the tabulated range");
            const auto it = std::upper_bound(lam.begin(), lam.end(), x);
            const std::size_t i = static_cast<std::size_t>(it - lam.begin());
            const double w = (x - lam[i - 1]) / (lam[i] - lam[i - 1]);
            return f[i - 1] + w * (f[i] - f[i - 1]);
        },
        "csv:" + path);
}

std::string outfile(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

void write_validity(const std::string& path, const ValidityReport& rep, const KV& meta) {
    std::ofstream os(path);
    for (const auto& kv : meta) os << "# " << kv.first << "=" << kv.second << "\n";
    os << rep.to_text();
}

double sample_mean(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / v.size();
}

double sample_se(const std::vector<double>& v) {
    const double m = sample_mean(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (v.size() - 1) / v.size());
}

// ---------------------------------------------------------------- forward
struct ForwardOpts {
    std::string density = "uniform";
    double S = 1.0, beta = 1.0, mu = 0.0;
    std::string lambda_grid, t_grid, out = ".";
    int order = 14;
};

int run_forward(const ForwardOpts& o, CheckList& checks) {
    auto d = make_density(o.density, o.S);
    const auto lams = o.lambda_grid.empty() ? default_lambda_grid()
                                            : parse_grid(o.lambda_grid);
    const bool symmetric_form = o.mu == 0.0 && d.symmetric;
    DriftParams p{o.mu, o.S, o.beta, 0.0};
    auto fhat = [&](double lam) {
        return symmetric_form ? forward_fpt_lt_sym0(lam, o.S, o.beta, d.lt)
                              : forward_fpt_lt(lam, p, d.lt);
    };
    std::vector<double> vals(lams.size());
    for (std::size_t i = 0; i < lams.size(); ++i) vals[i] = fhat(lams[i]);

    KV meta = {{"command", "forward"},      {"density", d.name},
               {"barrier", fmt(o.S)},       {"beta", fmt(o.beta)},
               {"mu", fmt(o.mu)},           {"formula", symmetric_form
                                                            ? "symmetric-explicit"
                                                            : "resolvent-ratio"}};
    write_csv(outfile(o.out, "forward.csv"), meta, {"lambda", "fhat"}, {lams, vals});

    auto chk = check_fpt_transform(fhat, lams);
    checks.report("forward_transform_shape", chk.ok(),
                  "value near 0+ " + fmt(chk.value_near_zero));

    if (!o.t_grid.empty()) {
        const auto ts = parse_grid(o.t_grid);
        InversionConfig cfg;
        cfg.order = o.order;
        cfg.grid = ts;
        auto dens = invert(fhat, cfg);
        auto cdf = cdf_from_lt(fhat, ts, o.order);
        write_csv(outfile(o.out, "forward_density.csv"), meta, {"t", "f"},
                  {ts, dens.values});
        write_csv(outfile(o.out, "forward_cdf.csv"), meta, {"t", "F"},
                  {ts, cdf.values});
        checks.report("forward_inversion", dens.all_ok() && cdf.all_ok(),
                      "inverted on " + std::to_string(ts.size()) + " points");
    }
    return 0;
}

// ---------------------------------------------------------------- inverse
struct InverseOpts {
    std::string fhat = "ex1";
    double S = 1.0, beta = 1.0;
    std::string lambda_grid, u_grid, out = ".";
    int order = 14;
};

int run_inverse(const InverseOpts& o, CheckList& checks) {
    TransformFn fhat = o.fhat.rfind("csv:", 0) == 0
                           ? fhat_from_csv(o.fhat.substr(4))
                           : named_fhat(o.fhat, o.S, o.beta);
    const auto lams = o.lambda_grid.empty() ? default_lambda_grid()
                                            : parse_grid(o.lambda_grid);
    auto ghat = inverse_transform(fhat.eval, o.S, o.beta, "ghat[" + fhat.label + "]");

    std::vector<double> gvals(lams.size());
    for (std::size_t i = 0; i < lams.size(); ++i) gvals[i] = ghat(lams[i]);

    KV meta = {{"command", "inverse"},
               {"fhat", fhat.label},
               {"barrier", fmt(o.S)},
               {"beta", fmt(o.beta)}};
    write_csv(outfile(o.out, "ghat.csv"), meta, {"lambda", "ghat"}, {lams, gvals});

    const auto us = o.u_grid.empty() ? default_u_grid(o.S) : parse_grid(o.u_grid);
    InversionConfig cfg;
    cfg.order = o.order;
    cfg.grid = us;
    cfg.support = o.S;
    auto g = invert(ghat.eval, cfg);
    write_csv(outfile(o.out, "g.csv"), meta, {"u", "g"}, {us, g.values});
    checks.report("inverse_density_fit", g.all_ok(),
                  "fitted on " + std::to_string(us.size()) + " points");

    auto rep = check_density(ghat.eval, o.S, cfg);
    write_validity(outfile(o.out, "validity.txt"), rep, meta);
    std::printf("%s", rep.to_text().c_str());
    checks.report("validity_check_completed",
                  rep.verdict != ValidityReport::Verdict::inconclusive ||
                      !rep.reasons.empty(),
                  "verdict " + rep.verdict_str());
    return 0;
}

// --------------------------------------------------------------- simulate
struct SimulateOpts {
    std::string density = "uniform";
    double S = 1.0, beta = 1.0, mu = 0.0, x = 0.0;
    std::size_t paths = 100000;
    double dt = 1e-4, tmax = 0.0;
    std::uint64_t seed = 1;
    int threads = 0;
    bool no_bridge = false;
    bool reference = false;
    std::string input, out = ".";
};

int run_simulate(const SimulateOpts& o, CheckList& checks) {
    auto d = make_density(o.density, o.S);
    std::vector<double> samples;
    std::size_t censored = 0, nans = 0, n_paths = 0;
    KV meta;
    if (!o.input.empty()) {
        auto t = read_csv(o.input);
        if (t.columns.empty()) throw std::invalid_argument(o.input + ": no sample column");
        samples = t.columns[0];
        std::sort(samples.begin(), samples.end());
        if (const auto* c = t.comment("censored_count")) censored = std::stoul(*c);
        if (const auto* c = t.comment("n_paths")) n_paths = std::stoul(*c);
        else n_paths = samples.size() + censored;
        meta.emplace_back("command", "simulate(reanalysis)");
        meta.emplace_back("input", o.input);
    } else {
        SimConfig cfg;
        cfg.params = DriftParams{o.mu, o.S, o.beta, o.x};
        cfg.density = d;
        cfg.n_paths = o.paths;
        cfg.dt = o.dt;
        cfg.seed = o.seed;
        cfg.t_max = o.tmax;
        cfg.threads = o.threads;
        cfg.scheme = o.no_bridge ? Scheme::euler_no_bridge : Scheme::euler_bridge;
        auto set = simulate_fpt(cfg);
        samples = set.samples;
        censored = set.censored_count;
        nans = set.nan_count;
        n_paths = set.n_paths;
        meta = {{"command", "simulate"},
                {"density", d.name},
                {"barrier", fmt(o.S)},
                {"beta", fmt(o.beta)},
                {"mu", fmt(o.mu)},
                {"x", fmt(o.x)},
                {"n_paths", std::to_string(n_paths)},
                {"dt", fmt(o.dt)},
                {"seed", std::to_string(o.seed)},
                {"scheme", set.config.scheme},
                {"t_max", fmt(set.config.t_max)},
                {"censored_count", std::to_string(censored)},
                {"nan_count", std::to_string(nans)}};
        write_csv(outfile(o.out, "samples.csv"), meta, {"tau"}, {samples});
        checks.report("no_numerical_failures", nans == 0,
                      std::to_string(nans) + " NaN paths");
    }
    if (samples.empty()) throw std::runtime_error("no uncensored samples");

    std::printf("n=%zu censored=%zu mean=%.6g std=%.6g se=%.6g\n", samples.size(),
                censored, sample_mean(samples),
                sample_se(samples) * std::sqrt(double(samples.size())),
                sample_se(samples));

    if (o.reference) {
        if (o.mu > 0.0) {
            checks.hard_fail("reference_ks", "transform reference requires mu <= 0");
        } else {
            FPTSampleSet set;
            set.samples = samples;
            set.censored_count = censored;
            set.n_paths = n_paths;
            DriftParams p{o.mu, o.S, o.beta, 0.0};
            auto law = [&](double lam) {
                return forward_fpt_lt_no_initial_hold(lam, p, d.lt);
            };
            const double tmaxq = samples[static_cast<std::size_t>(0.999 * (samples.size() - 1))];
            auto grid = logspace(std::max(1e-3, samples.front() * 0.5),
                                 std::max(1.0, tmaxq * 1.5), 160);
            auto ref = cdf_from_lt(law, grid);
            auto ks = ks_compare(set, grid, ref.values, 0.01);
            std::printf("ks_vs_realized_law=%.6g critical=%.6g\n", ks.statistic,
                        ks.critical);
            checks.report("reference_ks", ks.pass,
                          "statistic " + fmt(ks.statistic) + " critical " +
                              fmt(ks.critical));
        }
    }
    return 0;
}

// ------------------------------------------------------------------ check
struct CheckOpts {
    std::string density;
    std::string fhat;
    double S = 1.0, beta = 1.0;
    std::string out = ".";
};

int run_check(const CheckOpts& o, CheckList& checks) {
    KV meta = {{"command", "check"}, {"barrier", fmt(o.S)}, {"beta", fmt(o.beta)}};
    ValidityReport rep;
    if (!o.density.empty()) {
        auto d = make_density(o.density, o.S);
        meta.emplace_back("density", d.name);
        rep = check_density(d.lt, o.S, {});
    } else if (!o.fhat.empty()) {
        TransformFn fhat = o.fhat.rfind("csv:", 0) == 0
                               ? fhat_from_csv(o.fhat.substr(4))
                               : named_fhat(o.fhat, o.S, o.beta);
        meta.emplace_back("fhat", fhat.label);
        auto ghat = inverse_transform(fhat.eval, o.S, o.beta, "candidate");
        rep = check_density(ghat.eval, o.S, {});
    } else {
        throw std::invalid_argument("check: provide --density or --fhat");
    }
    write_validity(outfile(o.out, "validity.txt"), rep, meta);
    std::printf("%s", rep.to_text().c_str());
    checks.report("check_completed", true, "verdict " + rep.verdict_str());
    return 0;
}

// ---------------------------------------------------------------- example
struct ExampleOpts {
    std::string name = "ex1";
    double S = 1.0, beta = 1.0;
    std::size_t paths = 20000;
    double dt = 2e-4;
    std::uint64_t seed = 1;
    std::string out = ".";
};

void catalog_example(const ExampleOpts& o, const JumpDensity& d, CheckList& checks) {
    const double S = d.support, b = o.beta;
    const auto lams = default_lambda_grid();
    KV meta = {{"command", "example"}, {"name", o.name},      {"density", d.name},
               {"barrier", fmt(S)},    {"beta", fmt(b)},      {"paths", std::to_string(o.paths)},
               {"dt", fmt(o.dt)},      {"seed", std::to_string(o.seed)}};

    // forward transform table
    std::vector<double> fvals(lams.size());
    for (std::size_t i = 0; i < lams.size(); ++i)
        fvals[i] = forward_fpt_lt_sym0(lams[i], S, b, d.lt);
    write_csv(outfile(o.out, o.name + "_fhat.csv"), meta, {"lambda", "fhat"},
              {lams, fvals});

    // round trip through the inverse map
    auto fhat = [&](double l) { return forward_fpt_lt_sym0(l, S, b, d.lt); };
    double worst = 0.0;
    std::vector<double> gvals(lams.size());
    for (std::size_t i = 0; i < lams.size(); ++i) {
        gvals[i] = inverse_g_lt(lams[i], fhat, S, b);
        worst = std::max(worst, std::abs(gvals[i] - d.lt(lams[i])));
    }
    write_csv(outfile(o.out, o.name + "_ghat.csv"), meta, {"lambda", "ghat"},
              {lams, gvals});
    checks.report(o.name + "_round_trip", worst < 1e-10, "max abs gap " + fmt(worst));

    // invert the recovered transform back to the density
    auto ghat = inverse_transform(fhat, S, b, "ghat");
    InversionConfig cfg;
    cfg.support = S;
    cfg.grid = linspace(0.05 * S + 1e-9, 0.95 * S - 1e-9, 46);
    auto gtab = invert(ghat.eval, cfg);
    double gerr = 0.0;
    for (std::size_t i = 0; i < cfg.grid.size(); ++i)
        gerr = std::max(gerr, std::abs(gtab.values[i] - d.pdf(cfg.grid[i])));
    write_csv(outfile(o.out, o.name + "_g.csv"), meta, {"u", "g"},
              {cfg.grid, gtab.values});
    checks.report(o.name + "_inversion", gtab.all_ok() && gerr < 1e-3,
                  "max abs err " + fmt(gerr));

    auto rep = check_density(ghat.eval, S, cfg);
    write_validity(outfile(o.out, o.name + "_validity.txt"), rep, meta);
    checks.report(o.name + "_validity", rep.valid(), "verdict " + rep.verdict_str());

    // Monte Carlo cross-check: mean and KS against the realized-law transform
    SimConfig sc;
    sc.params = DriftParams{0.0, S, b, 0.0};
    sc.density = d;
    sc.n_paths = o.paths;
    sc.dt = o.dt;
    sc.seed = o.seed;
    auto set = simulate_fpt(sc);
    write_csv(outfile(o.out, o.name + "_samples.csv"), meta, {"tau"}, {set.samples});
    const double m2 = integrate([&](double u) { return u * u * d.pdf(u); }, 0.0, S, 1e-12);
    const double want = mean_fpt(b, m2, S);
    const bool mean_ok = std::abs(set.mean() - want) < 3.0 * set.standard_error();
    checks.report(o.name + "_mc_mean", mean_ok,
                  "mean " + fmt(set.mean()) + " target " + fmt(want) + " se " +
                      fmt(set.standard_error()));

    DriftParams p{0.0, S, b, 0.0};
    auto law = [&](double lam) { return forward_fpt_lt_no_initial_hold(lam, p, d.lt); };
    auto grid = logspace(0.02, std::max(10.0, 20.0 * want), 140);
    auto ref = cdf_from_lt(law, grid);
    auto ks = ks_compare(set, grid, ref.values, 0.01);
    checks.report(o.name + "_mc_ks_realized_law", ks.pass,
                  "statistic " + fmt(ks.statistic) + " critical " + fmt(ks.critical));
}

void remark25_example(const ExampleOpts& o, CheckList& checks) {
    KV meta = {{"command", "example"}, {"name", "remark25"}, {"beta", fmt(o.beta)}};
    auto fhat = [](double lam) { return 1.0 / (1.0 + lam); };
    auto ghat = inverse_transform(fhat, 1.0, o.beta, "exp-candidate");
    auto rep = check_density(ghat.eval, 1.0, {});
    write_validity(outfile(o.out, "remark25_validity.txt"), rep, meta);
    std::printf("%s", rep.to_text().c_str());
    bool mentions = false;
    for (const auto& r : rep.reasons)
        mentions = mentions || r.find("m3") != std::string::npos;
    checks.report("remark25_nonexistence", rep.invalid() && rep.m3 < 0.0 && mentions,
                  "verdict " + rep.verdict_str() + ", m3 " + fmt(rep.m3));
}

void ou_example(const ExampleOpts& o, CheckList& checks) {
    const double mu = 1.0, sigma = 1.0, x0 = 0.5, S0 = 1.0;
    OuTimeChange tc(mu, sigma);
    double worst = 0.0;
    for (double t : {0.01, 0.2, 1.0, 3.0})
        worst = std::max(worst, std::abs(tc.rho_inv(tc.rho(t)) - t));
    checks.report("ou_clock_inverse", worst < 1e-12, "max err " + fmt(worst));

    // exact BM first-passage draws mapped through rho_inv ...
    Rng rng(o.seed, 0);
    std::vector<double> mapped(o.paths * 4);
    for (auto& v : mapped) {
        double z;
        do { z = rng.normal(); } while (z == 0.0);
        v = tc.rho_inv((S0 - x0) * (S0 - x0) / (z * z));
    }
    std::sort(mapped.begin(), mapped.end());
    // ... against the direct mean-reverting simulation
    auto direct = simulate_ou_fpt_samples(mu, sigma, x0, S0, o.paths, 1e-4, o.seed + 1);
    const double gap = std::abs(sample_mean(mapped) - sample_mean(direct));
    const double tol = 3.0 * std::hypot(sample_se(mapped), sample_se(direct));
    checks.report("ou_mc_time_change", gap < tol,
                  "mapped mean " + fmt(sample_mean(mapped)) + " direct mean " +
                      fmt(sample_mean(direct)) + " gap " + fmt(gap) + " tol " + fmt(tol));

    // mapped CDF table G(t) = F(rho(t)) for the flat-clock empirical CDF
    std::vector<double> u_grid, F;
    const double umax = mapped.empty() ? 10.0 : tc.rho(mapped.back());
    for (int i = 0; i <= 400; ++i) {
        u_grid.push_back(umax * i / 400.0);
        const auto it = std::upper_bound(mapped.begin(), mapped.end(),
                                         tc.rho_inv(u_grid.back()));
        F.push_back(double(it - mapped.begin()) / mapped.size());
    }
    auto t_grid = linspace(0.01, tc.rho_inv(umax), 120);
    auto G = map_fpt_distribution(u_grid, F, tc, t_grid);
    bool monotone = true;
    for (std::size_t i = 1; i < G.size(); ++i) monotone = monotone && G[i] >= G[i - 1];
    KV meta = {{"command", "example"}, {"name", "ou"},
               {"mu", fmt(mu)},        {"sigma", fmt(sigma)},
               {"x0", fmt(x0)},        {"S0", fmt(S0)},
               {"seed", std::to_string(o.seed)}};
    write_csv(outfile(o.out, "ou_mapped_cdf.csv"), meta, {"t", "F"}, {t_grid, G});
    checks.report("ou_cdf_map", monotone, "mapped CDF monotone on the grid");
}

void gbm_example(const ExampleOpts& o, CheckList& checks) {
    // x0 = 1, sigma = 2, r = 2 => internal drift 0; mu' = 0 keeps it 0
    auto rp = gbm_reduce(1.0, 2.0, 2.0, 0.0, o.S);
    const bool red_ok = std::abs(rp.start) < 1e-15 && std::abs(rp.drift) < 1e-15 &&
                        rp.barrier == o.S;
    checks.report("gbm_reduction", red_ok,
                  "start " + fmt(rp.start) + " drift " + fmt(rp.drift) + " barrier " +
                      fmt(rp.barrier));

    // simulate the reduced flat problem
    SimConfig sc;
    sc.params = DriftParams{rp.drift, rp.barrier, o.beta, rp.start};
    sc.density = uniform_density(rp.barrier);
    sc.n_paths = o.paths;
    sc.dt = o.dt;
    sc.seed = o.seed;
    auto set = simulate_fpt(sc);
    const double want = mean_fpt(o.beta, rp.barrier * rp.barrier / 3.0, rp.barrier);
    KV meta = {{"command", "example"}, {"name", "gbm"}, {"barrier", fmt(rp.barrier)},
               {"beta", fmt(o.beta)},  {"seed", std::to_string(o.seed)}};
    write_csv(outfile(o.out, "gbm_samples.csv"), meta, {"tau"}, {set.samples});
    checks.report("gbm_mc_mean",
                  std::abs(set.mean() - want) < 3.0 * set.standard_error(),
                  "mean " + fmt(set.mean()) + " target " + fmt(want));
}

int run_example(const ExampleOpts& o, CheckList& checks) {
    if (o.name == "ex1") catalog_example(o, uniform_density(o.S), checks);
    else if (o.name == "ex2") catalog_example(o, sine_density(o.S), checks);
    else if (o.name == "ex3") catalog_example(o, parabolic_density(o.S), checks);
    else if (o.name == "ex4") {
        if (o.S != 1.0) throw std::invalid_argument("ex4 requires --barrier 1");
        catalog_example(o, triangular_density(), checks);
    } else if (o.name.rfind("g2k:", 0) == 0) {
        if (o.S != 1.0) throw std::invalid_argument("g2k requires --barrier 1");
        catalog_example(o, g2k_density(std::stoi(o.name.substr(4))), checks);
    } else if (o.name == "remark25") remark25_example(o, checks);
    else if (o.name == "ou") ou_example(o, checks);
    else if (o.name == "gbm") gbm_example(o, checks);
    else throw std::invalid_argument("unknown example '" + o.name + "'");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"first-passage laboratory for drifted BM with a "
                 "holding-and-jumping boundary"};
    app.require_subcommand(1);

    ForwardOpts fo;
    auto* fwd = app.add_subcommand("forward", "jump density -> FPT transform (and density/CDF)");
    fwd->add_option("--density", fo.density, "uniform|sine|parabolic|triangular|g2k:<k>|csv:<path>");
    fwd->add_option("--barrier", fo.S, "barrier S > 0");
    fwd->add_option("--beta", fo.beta, "holding rate > 0");
    fwd->add_option("--mu", fo.mu, "drift (<= 0)");
    fwd->add_option("--lambda-grid", fo.lambda_grid, "comma list or linspace:a:b:n or logspace:a:b:n");
    fwd->add_option("--t-grid", fo.t_grid, "time grid: also emit inverted density and CDF");
    fwd->add_option("--order", fo.order, "Gaver-Stehfest order (even, 8..18)");
    fwd->add_option("--out", fo.out, "output directory");

    InverseOpts io;
    auto* inv = app.add_subcommand("inverse", "FPT transform -> candidate jump density + validity");
    inv->add_option("--fhat", io.fhat, "ex1|ex2|ex3|ex4|g2k:<k>|exponential:<rate>|csv:<path>");
    inv->add_option("--barrier", io.S, "barrier S > 0");
    inv->add_option("--beta", io.beta, "holding rate > 0");
    inv->add_option("--lambda-grid", io.lambda_grid, "grid for the recovered transform");
    inv->add_option("--u-grid", io.u_grid, "grid for the fitted density");
    inv->add_option("--order", io.order, "Gaver-Stehfest order (even, 8..18)");
    inv->add_option("--out", io.out, "output directory");

    SimulateOpts so;
    auto* sim = app.add_subcommand("simulate", "Monte Carlo FPT samples + summary");
    sim->add_option("--density", so.density, "jump density spec");
    sim->add_option("--barrier", so.S, "barrier S > 0");
    sim->add_option("--beta", so.beta, "holding rate > 0");
    sim->add_option("--mu", so.mu, "drift (simulator accepts any sign)");
    sim->add_option("--start", so.x, "start point in [0,S)");
    sim->add_option("--paths", so.paths, "number of paths");
    sim->add_option("--dt", so.dt, "Euler step (0, 1e-2]");
    sim->add_option("--seed", so.seed, "RNG seed");
    sim->add_option("--tmax", so.tmax, "censoring horizon (0 = default)");
    sim->add_option("--threads", so.threads, "worker threads (0 = auto)");
    sim->add_flag("--no-bridge", so.no_bridge, "disable bridge crossing corrections");
    sim->add_flag("--reference", so.reference, "KS-compare against the realized-law transform");
    sim->add_option("--input", so.input, "re-analyze an existing samples CSV");
    sim->add_option("--out", so.out, "output directory");

    CheckOpts co;
    auto* chk = app.add_subcommand("check", "validity of a density or of an inverse candidate");
    chk->add_option("--density", co.density, "check a density's own transform");
    chk->add_option("--fhat", co.fhat, "check the inverse candidate of a law");
    chk->add_option("--barrier", co.S, "barrier S > 0");
    chk->add_option("--beta", co.beta, "holding rate > 0");
    chk->add_option("--out", co.out, "output directory");

    ExampleOpts eo;
    auto* ex = app.add_subcommand("example", "named reproduction bundle with pass/fail summary");
    ex->add_option("--name", eo.name, "ex1|ex2|ex3|ex4|g2k:<k>|remark25|ou|gbm");
    ex->add_option("--barrier", eo.S, "barrier S > 0 (where applicable)");
    ex->add_option("--beta", eo.beta, "holding rate > 0");
    ex->add_option("--paths", eo.paths, "Monte Carlo paths");
    ex->add_option("--dt", eo.dt, "Euler step");
    ex->add_option("--seed", eo.seed, "RNG seed");
    ex->add_option("--out", eo.out, "output directory");

    CLI11_PARSE(app, argc, argv);

    CheckList checks;
    try {
        if (fwd->parsed()) run_forward(fo, checks);
        else if (inv->parsed()) run_inverse(io, checks);
        else if (sim->parsed()) run_simulate(so, checks);
        else if (chk->parsed()) run_check(co, checks);
        else if (ex->parsed()) run_example(eo, checks);
    } catch (const std::exception& e) {
        checks.hard_fail("command", e.what());
    }
    if (checks.failures > 0) {
        std::printf("FAILURES %d\n", checks.failures);
        return 1;
    }
    return 0;
}
