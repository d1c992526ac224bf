/*
 * Copyright 2026 The creepgp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "creepgp/errors.hpp"
#include "creepgp/gp_core.hpp"
#include "creepgp/mcmc.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace creepgp;

namespace {

// N(mu, Sigma) with mu = (3, -2), sd = (1, 2), correlation 0.8
struct Gaussian2 {
    double m0 = 3.0, m1 = -2.0, s0 = 1.0, s1 = 2.0, rho = 0.8;
    double operator()(std::span<const double> x) const {
        const double a = (x[0] - m0) / s0, b = (x[1] - m1) / s1;
        return -0.5 * (a * a - 2.0 * rho * a * b + b * b) / (1.0 - rho * rho);
    }
};

McmcConfig short_config(std::size_t iterations, std::size_t burn_in, std::size_t chains, std::uint64_t seed) {
    McmcConfig c;
    c.iterations = iterations;
    c.burn_in = burn_in;
    c.chains = chains;
    c.seed = seed;
    return c;
}

PosteriorChain chain_of(std::vector<std::vector<double>> rows, std::vector<std::string> names) {
    PosteriorChain c(std::move(names));
    for (const auto& r : rows) c.append(r, 0.0);
    return c;
}

PosteriorChain column_chain(const std::vector<double>& values) {
    PosteriorChain c({"x"});
    for (double v : values) c.append(std::vector<double>{v}, 0.0);
    return c;
}

}  // namespace

TEST_CASE("recovers the moments of a correlated Gaussian") {
    const Gaussian2 g;
    const std::vector<UniformPrior> box{{-50.0, 50.0}, {-50.0, 50.0}};
    for (ProposalKind kind : {ProposalKind::covariance, ProposalKind::diagonal}) {
        for (SamplingSpace space : {SamplingSpace::logit, SamplingSpace::native}) {
            CAPTURE(to_string(kind));
            CAPTURE(to_string(space));
            McmcConfig cfg = short_config(50000, 10000, 4, 21);
            cfg.proposal = kind;
            cfg.space = space;
            const auto chains = run_chains(g, box, {"a", "b"}, cfg);
            const auto s = summarize(chains);
            CHECK(s.mean[0] == doctest::Approx(g.m0).epsilon(0.05));
            CHECK(s.mean[1] == doctest::Approx(g.m1).epsilon(0.05));
            CHECK(s.std_dev[0] * s.std_dev[0] == doctest::Approx(1.0).epsilon(0.05));
            CHECK(s.std_dev[1] * s.std_dev[1] == doctest::Approx(4.0).epsilon(0.05));
            CHECK(s.correlation(0, 1) * s.std_dev[0] * s.std_dev[1] == doctest::Approx(1.6).epsilon(0.05));
            CHECK(std::abs(s.correlation(0, 1) - g.rho) < 0.05);
            for (const auto& c : chains) {
                CHECK(c.acceptance_rate > 0.1);
                CHECK(c.acceptance_rate < 0.6);
                CHECK(c.size() == 40000);
            }
        }
    }
}

TEST_CASE("uniform target") {
    const LogDensity flat = [](std::span<const double>) { return 0.0; };
    const std::vector<UniformPrior> box{{0.0, 1.0}};
    McmcConfig cfg = short_config(205000, 5000, 1, 4);
    const auto chain = run_chain(flat, box, {"u"}, cfg, 0);
    const auto x = oracle::thin(chain.column(0), 20);
    REQUIRE(x.size() == 10000);
    CHECK(oracle::ks_uniform(x, 0.0, 1.0) < oracle::ks_critical_1pct(x.size()));
}

TEST_CASE("prior-only sampling centres on the box midpoints") {
    const ThetaLayout layout(ModelVariant::two_parameter(32.5));
    const PriorSet priors = PriorSet::defaults();
    const auto box = priors.box(layout);
    const auto chains =
        sample_posterior(TrainingSet{}, Environment(65.0, 38.0, 28.0), layout, priors, short_config(20000, 2000, 2, 8));
    const auto s = summarize(chains);
    const auto d = diagnostics(chains, box);
    for (std::size_t i = 0; i < layout.dim(); ++i) {
        const double mid = 0.5 * (box[i].lower + box[i].upper);
        const double se = s.std_dev[i] / std::sqrt(d.parameters[i].ess);
        CAPTURE(layout.names()[i]);
        CHECK(std::abs(s.mean[i] - mid) < 3.0 * se);
    }
}

TEST_CASE("seeded chains are bit-identical and independent of threading") {
    const Gaussian2 g;
    const std::vector<UniformPrior> box{{-50.0, 50.0}, {-50.0, 50.0}};
    const auto cfg = short_config(3000, 1000, 3, 99);
    const auto a = run_chains(g, box, {"a", "b"}, cfg);
    const auto b = run_chains(g, box, {"a", "b"}, cfg);
    for (std::size_t c = 0; c < 3; ++c) {
        CHECK(a[c].column(0) == b[c].column(0));
        CHECK(a[c].column(1) == b[c].column(1));
        CHECK(a[c].log_posterior_trace() == b[c].log_posterior_trace());
        const auto single = run_chain(g, box, {"a", "b"}, cfg, c);
        CHECK(single.column(0) == a[c].column(0));
    }
    CHECK(a[0].column(0) != a[1].column(0));
    auto other = cfg;
    other.seed = 100;
    CHECK(run_chains(g, box, {"a", "b"}, other)[0].column(0) != a[0].column(0));
}

TEST_CASE("samples respect the prior support") {
    const ThetaLayout layout(ModelVariant::three_parameter());
    const PriorSet priors = PriorSet::defaults();
    const auto box = priors.box(layout);
    const Environment env(65.0, 38.0, 28.0);
    const TrainingSet data{{0.1, 1.0, 5.0, 20.0, 60.0, 100.0}, {0.2, 0.45, 0.7, 1.0, 1.25, 1.35}};
    for (SamplingSpace space : {SamplingSpace::logit, SamplingSpace::native}) {
        auto cfg = short_config(4000, 1000, 2, 13);
        cfg.space = space;
        const auto chains = sample_posterior(data, env, layout, priors, cfg);
        std::size_t violations = 0;
        for (const auto& c : chains)
            for (std::size_t r = 0; r < c.size(); ++r)
                for (std::size_t i = 0; i < layout.dim(); ++i) violations += !box[i].contains(c.sample(r)[i]);
        CHECK(violations == 0);
        for (const auto& c : chains) {
            CHECK(c.acceptance_rate >= 0.0);
            CHECK(c.acceptance_rate <= 1.0);
        }
    }
}

TEST_CASE("doubling flat prior widths leaves the posterior unchanged") {
    const Gaussian2 g;
    const auto cfg = short_config(30000, 5000, 4, 31);
    const auto narrow = summarize(run_chains(g, std::vector<UniformPrior>{{-10.0, 20.0}, {-20.0, 20.0}}, {"a", "b"}, cfg));
    const auto wide_chains = run_chains(g, std::vector<UniformPrior>{{-25.0, 35.0}, {-40.0, 40.0}}, {"a", "b"}, cfg);
    const auto wide = summarize(wide_chains);
    const auto d = diagnostics(wide_chains);
    for (std::size_t i = 0; i < 2; ++i) {
        const double se = wide.std_dev[i] / std::sqrt(d.parameters[i].ess);
        CHECK(std::abs(narrow.mean[i] - wide.mean[i]) < 3.0 * std::sqrt(2.0) * se);
    }
}

TEST_CASE("failing likelihood evaluations count as rejections") {
    const LogDensity target = [](std::span<const double> x) -> double {
        if (x[0] > 0.9) throw NumericalError("synthetic failure");
        return 0.0;
    };
    const std::vector<UniformPrior> box{{0.0, 1.0}};
    auto cfg = short_config(6000, 1000, 1, 2);
    const auto chain = run_chain(target, box, {"x"}, cfg, 0);
    CHECK(chain.numerical_rejections > 0);
    for (double v : chain.column(0)) CHECK(v <= 0.9);
}

TEST_CASE("a chain that never moves is a diagnostic error") {
    int calls = 0;
    const LogDensity target = [&calls](std::span<const double>) {
        return calls++ == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    };
    const std::vector<UniformPrior> box{{0.0, 1.0}};
    CHECK_THROWS_AS(run_chain(target, box, {"x"}, short_config(500, 100, 1, 1), 0), DiagnosticError);
    const LogDensity nowhere = [](std::span<const double>) { return -std::numeric_limits<double>::infinity(); };
    CHECK_THROWS_AS(run_chain(nowhere, box, {"x"}, short_config(500, 100, 1, 1), 0), DiagnosticError);
}

TEST_CASE("configuration validation") {
    McmcConfig c;
    c.burn_in = c.iterations;
    CHECK_THROWS_AS(c.validate(2), ConfigError);
    c = McmcConfig{};
    c.chains = 0;
    CHECK_THROWS_AS(c.validate(2), ConfigError);
    c = McmcConfig{};
    c.proposal_scales = {1.0};
    CHECK_THROWS_AS(c.validate(2), ConfigError);
    c.proposal_scales = {1.0, 0.0};
    CHECK_THROWS_AS(c.validate(2), ConfigError);
    c.proposal_scales = {1.0, 0.5};
    CHECK_NOTHROW(c.validate(2));
    CHECK(c.iterations == 50000);
    CHECK(c.burn_in == 20000);
    CHECK(c.chains == 4);
}

TEST_CASE("summaries") {
    SUBCASE("constant chain") {
        const auto c = chain_of({{1.0, 2.0}, {1.0, 2.0}, {1.0, 2.0}}, {"a", "b"});
        const auto s = summarize(std::vector<PosteriorChain>{c});
        CHECK(s.std_dev[0] == 0.0);
        CHECK(s.degenerate[0]);
        CHECK(s.correlation(0, 1) == 0.0);
        CHECK(s.correlation(0, 0) == 1.0);
    }
    SUBCASE("perfect anti-correlation") {
        std::vector<std::vector<double>> rows;
        for (int i = 0; i < 100; ++i) rows.push_back({0.1 * i, 5.0 - 0.3 * i});
        const auto s = summarize(std::vector<PosteriorChain>{chain_of(rows, {"a", "b"})});
        CHECK(std::abs(s.correlation(0, 1) + 1.0) < 1e-12);
        CHECK(s.correlation(0, 1) == s.correlation(1, 0));
    }
    SUBCASE("pooled over chains") {
        const auto a = chain_of({{0.0}, {2.0}}, {"x"});
        const auto b = chain_of({{4.0}, {6.0}}, {"x"});
        const auto s = summarize(std::vector<PosteriorChain>{a, b});
        CHECK(s.mean[0] == 3.0);
        CHECK(s.std_dev[0] == doctest::Approx(std::sqrt(20.0 / 3.0)));
        CHECK(s.samples == 4);
    }
}

TEST_CASE("effective sample size") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> white(20000);
    for (auto& v : white) v = z(rng);
    CHECK(effective_sample_size(white) == doctest::Approx(20000.0).epsilon(0.2));

    std::vector<double> ar(200000);
    double x = 0.0;
    for (auto& v : ar) {
        x = 0.9 * x + z(rng);
        v = x;
    }
    const double ratio = effective_sample_size(ar) / 200000.0;
    const double expected = (1.0 - 0.9) / (1.0 + 0.9);
    CHECK(ratio > expected / 1.5);
    CHECK(ratio < expected * 1.5);
}

TEST_CASE("split R-hat") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> z(0.0, 1.0);
    // halves are identical blocks, so only the (n-1)/n factor separates R-hat from 1
    std::vector<double> half(600000);
    for (auto& v : half) v = z(rng);
    std::vector<double> chain(half);
    chain.insert(chain.end(), half.begin(), half.end());
    const std::vector<std::vector<double>> same{chain, chain};
    CHECK(std::abs(split_rhat(same) - 1.0) < 1e-6);

    std::vector<double> shifted(chain);
    for (auto& v : shifted) v += 3.0;
    const std::vector<std::vector<double>> apart{chain, shifted};
    CHECK(split_rhat(apart) > 1.5);

    const auto report = diagnostics(std::vector<PosteriorChain>{column_chain(chain), column_chain(shifted)});
    CHECK(report.rhat_failed);
    CHECK_FALSE(report.ok());
}

TEST_CASE("boundary mass") {
    std::vector<double> near_lower;
    for (int i = 0; i < 1000; ++i) near_lower.push_back(i < 300 ? 10.5 : 100.0 + i * 0.01);
    PosteriorChain c({"h0"});
    for (double v : near_lower) c.append(std::vector<double>{v}, 0.0);
    const std::vector<UniformPrior> box{{10.0, 500.0}};
    const auto report = diagnostics(std::vector<PosteriorChain>{c}, box);
    CHECK(report.parameters[0].lower_boundary_mass == doctest::Approx(0.3));
    CHECK(report.parameters[0].upper_boundary_mass == 0.0);
    CHECK(report.boundary_hugging);
    CHECK(std::isnan(report.parameters[0].rhat));
}

TEST_CASE("chain files round trip") {
    PosteriorChain c({"h0", "n", "sigma_n", "sigma_s", "length_scale"});
    c.append(std::vector<double>{50.123456789012345, 0.3, 0.05, 0.1, 30.0}, -12.5);
    c.append(std::vector<double>{51.0, 1.0 / 3.0, 0.049, 0.11, 31.0}, -13.25);
    c.seed = 123456789012345ULL;
    c.acceptance_rate = 0.31;
    std::stringstream io;
    write_chain(io, c);
    const auto back = read_chain(io);
    CHECK(back.parameter_names() == c.parameter_names());
    CHECK(back.column(0) == c.column(0));
    CHECK(back.column(1) == c.column(1));
    CHECK(back.log_posterior_trace() == c.log_posterior_trace());
    CHECK(back.seed == c.seed);
    CHECK(back.acceptance_rate == 0.31);
}
