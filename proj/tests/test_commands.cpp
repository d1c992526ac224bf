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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "creepgp/commands.hpp"
#include "creepgp/data_pipeline.hpp"
#include "creepgp/errors.hpp"
#include "creepgp/studies.hpp"
#include "doctest.h"

using namespace creepgp;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("creepgp_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

json base_doc() {
    return json::parse(R"({
      "seed": 3,
      "environment": {"relative_humidity": 65, "mean_compressive_strength": 38, "load_age": 28},
      "variant": {"free": ["h0", "n"], "fixed": {"t0_eff": 32.5}},
      "mcmc": {"iterations": 3000, "burn_in": 1000, "chains": 2},
      "prediction": {"points": 20, "subsample": 50},
      "sensitivity": {"base_sample_size": 256, "bootstrap_resamples": 20, "durations": [10, 100, 1000]},
      "study": {"durations": [40, 100], "count": 30},
      "simulate": {"scheme": {"kind": "logarithmic", "count": 40, "min_time": 0.01}}
    })");
}

RunConfig config_in(const fs::path& dir, json doc = base_doc()) {
    RunConfig c = RunConfig::from_json(doc);
    c.output_dir = dir;
    c.validate();
    return c;
}

std::string slurp(const fs::path& file) {
    std::ifstream in(file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config parsing is strict") {
    CHECK_NOTHROW(RunConfig::from_json(base_doc()));
    json doc = base_doc();
    doc["colour"] = "blue";
    CHECK_THROWS_AS(RunConfig::from_json(doc), ConfigError);
    doc = base_doc();
    doc["mcmc"]["iteration"] = 10;
    CHECK_THROWS_AS(RunConfig::from_json(doc), ConfigError);
    doc = base_doc();
    doc.erase("environment");
    CHECK_THROWS_AS(RunConfig::from_json(doc), ConfigError);
    doc = base_doc();
    doc["mcmc"]["proposal"] = "gibbs";
    CHECK_THROWS(RunConfig::from_json(doc));
    doc = base_doc();
    doc["variant"]["free"] = json::array({"h0", "q"});
    CHECK_THROWS(RunConfig::from_json(doc));
    doc = base_doc();
    doc["priors"] = {{"h0", {100, 10}}};
    CHECK_THROWS(RunConfig::from_json(doc).validate());
    doc = base_doc();
    doc["environment"]["relative_humidity"] = 120;
    CHECK_THROWS(RunConfig::from_json(doc).validate());
}

TEST_CASE("config survives a JSON round trip") {
    json doc = base_doc();
    doc["mcmc"]["proposal"] = "diagonal";
    doc["mcmc"]["space"] = "native";
    doc["truncate_days"] = 50;
    const RunConfig a = RunConfig::from_json(doc);
    const json first = a.to_json();
    const json second = RunConfig::from_json(first).to_json();
    CHECK(first == second);
    CHECK(first["mcmc"]["proposal"] == "diagonal");
    CHECK(first["mcmc"]["space"] == "native");
    CHECK(first["seed"] == 3);
}

TEST_CASE("set_seed reaches every seeded component") {
    RunConfig c = RunConfig::from_json(base_doc());
    c.set_seed(77);
    CHECK(c.seed == 77);
    CHECK(c.mcmc.seed == 77);
    CHECK(c.sensitivity.seed == 77);
}

TEST_CASE("simulate writes reproducible datasets") {
    const auto dir = scratch("simulate");
    std::ostringstream log;
    REQUIRE(cmd_simulate(config_in(dir / "a"), log) == kExitOk);
    REQUIRE(cmd_simulate(config_in(dir / "b"), log) == kExitOk);
    const auto a = slurp(dir / "a" / "synthetic.csv");
    CHECK(!a.empty());
    CHECK(a == slurp(dir / "b" / "synthetic.csv"));
    CHECK(fs::exists(dir / "a" / "config.resolved.json"));
    CHECK(fs::exists(dir / "a" / "run_metadata.json"));

    json other = base_doc();
    other["seed"] = 4;
    REQUIRE(cmd_simulate(config_in(dir / "c", other), log) == kExitOk);
    CHECK(a != slurp(dir / "c" / "synthetic.csv"));
}

TEST_CASE("noise-free simulation reproduces the model curve") {
    const auto dir = scratch("noise_free");
    json doc = base_doc();
    doc["simulate"]["kernel"] = {{"sigma_s", 0.0}, {"length_scale", 30}, {"sigma_n", 0.0}};
    const RunConfig cfg = config_in(dir, doc);
    std::ostringstream log;
    REQUIRE(cmd_simulate(cfg, log) == kExitOk);
    const auto d = load_dataset(dir / "synthetic.csv");
    const CreepParameters truth(cfg.simulate.t0_eff, cfg.simulate.h0, cfg.simulate.n);
    const auto t = d.times();
    const auto y = d.values();
    for (std::size_t i = 0; i < t.size(); ++i)
        CHECK(y[i] == doctest::Approx(creep_coefficient_elapsed(t[i], cfg.environment, truth)).epsilon(1e-12));
}

TEST_CASE("simulate scenarios carry preload intensities") {
    const auto dir = scratch("scenarios");
    json doc = base_doc();
    doc["simulate"]["scenarios"] = json::parse(R"([
      {"specimen_id": "p0", "preload_intensity": 0.0},
      {"specimen_id": "p30", "preload_intensity": 0.3, "h0": 80},
      {"specimen_id": "p50", "preload_intensity": 0.5, "n": 0.3}
    ])");
    std::ostringstream log;
    REQUIRE(cmd_simulate(config_in(dir, doc), log) == kExitOk);
    for (const auto& [id, pi] : {std::pair{"p0", 0.0}, std::pair{"p30", 0.3}, std::pair{"p50", 0.5}}) {
        const auto d = load_dataset(dir / (std::string(id) + ".csv"));
        CHECK(d.specimen_id() == id);
        REQUIRE(d.preload_intensity());
        CHECK(*d.preload_intensity() == pi);
    }
    doc["simulate"]["scenarios"][1]["h0"] = -5;
    CHECK_THROWS_AS(cmd_simulate(config_in(dir, doc), log), ConfigError);
}

TEST_CASE("sensitivity output is deterministic") {
    const auto dir = scratch("sensitivity");
    std::ostringstream log;
    REQUIRE(cmd_sensitivity(config_in(dir / "a"), log) == kExitOk);
    REQUIRE(cmd_sensitivity(config_in(dir / "b"), log) == kExitOk);
    const auto a = slurp(dir / "a" / "sensitivity.csv");
    CHECK(a == slurp(dir / "b" / "sensitivity.csv"));
    std::istringstream lines(a);
    std::string line;
    std::size_t rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows > 3);
}

TEST_CASE("calibrate then predict") {
    const auto dir = scratch("calibrate");
    std::ostringstream log;
    const RunConfig cfg = config_in(dir);
    REQUIRE(cmd_simulate(cfg, log) == kExitOk);
    const fs::path data = dir / "synthetic.csv";

    const RunConfig cal = config_in(dir / "cal");
    const int code = cmd_calibrate(cal, {data}, log);
    CHECK((code == kExitOk || code == kExitDiagnostics));
    for (const char* f : {"chain_0.csv", "chain_1.csv", "summary.csv", "correlation.csv", "predictive.csv",
                          "diagnostics.json", "final_creep.json", "config.resolved.json"})
        CHECK(fs::exists(dir / "cal" / f));
    const auto final_creep = json::parse(slurp(dir / "cal" / "final_creep.json"));
    CHECK(final_creep["phi_inf_mean"].get<double>() > 0.0);

    const RunConfig pred = config_in(dir / "pred");
    CHECK(cmd_predict(pred, {dir / "cal" / "chain_0.csv"}, {data}, {1.0, 10.0, 1000.0}, log) == kExitOk);
    const auto out = slurp(dir / "pred" / "prediction.csv");
    CHECK(out.rfind("time_days,mean,std", 0) == 0);

    json three = base_doc();
    three["variant"] = {{"free", {"t0_eff", "h0", "n"}}};
    CHECK_THROWS_AS(cmd_predict(config_in(dir / "pred3", three), {dir / "cal" / "chain_0.csv"}, {data}, {1.0}, log),
                    ConfigError);
}

TEST_CASE("bad inputs map to validation exit codes") {
    const auto dir = scratch("bad_inputs");
    {
        std::ofstream(dir / "empty.csv") << "time_days,creep_coefficient\n";
    }
    std::ostringstream log;
    const RunConfig cfg = config_in(dir / "out");
    int code = kExitOk;
    try {
        code = cmd_calibrate(cfg, {dir / "empty.csv"}, log);
    } catch (...) {
        code = report_error(log);
    }
    CHECK(code == kExitValidation);
    try {
        code = cmd_calibrate(cfg, {dir / "missing.csv"}, log);
    } catch (...) {
        code = report_error(log);
    }
    CHECK(code == kExitValidation);
}

TEST_CASE("study bookkeeping") {
    const Environment env(65.0, 38.0, 28.0);
    std::vector<CreepDataset> data;
    for (int g = 0; g < 2; ++g) {
        data.push_back(synthesize(env, CreepParameters(32.5, 50.0 + 30.0 * g, 0.34), KernelHyperparameters{0.05, 30.0, 0.02},
                                  scheme_times(SamplingScheme{SamplingKind::logarithmic, 40, 0.01}, 100.0),
                                  static_cast<unsigned long long>(10 + g),
                                  "s" + std::to_string(g), 0.2 * g));
    }
    RunConfig cfg = RunConfig::from_json(base_doc());
    cfg.mcmc.iterations = 1500;
    cfg.mcmc.burn_in = 500;

    SUBCASE("duration") {
        const auto r = run_study(StudyKind::duration, std::span(data.data(), 1), cfg);
        REQUIRE(r.cases.size() == 2);
        CHECK(*r.cases[0].duration_days == 40.0);
        CHECK(*r.cases[1].duration_days == 100.0);
        CHECK(r.cases[0].seed == r.cases[1].seed);
        std::ostringstream csv;
        write_study_csv(csv, r);
        CHECK(csv.str().rfind("case,label,variant,scheme,duration_days,preload_intensity,seed,parameter,mean,std", 0) == 0);
    }
    SUBCASE("sampling") {
        const auto r = run_study(StudyKind::sampling, std::span(data.data(), 1), cfg);
        REQUIRE(r.cases.size() == 2);
        CHECK(*r.cases[0].scheme != *r.cases[1].scheme);
    }
    SUBCASE("preload") {
        std::size_t sunk = 0;
        const auto r = run_study(StudyKind::preload, data, cfg, [&](StudyCase&, const CalibrationResult&) { ++sunk; });
        CHECK(r.cases.size() == 4);
        CHECK(sunk == r.cases.size());
        for (const auto& c : r.cases) {
            REQUIRE(c.preload_intensity);
            CHECK(c.mean.size() == c.parameter_names.size());
            CHECK(c.phi_inf_mean > 0.0);
        }
    }
}
