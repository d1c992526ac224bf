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

#pragma once

/**
 * @file run_config.hpp
 * @brief JSON run configuration shared by all subcommands.
 *
 * The document layout is published in schema/config.schema.json. Unknown
 * keys are rejected; every section except "environment" is optional.
 */

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "creepgp/calibration.hpp"
#include "creepgp/creep_model.hpp"
#include "creepgp/data_pipeline.hpp"
#include "creepgp/mcmc.hpp"
#include "creepgp/sobol.hpp"
#include "creepgp/theta.hpp"

namespace creepgp {

struct SimulationScenario {
    std::string specimen_id;
    std::optional<double> preload_intensity;
    std::optional<double> t0_eff;  ///< overrides of the base truth
    std::optional<double> h0;
    std::optional<double> n;
};

struct SimulationConfig {
    double t0_eff = 32.5;
    double h0 = 50.0;
    double n = 0.34;
    KernelHyperparameters kernel{0.1, 30.0, 0.05};
    SamplingScheme scheme{};
    double duration_days = 100.0;
    std::vector<SimulationScenario> scenarios;  ///< empty: one dataset from the base truth
};

struct StudyConfig {
    std::vector<double> durations{10, 20, 30, 40, 60, 80, 100};
    double fixed_n = 0.34;
    std::size_t count = 100;
    double min_time = 0.01;
};

struct RunConfig {
    RunConfig(Environment env, ModelVariant variant);

    Environment environment;
    ModelVariant variant;
    PriorSet priors = PriorSet::defaults();
    McmcConfig mcmc{};
    std::optional<SamplingScheme> sampling;  ///< resample input data when set
    std::optional<double> truncate_days;
    PredictionOptions prediction{};
    SensitivityInputSpec sensitivity = SensitivityInputSpec::defaults();
    StudyConfig study{};
    SimulationConfig simulate{};
    std::filesystem::path output_dir = "creepgp_out";
    std::uint64_t seed = 1;

    /// Propagate `seed` to every seeded component.
    void set_seed(std::uint64_t value);
    void validate() const;

    static RunConfig from_json(const nlohmann::json& doc);
    static RunConfig load(const std::filesystem::path& file);
    nlohmann::json to_json() const;
};

}  // namespace creepgp
