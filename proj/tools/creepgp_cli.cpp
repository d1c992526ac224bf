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

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "creepgp/commands.hpp"

using namespace creepgp;

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("-c,--config", c.config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("-s,--seed", c.seed, "override the configured seed");
    cmd->add_option("-o,--out", c.out, "override the output directory");
}

RunConfig resolve(const Common& c) {
    RunConfig config = RunConfig::load(c.config);
    if (c.seed) config.set_seed(*c.seed);
    if (c.out) config.output_dir = *c.out;
    config.validate();
    return config;
}

Paths to_paths(const std::vector<std::string>& files) { return Paths(files.begin(), files.end()); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"creepgp: Bayesian calibration of concrete creep with a physics-informed Gaussian process"};
    app.require_subcommand(1);

    Common common;
    std::vector<std::string> data, chains;
    std::vector<double> times;
    std::string study_kind;

    auto* calibrate = app.add_subcommand("calibrate", "calibrate model parameters against creep records");
    add_common(calibrate, common);
    calibrate->add_option("-d,--data", data, "creep record CSV files")->required();

    auto* predict = app.add_subcommand("predict", "posterior predictive from saved chains");
    add_common(predict, common);
    predict->add_option("--chains", chains, "chain CSV files written by calibrate")->required();
    predict->add_option("-d,--data", data, "the creep records used for calibration")->required();
    predict->add_option("-t,--times", times, "query times in days since loading")->required()->delimiter(',');

    auto* sensitivity = app.add_subcommand("sensitivity", "Sobol indices of the creep model over duration");
    add_common(sensitivity, common);

    auto* study = app.add_subcommand("study", "recalibrate under varying data preparation");
    add_common(study, common);
    study->add_option("kind", study_kind, "sampling | duration | preload")
        ->required()
        ->check(CLI::IsMember({"sampling", "duration", "preload"}));
    study->add_option("-d,--data", data, "creep record CSV files")->required();

    auto* simulate = app.add_subcommand("simulate", "write synthetic creep records");
    add_common(simulate, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const RunConfig config = resolve(common);
        if (*calibrate) return cmd_calibrate(config, to_paths(data), std::cout);
        if (*predict) return cmd_predict(config, to_paths(chains), to_paths(data), times, std::cout);
        if (*sensitivity) return cmd_sensitivity(config, std::cout);
        if (*study) return cmd_study(study_kind_from_string(study_kind), config, to_paths(data), std::cout);
        if (*simulate) return cmd_simulate(config, std::cout);
    } catch (...) {
        return report_error(std::cerr);
    }
    return kExitUsage;
}
