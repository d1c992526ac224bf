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

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "creepgp/run_config.hpp"
#include "creepgp/studies.hpp"

namespace creepgp {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitValidation = 2,
    kExitNumerical = 3,
    kExitDiagnostics = 4,
};

using Paths = std::vector<std::filesystem::path>;

/// Load, truncate and resample input files as the config asks.
std::vector<CreepDataset> load_inputs(const Paths& files, const RunConfig& config);

/*
 * Each command writes into config.output_dir:
 *   config.resolved.json  resolved configuration including seeds
 *   run_metadata.json     wall-clock timestamp (the only non-reproducible file)
 * plus its own outputs. Return values follow ExitCode.
 */
int cmd_calibrate(const RunConfig& config, const Paths& data_files, std::ostream& log);
int cmd_predict(const RunConfig& config, const Paths& chain_files, const Paths& data_files,
                const std::vector<double>& query_times, std::ostream& log);
int cmd_sensitivity(const RunConfig& config, std::ostream& log);
int cmd_study(StudyKind kind, const RunConfig& config, const Paths& data_files, std::ostream& log);
int cmd_simulate(const RunConfig& config, std::ostream& log);

/// Map an in-flight exception to its exit code and print it.
int report_error(std::ostream& err);

}  // namespace creepgp
