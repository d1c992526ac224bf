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
 * @file studies.hpp
 * @brief Harnesses that recalibrate under varying data preparation.
 *
 *  - sampling: the same records resampled equidistantly and logarithmically
 *  - duration: records truncated to each duration, then resampled
 *  - preload:  one calibration per preload-intensity group, for the
 *              configured (h0, n) variant and for n fixed
 *
 * Every case of a study runs with the same sampler seed.
 */

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "creepgp/calibration.hpp"
#include "creepgp/run_config.hpp"

namespace creepgp {

enum class StudyKind { sampling, duration, preload };

std::string_view to_string(StudyKind kind);
StudyKind study_kind_from_string(std::string_view name);

struct StudyCase {
    std::string label;
    std::string variant;  ///< free parameters joined by '+'
    std::optional<SamplingKind> scheme;
    std::optional<double> duration_days;
    std::optional<double> preload_intensity;
    std::uint64_t seed = 0;
    std::vector<std::string> parameter_names;
    std::vector<double> mean;
    std::vector<double> std_dev;
    double phi_inf_mean = 0.0;
    double phi_inf_std = 0.0;
    std::vector<std::string> warnings;
    std::filesystem::path directory;  ///< where chains and curves were written, if any

    double mean_of(std::string_view name) const;
    double std_of(std::string_view name) const;
};

struct StudyReport {
    StudyKind kind;
    double phi_inf_horizon_days = kFinalCreepHorizonDays;
    std::vector<StudyCase> cases;
};

/// Called after each calibration, e.g. to write its chains.
using CaseSink = std::function<void(StudyCase&, const CalibrationResult&)>;

StudyReport run_sampling_study(std::span<const CreepDataset> datasets, const RunConfig& config,
                               const CaseSink& sink = {});
StudyReport run_duration_study(std::span<const CreepDataset> datasets, const RunConfig& config,
                               const CaseSink& sink = {});
StudyReport run_preload_study(std::span<const CreepDataset> datasets, const RunConfig& config,
                              const CaseSink& sink = {});
StudyReport run_study(StudyKind kind, std::span<const CreepDataset> datasets, const RunConfig& config,
                      const CaseSink& sink = {});

/// Long format: case,label,variant,scheme,duration_days,preload_intensity,seed,parameter,mean,std
void write_study_csv(std::ostream& out, const StudyReport& report);

}  // namespace creepgp
