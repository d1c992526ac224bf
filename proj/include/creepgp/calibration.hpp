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

#include <span>
#include <vector>

#include "creepgp/creep_model.hpp"
#include "creepgp/dataset.hpp"
#include "creepgp/gp_core.hpp"
#include "creepgp/mcmc.hpp"
#include "creepgp/theta.hpp"

namespace creepgp {

/// Horizon of the long-term prediction; phi_inf is the mixture mean at this time.
inline constexpr double kFinalCreepHorizonDays = 36500.0;

struct PredictionOptions {
    double horizon_days = kFinalCreepHorizonDays;
    double min_time = 0.01;
    std::size_t points = 200;
    std::size_t subsample = 200;

    /// Log-spaced from min_time to horizon_days, horizon included exactly.
    std::vector<double> grid() const;
    void validate() const;
};

struct CalibrationResult {
    ThetaLayout layout;
    std::vector<PosteriorChain> chains;
    ParameterSummary summary;
    DiagnosticsReport diagnostics;
    PredictiveDistribution prediction;
    double phi_inf_mean = 0.0;  ///< predictive mean at horizon_days
    double phi_inf_std = 0.0;
};

/// Sample the posterior for the pooled datasets and build the predictive curve.
CalibrationResult calibrate(std::span<const CreepDataset> datasets, const Environment& env,
                            const ModelVariant& variant, const PriorSet& priors, const McmcConfig& mcmc,
                            const PredictionOptions& prediction,
                            const DiagnosticsOptions& diagnostic_options = {});

}  // namespace creepgp
