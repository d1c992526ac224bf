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

#include "creepgp/calibration.hpp"

#include <cmath>

#include "creepgp/data_pipeline.hpp"
#include "creepgp/errors.hpp"

namespace creepgp {

std::vector<double> PredictionOptions::grid() const {
    validate();
    return time_grid(SamplingKind::logarithmic, points, min_time, horizon_days);
}

void PredictionOptions::validate() const {
    if (!(min_time > 0.0 && horizon_days > min_time))
        throw ConfigError("prediction: need 0 < min_time < horizon_days");
    if (points < 2) throw ConfigError("prediction: at least 2 points");
    if (subsample == 0) throw ConfigError("prediction: subsample must be positive");
}

CalibrationResult calibrate(std::span<const CreepDataset> datasets, const Environment& env,
                            const ModelVariant& variant, const PriorSet& priors, const McmcConfig& mcmc,
                            const PredictionOptions& prediction,
                            const DiagnosticsOptions& diagnostic_options) {
    if (datasets.empty()) throw ValidationError("calibrate: no datasets");
    prediction.validate();
    const TrainingSet data = TrainingSet::pooled(datasets);
    CalibrationResult r{ThetaLayout(variant), {}, {}, {}, {}, 0.0, 0.0};
    r.chains = sample_posterior(data, env, r.layout, priors, mcmc);
    r.summary = summarize(r.chains);
    const auto box = priors.box(r.layout);
    r.diagnostics = diagnostics(r.chains, box, diagnostic_options);

    std::size_t total = 0;
    for (const auto& c : r.chains) total += c.size();
    const auto grid = prediction.grid();
    r.prediction = predictive_mixture(data, env, r.layout, r.chains, grid, std::min(prediction.subsample, total));
    r.phi_inf_mean = r.prediction.mean.back();
    r.phi_inf_std = std::sqrt(r.prediction.variance.back());
    return r;
}

}  // namespace creepgp
