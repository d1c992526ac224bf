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

#include "creepgp/dataset.hpp"

#include <cmath>

#include "creepgp/errors.hpp"

namespace creepgp {

void KernelHyperparameters::validate() const {
    if (!(std::isfinite(signal_std) && signal_std >= 0.0))
        throw DomainError("kernel: signal std must be finite and >= 0");
    if (!(std::isfinite(length_scale) && length_scale > 0.0))
        throw DomainError("kernel: length scale must be finite and > 0");
    if (!(std::isfinite(noise_std) && noise_std >= 0.0))
        throw DomainError("kernel: noise std must be finite and >= 0");
}

CreepDataset::CreepDataset(std::string specimen_id, std::optional<double> preload_intensity,
                           std::vector<Observation> observations, DataSource source)
    : specimen_id_(std::move(specimen_id)),
      preload_intensity_(preload_intensity),
      observations_(std::move(observations)),
      source_(source) {
    if (observations_.size() < 2)
        throw ValidationError("dataset '" + specimen_id_ + "' needs at least 2 observations, has " +
                              std::to_string(observations_.size()));
    if (preload_intensity_ && !(std::isfinite(*preload_intensity_) && *preload_intensity_ >= 0.0))
        throw ValidationError("dataset '" + specimen_id_ + "': preload intensity must be >= 0");
    for (std::size_t i = 0; i < observations_.size(); ++i) {
        const auto& o = observations_[i];
        if (!std::isfinite(o.time_days) || o.time_days < 0.0 || !std::isfinite(o.creep_coefficient))
            throw ValidationError("dataset '" + specimen_id_ + "': observation " + std::to_string(i) +
                                  " has a negative or non-finite value");
        if (i > 0 && !(o.time_days > observations_[i - 1].time_days))
            throw ValidationError("dataset '" + specimen_id_ + "': times must be strictly increasing (observation " +
                                  std::to_string(i) + ")");
    }
}

std::vector<double> CreepDataset::times() const {
    std::vector<double> out;
    out.reserve(size());
    for (const auto& o : observations_) out.push_back(o.time_days);
    return out;
}

std::vector<double> CreepDataset::values() const {
    std::vector<double> out;
    out.reserve(size());
    for (const auto& o : observations_) out.push_back(o.creep_coefficient);
    return out;
}

TrainingSet TrainingSet::from(const CreepDataset& dataset) {
    return {dataset.times(), dataset.values()};
}

TrainingSet TrainingSet::pooled(std::span<const CreepDataset> datasets) {
    TrainingSet out;
    for (const auto& d : datasets) {
        for (const auto& o : d.observations()) {
            out.times.push_back(o.time_days);
            out.values.push_back(o.creep_coefficient);
        }
    }
    return out;
}

}  // namespace creepgp
