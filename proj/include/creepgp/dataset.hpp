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

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace creepgp {

struct Observation {
    double time_days;          ///< elapsed days under load
    double creep_coefficient;
};

enum class DataSource { raw, resampled, synthetic };

struct KernelHyperparameters {
    double signal_std = 0.0;    ///< sigma_s, same units as the creep coefficient
    double length_scale = 1.0;  ///< l, days
    double noise_std = 0.0;     ///< sigma_n

    void validate() const;
};

/// Ground truth used to generate a synthetic dataset.
struct SyntheticTruth {
    double t0_eff;
    double h0;
    double n;
    KernelHyperparameters hyper;
    unsigned long long seed;
};

/**
 * A creep curve of one specimen (or one preload group).
 *
 * Times are strictly increasing and there are at least two observations.
 * Creep coefficients may dip slightly below zero: noisy early readings
 * are legitimate data and are not clipped.
 */
class CreepDataset {
public:
    CreepDataset(std::string specimen_id, std::optional<double> preload_intensity,
                 std::vector<Observation> observations, DataSource source = DataSource::raw);

    const std::string& specimen_id() const noexcept { return specimen_id_; }
    std::optional<double> preload_intensity() const noexcept { return preload_intensity_; }
    const std::vector<Observation>& observations() const noexcept { return observations_; }
    DataSource source() const noexcept { return source_; }
    const std::optional<SyntheticTruth>& truth() const noexcept { return truth_; }

    std::size_t size() const noexcept { return observations_.size(); }
    double first_time() const { return observations_.front().time_days; }
    double last_time() const { return observations_.back().time_days; }
    std::vector<double> times() const;
    std::vector<double> values() const;

    void set_truth(SyntheticTruth truth) { truth_ = truth; }

private:
    std::string specimen_id_;
    std::optional<double> preload_intensity_;
    std::vector<Observation> observations_;
    DataSource source_;
    std::optional<SyntheticTruth> truth_;
};

/// Flat (time, value) training vectors; may pool several specimens so times can repeat.
struct TrainingSet {
    std::vector<double> times;
    std::vector<double> values;

    std::size_t size() const noexcept { return times.size(); }
    bool empty() const noexcept { return times.empty(); }

    static TrainingSet from(const CreepDataset& dataset);
    static TrainingSet pooled(std::span<const CreepDataset> datasets);
};

}  // namespace creepgp
