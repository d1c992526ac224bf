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
#include <string>
#include <vector>

#include "creepgp/creep_model.hpp"
#include "creepgp/dataset.hpp"

namespace creepgp {

enum class SamplingKind { equidistant, logarithmic };

struct SamplingScheme {
    SamplingKind kind = SamplingKind::logarithmic;
    std::size_t count = 100;
    double min_time = 0.01;  ///< days; lower end of a logarithmic grid

    void validate() const;
};

std::string_view to_string(SamplingKind kind);
SamplingKind sampling_kind_from_string(std::string_view name);

/*
 * CSV format:
 *
 *   # specimen_id=NC1-NV-D28-15
 *   # preload_intensity=0.3
 *   time_days,creep_coefficient
 *   0.01,0.0123
 *   ...
 *
 * Metadata lines are optional and must precede the header. Both "key=value"
 * and "key: value" are accepted. LF and CRLF line endings are accepted.
 */
CreepDataset parse_dataset(std::istream& in, const std::string& fallback_id = "");
CreepDataset load_dataset(const std::filesystem::path& file);
void write_dataset(std::ostream& out, const CreepDataset& dataset);
void save_dataset(const std::filesystem::path& file, const CreepDataset& dataset);

/// `count` grid points from `first` to `last`; both endpoints exact.
std::vector<double> time_grid(SamplingKind kind, std::size_t count, double first, double last);

/// Linearly interpolate onto the scheme's grid over the dataset span. Never extrapolates.
CreepDataset resample(const CreepDataset& dataset, const SamplingScheme& scheme);

/// Interpolate at arbitrary times inside the data span.
CreepDataset resample_at(const CreepDataset& dataset, std::span<const double> times);

/// Keep observations with time <= duration.
CreepDataset truncate(const CreepDataset& dataset, double duration);

/// Scheme times for a record of the given length: [0, duration] or [min_time, duration].
std::vector<double> scheme_times(const SamplingScheme& scheme, double duration);

/**
 * Draw a synthetic creep curve: model mean + one correlated SE-kernel draw
 * + iid noise. Deterministic given the seed.
 */
CreepDataset synthesize(const Environment& env, const CreepParameters& truth,
                        const KernelHyperparameters& hyper, std::span<const double> times,
                        unsigned long long seed, std::string specimen_id = "synthetic",
                        std::optional<double> preload_intensity = std::nullopt);

CreepDataset synthesize(const Environment& env, const CreepParameters& truth,
                        const KernelHyperparameters& hyper, const SamplingScheme& scheme,
                        double duration, unsigned long long seed);

}  // namespace creepgp
