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

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "creepgp/creep_model.hpp"
#include "creepgp/dataset.hpp"

namespace creepgp {

inline constexpr std::string_view kNoiseStdName = "sigma_n";
inline constexpr std::string_view kSignalStdName = "sigma_s";
inline constexpr std::string_view kLengthScaleName = "length_scale";

/**
 * Layout of the joint parameter vector theta:
 *
 *   [free creep parameters in (t0_eff, h0, n) order..., sigma_n, sigma_s, length_scale]
 *
 * sigma_n and sigma_s are standard deviations; they are squared where used.
 */
class ThetaLayout {
public:
    explicit ThetaLayout(ModelVariant variant);

    const ModelVariant& variant() const noexcept { return variant_; }
    std::size_t dim() const noexcept { return variant_.free_count() + 3; }
    std::size_t noise_index() const noexcept { return variant_.free_count(); }
    std::size_t signal_index() const noexcept { return variant_.free_count() + 1; }
    std::size_t length_scale_index() const noexcept { return variant_.free_count() + 2; }

    const std::vector<std::string>& names() const noexcept { return names_; }
    /// Throws ConfigError for unknown names.
    std::size_t index_of(std::string_view name) const;

    CreepParameters creep_parameters(std::span<const double> theta) const;
    KernelHyperparameters hyperparameters(std::span<const double> theta) const;
    std::vector<double> pack(const CreepParameters& params, const KernelHyperparameters& hyper) const;

private:
    void check(std::span<const double> theta) const;

    ModelVariant variant_;
    std::vector<std::string> names_;
};

struct UniformPrior {
    double lower;
    double upper;

    double width() const noexcept { return upper - lower; }
    /// Open interval; the endpoints carry no mass and several parameters must stay positive.
    bool contains(double x) const noexcept { return x > lower && x < upper; }
};

/// Independent uniform priors keyed by parameter name.
class PriorSet {
public:
    PriorSet() = default;
    explicit PriorSet(std::map<std::string, UniformPrior> bounds);

    /// t0_eff U(0,100), h0 U(10,500), n U(0.2,0.5), sigma_n U(0,10), sigma_s U(0,100), l U(0,1000).
    static PriorSet defaults();

    void set(const std::string& name, UniformPrior prior);
    const UniformPrior& at(const std::string& name) const;
    const std::map<std::string, UniformPrior>& all() const noexcept { return bounds_; }

    /// Bounds in theta order.
    std::vector<UniformPrior> box(const ThetaLayout& layout) const;

    /// Sum of log densities, or -infinity outside the support.
    double log_density(const ThetaLayout& layout, std::span<const double> theta) const;

private:
    std::map<std::string, UniformPrior> bounds_;
};

double log_density(std::span<const UniformPrior> box, std::span<const double> theta);

}  // namespace creepgp
