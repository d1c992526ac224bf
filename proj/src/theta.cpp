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

#include "creepgp/theta.hpp"

#include <cmath>
#include <limits>

#include "creepgp/errors.hpp"

namespace creepgp {

ThetaLayout::ThetaLayout(ModelVariant variant) : variant_(std::move(variant)) {
    for (CreepParam p : variant_.free_parameters()) names_.emplace_back(to_string(p));
    names_.emplace_back(kNoiseStdName);
    names_.emplace_back(kSignalStdName);
    names_.emplace_back(kLengthScaleName);
}

std::size_t ThetaLayout::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return i;
    throw ConfigError("theta has no coordinate named '" + std::string(name) + "'");
}

void ThetaLayout::check(std::span<const double> theta) const {
    if (theta.size() != dim())
        throw ConfigError("theta has dimension " + std::to_string(theta.size()) + ", variant expects " +
                          std::to_string(dim()));
}

CreepParameters ThetaLayout::creep_parameters(std::span<const double> theta) const {
    check(theta);
    return resolve_parameters(variant_, theta.first(variant_.free_count()));
}

KernelHyperparameters ThetaLayout::hyperparameters(std::span<const double> theta) const {
    check(theta);
    KernelHyperparameters h;
    h.noise_std = theta[noise_index()];
    h.signal_std = theta[signal_index()];
    h.length_scale = theta[length_scale_index()];
    return h;
}

std::vector<double> ThetaLayout::pack(const CreepParameters& params,
                                      const KernelHyperparameters& hyper) const {
    std::vector<double> theta;
    theta.reserve(dim());
    for (CreepParam p : variant_.free_parameters()) {
        switch (p) {
            case CreepParam::t0_eff: theta.push_back(params.t0_eff()); break;
            case CreepParam::h0: theta.push_back(params.h0()); break;
            case CreepParam::n: theta.push_back(params.n()); break;
        }
    }
    theta.push_back(hyper.noise_std);
    theta.push_back(hyper.signal_std);
    theta.push_back(hyper.length_scale);
    return theta;
}

PriorSet::PriorSet(std::map<std::string, UniformPrior> bounds) {
    for (const auto& [name, prior] : bounds) set(name, prior);
}

PriorSet PriorSet::defaults() {
    return PriorSet({{"t0_eff", {0.0, 100.0}},
                     {"h0", {10.0, 500.0}},
                     {"n", {0.2, 0.5}},
                     {std::string(kNoiseStdName), {0.0, 10.0}},
                     {std::string(kSignalStdName), {0.0, 100.0}},
                     {std::string(kLengthScaleName), {0.0, 1000.0}}});
}

void PriorSet::set(const std::string& name, UniformPrior prior) {
    if (!(std::isfinite(prior.lower) && std::isfinite(prior.upper) && prior.lower < prior.upper))
        throw ConfigError("prior for '" + name + "' needs finite lower < upper");
    bounds_[name] = prior;
}

const UniformPrior& PriorSet::at(const std::string& name) const {
    auto it = bounds_.find(name);
    if (it == bounds_.end()) throw ConfigError("no prior configured for '" + name + "'");
    return it->second;
}

std::vector<UniformPrior> PriorSet::box(const ThetaLayout& layout) const {
    std::vector<UniformPrior> out;
    out.reserve(layout.dim());
    for (const auto& name : layout.names()) out.push_back(at(name));
    return out;
}

double PriorSet::log_density(const ThetaLayout& layout, std::span<const double> theta) const {
    return creepgp::log_density(box(layout), theta);
}

double log_density(std::span<const UniformPrior> box, std::span<const double> theta) {
    if (box.size() != theta.size()) throw ConfigError("prior box and theta differ in dimension");
    double lp = 0.0;
    for (std::size_t i = 0; i < box.size(); ++i) {
        if (!box[i].contains(theta[i])) return -std::numeric_limits<double>::infinity();
        lp -= std::log(box[i].width());
    }
    return lp;
}

}  // namespace creepgp
