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

#include "creepgp/studies.hpp"

#include <map>
#include <ostream>

#include "creepgp/errors.hpp"
#include "creepgp/format.hpp"

namespace creepgp {

namespace {

std::string variant_label(const ModelVariant& v) {
    std::string out;
    for (CreepParam p : v.free_parameters()) {
        if (!out.empty()) out += '+';
        out += to_string(p);
    }
    return out;
}

StudyCase run_case(std::string label, std::vector<CreepDataset> data, const ModelVariant& variant,
                   const RunConfig& config, const CaseSink& sink) {
    const CalibrationResult r =
        calibrate(data, config.environment, variant, config.priors, config.mcmc, config.prediction);
    StudyCase c;
    c.label = std::move(label);
    c.variant = variant_label(variant);
    c.seed = config.mcmc.seed;
    c.parameter_names = r.summary.names;
    c.mean = r.summary.mean;
    c.std_dev = r.summary.std_dev;
    c.phi_inf_mean = r.phi_inf_mean;
    c.phi_inf_std = r.phi_inf_std;
    c.warnings = r.diagnostics.warnings;
    if (sink) sink(c, r);
    return c;
}

std::vector<CreepDataset> prepare(std::span<const CreepDataset> datasets, std::optional<double> duration,
                                  const std::optional<SamplingScheme>& scheme) {
    std::vector<CreepDataset> out;
    for (const auto& d : datasets) {
        CreepDataset x = duration ? truncate(d, *duration) : d;
        out.push_back(scheme ? resample(x, *scheme) : x);
    }
    return out;
}

double fixed_t0_eff(const ModelVariant& v) {
    auto it = v.fixed_values().find(CreepParam::t0_eff);
    return it != v.fixed_values().end() ? it->second : 32.5;
}

}  // namespace

std::string_view to_string(StudyKind kind) {
    switch (kind) {
        case StudyKind::sampling: return "sampling";
        case StudyKind::duration: return "duration";
        case StudyKind::preload: return "preload";
    }
    return "?";
}

StudyKind study_kind_from_string(std::string_view name) {
    if (name == "sampling") return StudyKind::sampling;
    if (name == "duration") return StudyKind::duration;
    if (name == "preload") return StudyKind::preload;
    throw ConfigError("unknown study kind '" + std::string(name) + "' (sampling | duration | preload)");
}

double StudyCase::mean_of(std::string_view name) const {
    for (std::size_t i = 0; i < parameter_names.size(); ++i)
        if (parameter_names[i] == name) return mean[i];
    throw ConfigError("study case '" + label + "' has no parameter '" + std::string(name) + "'");
}

double StudyCase::std_of(std::string_view name) const {
    for (std::size_t i = 0; i < parameter_names.size(); ++i)
        if (parameter_names[i] == name) return std_dev[i];
    throw ConfigError("study case '" + label + "' has no parameter '" + std::string(name) + "'");
}

StudyReport run_sampling_study(std::span<const CreepDataset> datasets, const RunConfig& config,
                               const CaseSink& sink) {
    if (datasets.empty()) throw ValidationError("sampling study: no datasets");
    StudyReport report{StudyKind::sampling, kFinalCreepHorizonDays, {}};
    for (SamplingKind kind : {SamplingKind::equidistant, SamplingKind::logarithmic}) {
        const SamplingScheme scheme{kind, config.study.count, config.study.min_time};
        StudyCase c = run_case(std::string(to_string(kind)), prepare(datasets, config.truncate_days, scheme),
                               config.variant, config, sink);
        c.scheme = kind;
        report.cases.push_back(std::move(c));
    }
    return report;
}

StudyReport run_duration_study(std::span<const CreepDataset> datasets, const RunConfig& config,
                               const CaseSink& sink) {
    if (datasets.empty()) throw ValidationError("duration study: no datasets");
    const SamplingScheme scheme = config.sampling.value_or(
        SamplingScheme{SamplingKind::logarithmic, config.study.count, config.study.min_time});
    StudyReport report{StudyKind::duration, kFinalCreepHorizonDays, {}};
    for (double duration : config.study.durations) {
        StudyCase c = run_case("duration_" + format_double(duration), prepare(datasets, duration, scheme),
                               config.variant, config, sink);
        c.duration_days = duration;
        c.scheme = scheme.kind;
        report.cases.push_back(std::move(c));
    }
    return report;
}

StudyReport run_preload_study(std::span<const CreepDataset> datasets, const RunConfig& config,
                              const CaseSink& sink) {
    if (datasets.empty()) throw ValidationError("preload study: no datasets");
    std::map<double, std::vector<CreepDataset>> groups;
    for (const auto& d : datasets) {
        if (!d.preload_intensity())
            throw ConfigError("preload study: dataset '" + d.specimen_id() + "' has no preload_intensity label");
        groups[*d.preload_intensity()].push_back(d);
    }
    const double t0_eff = fixed_t0_eff(config.variant);
    const ModelVariant two = ModelVariant::two_parameter(t0_eff);
    const ModelVariant one = ModelVariant::one_parameter(t0_eff, config.study.fixed_n);

    StudyReport report{StudyKind::preload, kFinalCreepHorizonDays, {}};
    for (const auto& [intensity, members] : groups) {
        const auto data = prepare(members, config.truncate_days, config.sampling);
        for (const ModelVariant* v : {&two, &one}) {
            StudyCase c = run_case("preload_" + format_double(intensity) + "_" + variant_label(*v), data, *v,
                                   config, sink);
            c.preload_intensity = intensity;
            c.scheme = config.sampling ? std::optional(config.sampling->kind) : std::nullopt;
            report.cases.push_back(std::move(c));
        }
    }
    return report;
}

StudyReport run_study(StudyKind kind, std::span<const CreepDataset> datasets, const RunConfig& config,
                      const CaseSink& sink) {
    switch (kind) {
        case StudyKind::sampling: return run_sampling_study(datasets, config, sink);
        case StudyKind::duration: return run_duration_study(datasets, config, sink);
        case StudyKind::preload: return run_preload_study(datasets, config, sink);
    }
    throw ConfigError("unknown study kind");
}

void write_study_csv(std::ostream& out, const StudyReport& report) {
    out << "case,label,variant,scheme,duration_days,preload_intensity,seed,parameter,mean,std\n";
    for (std::size_t k = 0; k < report.cases.size(); ++k) {
        const auto& c = report.cases[k];
        const std::string prefix = std::to_string(k) + ',' + c.label + ',' + c.variant + ',' +
                                   (c.scheme ? std::string(to_string(*c.scheme)) : "") + ',' +
                                   (c.duration_days ? format_double(*c.duration_days) : "") + ',' +
                                   (c.preload_intensity ? format_double(*c.preload_intensity) : "") + ',' +
                                   std::to_string(c.seed) + ',';
        for (std::size_t i = 0; i < c.parameter_names.size(); ++i)
            out << prefix << c.parameter_names[i] << ',' << format_double(c.mean[i]) << ','
                << format_double(c.std_dev[i]) << '\n';
        out << prefix << "phi_inf," << format_double(c.phi_inf_mean) << ',' << format_double(c.phi_inf_std) << '\n';
    }
}

}  // namespace creepgp
