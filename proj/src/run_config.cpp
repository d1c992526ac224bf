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

#include "creepgp/run_config.hpp"

#include <fstream>
#include <set>

#include "creepgp/errors.hpp"

namespace creepgp {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& section) {
    if (!obj.is_object()) throw ConfigError(section + ": expected an object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key)) throw ConfigError(section + ": unknown key '" + key + "'");
}

template <class T>
T get(const json& obj, const std::string& key, const std::string& section) {
    if (!obj.contains(key)) throw ConfigError(section + ": missing '" + key + "'");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(section + "." + key + ": " + e.what());
    }
}

template <class T>
T get_or(const json& obj, const std::string& key, T fallback, const std::string& section) {
    return obj.contains(key) ? get<T>(obj, key, section) : fallback;
}

SamplingScheme parse_scheme(const json& j, const std::string& section) {
    check_keys(j, {"kind", "count", "min_time"}, section);
    SamplingScheme s;
    s.kind = sampling_kind_from_string(get_or<std::string>(j, "kind", "logarithmic", section));
    s.count = get_or<std::size_t>(j, "count", s.count, section);
    s.min_time = get_or<double>(j, "min_time", s.min_time, section);
    s.validate();
    return s;
}

json scheme_json(const SamplingScheme& s) {
    return {{"kind", std::string(to_string(s.kind))}, {"count", s.count}, {"min_time", s.min_time}};
}

Environment parse_environment(const json& j) {
    const std::string sec = "environment";
    check_keys(j, {"relative_humidity", "mean_compressive_strength", "load_age", "cap_beta_h"}, sec);
    try {
        return Environment(get<double>(j, "relative_humidity", sec), get<double>(j, "mean_compressive_strength", sec),
                           get<double>(j, "load_age", sec), get_or<bool>(j, "cap_beta_h", false, sec));
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

CreepParam param_named(const std::string& name, const std::string& section) {
    auto p = creep_param_from_string(name);
    if (!p) throw ConfigError(section + ": unknown creep parameter '" + name + "'");
    return *p;
}

ModelVariant parse_variant(const json& j) {
    const std::string sec = "variant";
    check_keys(j, {"free", "fixed"}, sec);
    std::vector<CreepParam> free;
    for (const auto& name : get<std::vector<std::string>>(j, "free", sec)) free.push_back(param_named(name, sec));
    std::map<CreepParam, double> fixed;
    for (const auto& [name, value] : get_or<std::map<std::string, double>>(j, "fixed", {}, sec))
        fixed[param_named(name, sec)] = value;
    return ModelVariant(std::move(free), std::move(fixed));
}

json variant_json(const ModelVariant& v) {
    json free = json::array();
    for (CreepParam p : v.free_parameters()) free.push_back(std::string(to_string(p)));
    json fixed = json::object();
    for (const auto& [p, value] : v.fixed_values()) fixed[std::string(to_string(p))] = value;
    return {{"free", free}, {"fixed", fixed}};
}

InputDistribution parse_input(const json& j, const std::string& sec) {
    check_keys(j, {"distribution", "mean", "std", "lower", "upper", "truncation"}, sec);
    const auto kind = get_or<std::string>(j, "distribution", "normal", sec);
    if (kind == "normal") {
        auto d = InputDistribution::normal(get<double>(j, "mean", sec), get<double>(j, "std", sec));
        d.truncation = get_or<double>(j, "truncation", d.truncation, sec);
        return d;
    }
    if (kind == "uniform") return InputDistribution::uniform(get<double>(j, "lower", sec), get<double>(j, "upper", sec));
    throw ConfigError(sec + ": unknown distribution '" + kind + "'");
}

json input_json(const InputDistribution& d) {
    if (d.kind == InputDistribution::Kind::uniform) return {{"distribution", "uniform"}, {"lower", d.a}, {"upper", d.b}};
    return {{"distribution", "normal"}, {"mean", d.a}, {"std", d.b}, {"truncation", d.truncation}};
}

}  // namespace

RunConfig::RunConfig(Environment env, ModelVariant v) : environment(env), variant(std::move(v)) { set_seed(seed); }

void RunConfig::set_seed(std::uint64_t value) {
    seed = value;
    mcmc.seed = value;
    sensitivity.seed = value;
}

void RunConfig::validate() const {
    const ThetaLayout layout(variant);
    // fixed values must form valid parameters together with any in-support free values
    std::vector<double> mid;
    for (const auto& b : priors.box(layout)) mid.push_back(0.5 * (b.lower + b.upper));
    try {
        layout.creep_parameters(mid);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("variant: ") + e.what());
    }
    mcmc.validate(layout.dim());
    if (sampling) sampling->validate();
    if (truncate_days && !(*truncate_days > 0.0)) throw ConfigError("truncate_days must be > 0");
    prediction.validate();
    sensitivity.validate();
    if (study.durations.empty()) throw ConfigError("study.durations must not be empty");
    for (double d : study.durations)
        if (!(d > 0.0)) throw ConfigError("study.durations must be positive");
    if (!(study.fixed_n > 0.0 && study.fixed_n < 1.0)) throw ConfigError("study.fixed_n must lie in (0, 1)");
    if (study.count < 2 || !(study.min_time > 0.0)) throw ConfigError("study: count >= 2 and min_time > 0 required");
    simulate.kernel.validate();
    simulate.scheme.validate();
    if (!(simulate.duration_days > 0.0)) throw ConfigError("simulate.duration_days must be > 0");
}

RunConfig RunConfig::from_json(const json& doc) {
    check_keys(doc, {"seed", "output_dir", "environment", "variant", "priors", "mcmc", "sampling", "truncate_days",
                     "prediction", "sensitivity", "study", "simulate"},
               "config");
    if (!doc.contains("environment")) throw ConfigError("config: missing 'environment'");
    RunConfig cfg(parse_environment(doc.at("environment")),
                  doc.contains("variant") ? parse_variant(doc.at("variant")) : ModelVariant::two_parameter(32.5));
    cfg.output_dir = get_or<std::string>(doc, "output_dir", cfg.output_dir.string(), "config");

    if (doc.contains("priors")) {
        const auto& p = doc.at("priors");
        check_keys(p, {"t0_eff", "h0", "n", "sigma_n", "sigma_s", "length_scale"}, "priors");
        for (const auto& [name, bounds] : p.items()) {
            const auto b = get<std::vector<double>>(p, name, "priors");
            if (b.size() != 2) throw ConfigError("priors." + name + ": expected [lower, upper]");
            cfg.priors.set(name, {b[0], b[1]});
        }
    }
    if (doc.contains("mcmc")) {
        const auto& m = doc.at("mcmc");
        const std::string sec = "mcmc";
        check_keys(m, {"iterations", "burn_in", "chains", "adapt", "proposal", "space", "proposal_scales"}, sec);
        cfg.mcmc.iterations = get_or<std::size_t>(m, "iterations", cfg.mcmc.iterations, sec);
        cfg.mcmc.burn_in = get_or<std::size_t>(m, "burn_in", cfg.mcmc.burn_in, sec);
        cfg.mcmc.chains = get_or<std::size_t>(m, "chains", cfg.mcmc.chains, sec);
        cfg.mcmc.adapt = get_or<bool>(m, "adapt", cfg.mcmc.adapt, sec);
        if (m.contains("space")) cfg.mcmc.space = sampling_space_from_string(get<std::string>(m, "space", sec));
        if (m.contains("proposal")) cfg.mcmc.proposal = proposal_kind_from_string(get<std::string>(m, "proposal", sec));
        if (m.contains("proposal_scales")) {
            const ThetaLayout layout(cfg.variant);
            const auto scales = get<std::map<std::string, double>>(m, "proposal_scales", sec);
            const auto box = cfg.priors.box(layout);
            cfg.mcmc.proposal_scales.resize(layout.dim());
            for (std::size_t i = 0; i < layout.dim(); ++i) cfg.mcmc.proposal_scales[i] = 0.05 * box[i].width();
            for (const auto& [name, s] : scales) cfg.mcmc.proposal_scales[layout.index_of(name)] = s;
        }
    }
    if (doc.contains("sampling") && !doc.at("sampling").is_null()) cfg.sampling = parse_scheme(doc.at("sampling"), "sampling");
    if (doc.contains("truncate_days")) cfg.truncate_days = get<double>(doc, "truncate_days", "config");
    if (doc.contains("prediction")) {
        const auto& p = doc.at("prediction");
        const std::string sec = "prediction";
        check_keys(p, {"horizon_days", "min_time", "points", "subsample"}, sec);
        cfg.prediction.horizon_days = get_or<double>(p, "horizon_days", cfg.prediction.horizon_days, sec);
        cfg.prediction.min_time = get_or<double>(p, "min_time", cfg.prediction.min_time, sec);
        cfg.prediction.points = get_or<std::size_t>(p, "points", cfg.prediction.points, sec);
        cfg.prediction.subsample = get_or<std::size_t>(p, "subsample", cfg.prediction.subsample, sec);
    }
    if (doc.contains("sensitivity")) {
        const auto& s = doc.at("sensitivity");
        const std::string sec = "sensitivity";
        check_keys(s, {"base_sample_size", "bootstrap_resamples", "durations", "inputs"}, sec);
        auto& spec = cfg.sensitivity;
        spec.base_sample_size = get_or<std::size_t>(s, "base_sample_size", spec.base_sample_size, sec);
        spec.bootstrap_resamples = get_or<std::size_t>(s, "bootstrap_resamples", spec.bootstrap_resamples, sec);
        if (s.contains("durations")) {
            const auto& d = s.at("durations");
            if (d.is_array()) {
                spec.duration_grid = get<std::vector<double>>(s, "durations", sec);
            } else {
                const std::string dsec = sec + ".durations";
                check_keys(d, {"min", "max", "points"}, dsec);
                spec.duration_grid = time_grid(SamplingKind::logarithmic, get<std::size_t>(d, "points", dsec),
                                               get<double>(d, "min", dsec), get<double>(d, "max", dsec));
            }
        }
        if (s.contains("inputs")) {
            const auto& in = s.at("inputs");
            check_keys(in, {"t0_eff", "h0", "n"}, sec + ".inputs");
            for (std::size_t i = 0; i < spec.names.size(); ++i)
                if (in.contains(spec.names[i])) spec.inputs[i] = parse_input(in.at(spec.names[i]), sec + ".inputs." + spec.names[i]);
        }
    }
    if (doc.contains("study")) {
        const auto& s = doc.at("study");
        const std::string sec = "study";
        check_keys(s, {"durations", "fixed_n", "count", "min_time"}, sec);
        cfg.study.durations = get_or<std::vector<double>>(s, "durations", cfg.study.durations, sec);
        cfg.study.fixed_n = get_or<double>(s, "fixed_n", cfg.study.fixed_n, sec);
        cfg.study.count = get_or<std::size_t>(s, "count", cfg.study.count, sec);
        cfg.study.min_time = get_or<double>(s, "min_time", cfg.study.min_time, sec);
    }
    if (doc.contains("simulate")) {
        const auto& s = doc.at("simulate");
        const std::string sec = "simulate";
        check_keys(s, {"truth", "kernel", "scheme", "duration_days", "scenarios"}, sec);
        auto& sim = cfg.simulate;
        if (s.contains("truth")) {
            const auto& t = s.at("truth");
            check_keys(t, {"t0_eff", "h0", "n"}, sec + ".truth");
            sim.t0_eff = get_or<double>(t, "t0_eff", sim.t0_eff, sec + ".truth");
            sim.h0 = get_or<double>(t, "h0", sim.h0, sec + ".truth");
            sim.n = get_or<double>(t, "n", sim.n, sec + ".truth");
        }
        if (s.contains("kernel")) {
            const auto& k = s.at("kernel");
            const std::string ksec = sec + ".kernel";
            check_keys(k, {"sigma_s", "length_scale", "sigma_n"}, ksec);
            sim.kernel.signal_std = get_or<double>(k, "sigma_s", sim.kernel.signal_std, ksec);
            sim.kernel.length_scale = get_or<double>(k, "length_scale", sim.kernel.length_scale, ksec);
            sim.kernel.noise_std = get_or<double>(k, "sigma_n", sim.kernel.noise_std, ksec);
        }
        if (s.contains("scheme")) sim.scheme = parse_scheme(s.at("scheme"), sec + ".scheme");
        sim.duration_days = get_or<double>(s, "duration_days", sim.duration_days, sec);
        if (s.contains("scenarios")) {
            for (const auto& sc : s.at("scenarios")) {
                const std::string ssec = sec + ".scenarios[]";
                check_keys(sc, {"specimen_id", "preload_intensity", "t0_eff", "h0", "n"}, ssec);
                SimulationScenario scenario;
                scenario.specimen_id = get<std::string>(sc, "specimen_id", ssec);
                if (sc.contains("preload_intensity")) scenario.preload_intensity = get<double>(sc, "preload_intensity", ssec);
                if (sc.contains("t0_eff")) scenario.t0_eff = get<double>(sc, "t0_eff", ssec);
                if (sc.contains("h0")) scenario.h0 = get<double>(sc, "h0", ssec);
                if (sc.contains("n")) scenario.n = get<double>(sc, "n", ssec);
                sim.scenarios.push_back(std::move(scenario));
            }
        }
    }
    cfg.set_seed(get_or<std::uint64_t>(doc, "seed", cfg.seed, "config"));
    cfg.validate();
    return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file " + file.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + file.string() + ": " + e.what());
    }
    return from_json(doc);
}

json RunConfig::to_json() const {
    json doc;
    doc["seed"] = seed;
    doc["output_dir"] = output_dir.string();
    doc["environment"] = {{"relative_humidity", environment.relative_humidity()},
                          {"mean_compressive_strength", environment.mean_compressive_strength()},
                          {"load_age", environment.load_age()},
                          {"cap_beta_h", environment.cap_beta_h()}};
    doc["variant"] = variant_json(variant);
    json priors_json = json::object();
    for (const auto& [name, b] : priors.all()) priors_json[name] = {b.lower, b.upper};
    doc["priors"] = priors_json;
    json mcmc_json = {{"iterations", mcmc.iterations}, {"burn_in", mcmc.burn_in}, {"chains", mcmc.chains}, {"adapt", mcmc.adapt},
                      {"proposal", std::string(to_string(mcmc.proposal))},
                      {"space", std::string(to_string(mcmc.space))}};
    if (!mcmc.proposal_scales.empty()) {
        const ThetaLayout layout(variant);
        json scales = json::object();
        for (std::size_t i = 0; i < layout.dim(); ++i) scales[layout.names()[i]] = mcmc.proposal_scales[i];
        mcmc_json["proposal_scales"] = scales;
    }
    doc["mcmc"] = mcmc_json;
    doc["sampling"] = sampling ? scheme_json(*sampling) : json(nullptr);
    if (truncate_days) doc["truncate_days"] = *truncate_days;
    doc["prediction"] = {{"horizon_days", prediction.horizon_days},
                         {"min_time", prediction.min_time},
                         {"points", prediction.points},
                         {"subsample", prediction.subsample}};
    json inputs = json::object();
    for (std::size_t i = 0; i < sensitivity.names.size(); ++i) inputs[sensitivity.names[i]] = input_json(sensitivity.inputs[i]);
    doc["sensitivity"] = {{"base_sample_size", sensitivity.base_sample_size},
                          {"bootstrap_resamples", sensitivity.bootstrap_resamples},
                          {"durations", sensitivity.duration_grid},
                          {"inputs", inputs}};
    doc["study"] = {{"durations", study.durations}, {"fixed_n", study.fixed_n}, {"count", study.count}, {"min_time", study.min_time}};
    json scenarios = json::array();
    for (const auto& sc : simulate.scenarios) {
        json j = {{"specimen_id", sc.specimen_id}};
        if (sc.preload_intensity) j["preload_intensity"] = *sc.preload_intensity;
        if (sc.t0_eff) j["t0_eff"] = *sc.t0_eff;
        if (sc.h0) j["h0"] = *sc.h0;
        if (sc.n) j["n"] = *sc.n;
        scenarios.push_back(j);
    }
    doc["simulate"] = {{"truth", {{"t0_eff", simulate.t0_eff}, {"h0", simulate.h0}, {"n", simulate.n}}},
                       {"kernel", {{"sigma_s", simulate.kernel.signal_std},
                                   {"length_scale", simulate.kernel.length_scale},
                                   {"sigma_n", simulate.kernel.noise_std}}},
                       {"scheme", scheme_json(simulate.scheme)},
                       {"duration_days", simulate.duration_days},
                       {"scenarios", scenarios}};
    return doc;
}

}  // namespace creepgp
