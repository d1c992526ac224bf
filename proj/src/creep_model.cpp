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

#include "creepgp/creep_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "creepgp/errors.hpp"

namespace creepgp {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

void check_humidity(double rh) {
    require(std::isfinite(rh) && rh >= 0.0 && rh <= 100.0,
            "relative humidity must lie in [0, 100] percent");
}

}  // namespace

Environment::Environment(double relative_humidity, double mean_compressive_strength,
                         double load_age, bool cap_beta_h)
    : relative_humidity_(relative_humidity),
      mean_compressive_strength_(mean_compressive_strength),
      load_age_(load_age),
      cap_beta_h_(cap_beta_h) {
    require(std::isfinite(relative_humidity) && relative_humidity > 0.0 && relative_humidity <= 100.0,
            "Environment: relative humidity must satisfy 0 < RH <= 100");
    require(std::isfinite(mean_compressive_strength) && mean_compressive_strength > 0.0,
            "Environment: f_cm must be positive");
    require(std::isfinite(load_age) && load_age > 0.0, "Environment: load age t0 must be positive");
}

CreepParameters::CreepParameters(double t0_eff, double h0, double n) : t0_eff_(t0_eff), h0_(h0), n_(n) {
    require(std::isfinite(t0_eff) && t0_eff > 0.0, "CreepParameters: t0_eff must be positive");
    require(std::isfinite(h0) && h0 > 0.0, "CreepParameters: h0 must be positive");
    require(std::isfinite(n) && n > 0.0 && n < 1.0, "CreepParameters: n must satisfy 0 < n < 1");
}

AlphaFactors alpha_factors(double f_cm) {
    require(std::isfinite(f_cm) && f_cm > 0.0, "alpha_factors: f_cm must be positive");
    if (f_cm <= 35.0) return {};
    const double r = 35.0 / f_cm;
    return {std::pow(r, 0.7), std::pow(r, 0.2), std::pow(r, 0.5)};
}

double beta_fcm(double f_cm) {
    require(std::isfinite(f_cm) && f_cm > 0.0, "beta_fcm: f_cm must be positive");
    return 16.8 / std::sqrt(f_cm);
}

double beta_t0(double t0_eff) {
    require(std::isfinite(t0_eff) && t0_eff > 0.0, "beta_t0: t0_eff must be positive");
    return 1.0 / (0.1 + std::pow(t0_eff, 0.2));
}

double phi_rh(double relative_humidity, double h0, const AlphaFactors& alpha) {
    check_humidity(relative_humidity);
    require(std::isfinite(h0) && h0 > 0.0, "phi_rh: h0 must be positive");
    const double dryness = 1.0 - relative_humidity / 100.0;
    return (1.0 + dryness / (0.1 * std::cbrt(h0)) * alpha.alpha1) * alpha.alpha2;
}

double beta_h(double relative_humidity, double h0, const AlphaFactors& alpha, bool cap) {
    check_humidity(relative_humidity);
    require(std::isfinite(h0) && h0 > 0.0, "beta_h: h0 must be positive");
    const double value =
        1.5 * (1.0 + std::pow(0.012 * relative_humidity, 18.0)) * h0 + 250.0 * alpha.alpha3;
    return cap ? std::min(value, 1500.0 * alpha.alpha3) : value;
}

double phi_notional(const Environment& env, const CreepParameters& params) {
    const AlphaFactors alpha = alpha_factors(env.mean_compressive_strength());
    return phi_rh(env.relative_humidity(), params.h0(), alpha) *
           beta_fcm(env.mean_compressive_strength()) * beta_t0(params.t0_eff());
}

CreepCurve::CreepCurve(const Environment& env, const CreepParameters& params)
    : phi0(phi_notional(env, params)),
      beta_h(creepgp::beta_h(env.relative_humidity(), params.h0(),
                             alpha_factors(env.mean_compressive_strength()), env.cap_beta_h())),
      n(params.n()) {}

double CreepCurve::operator()(double elapsed) const {
    require(std::isfinite(elapsed) && elapsed >= 0.0,
            "creep_coefficient: t must not precede the load age t0");
    // n > 0, so the progression term is exactly 0 at load application
    if (elapsed == 0.0) return 0.0;
    return phi0 * std::pow(elapsed / (beta_h + elapsed), n);
}

double creep_coefficient_elapsed(double elapsed, const Environment& env,
                                 const CreepParameters& params) {
    return CreepCurve(env, params)(elapsed);
}

double creep_coefficient(double t, const Environment& env, const CreepParameters& params) {
    require(std::isfinite(t) && t >= env.load_age(),
            "creep_coefficient: t must not precede the load age t0");
    return creep_coefficient_elapsed(t - env.load_age(), env, params);
}

std::string_view to_string(CreepParam p) {
    switch (p) {
        case CreepParam::t0_eff: return "t0_eff";
        case CreepParam::h0: return "h0";
        case CreepParam::n: return "n";
    }
    return "?";
}

std::optional<CreepParam> creep_param_from_string(std::string_view name) {
    for (CreepParam p : kAllCreepParams)
        if (to_string(p) == name) return p;
    return std::nullopt;
}

ModelVariant::ModelVariant(std::vector<CreepParam> free_parameters,
                           std::map<CreepParam, double> fixed_values)
    : fixed_(std::move(fixed_values)) {
    if (free_parameters.empty()) throw ConfigError("ModelVariant: at least one free parameter required");
    for (CreepParam p : kAllCreepParams) {
        const auto count = std::count(free_parameters.begin(), free_parameters.end(), p);
        if (count > 1)
            throw ConfigError("ModelVariant: parameter '" + std::string(to_string(p)) + "' listed twice");
        const bool fixed = fixed_.count(p) > 0;
        if (count == 1 && fixed)
            throw ConfigError("ModelVariant: parameter '" + std::string(to_string(p)) +
                              "' is both free and fixed");
        if (count == 0 && !fixed)
            throw ConfigError("ModelVariant: parameter '" + std::string(to_string(p)) +
                              "' is neither free nor fixed");
        if (count == 1) free_.push_back(p);
    }
}

ModelVariant ModelVariant::three_parameter() {
    return ModelVariant({CreepParam::t0_eff, CreepParam::h0, CreepParam::n}, {});
}

ModelVariant ModelVariant::two_parameter(double t0_eff) {
    return ModelVariant({CreepParam::h0, CreepParam::n}, {{CreepParam::t0_eff, t0_eff}});
}

ModelVariant ModelVariant::one_parameter(double t0_eff, double n) {
    return ModelVariant({CreepParam::h0}, {{CreepParam::t0_eff, t0_eff}, {CreepParam::n, n}});
}

bool ModelVariant::is_free(CreepParam p) const {
    return std::find(free_.begin(), free_.end(), p) != free_.end();
}

CreepParameters resolve_parameters(const ModelVariant& variant, std::span<const double> free_values) {
    if (free_values.size() != variant.free_count()) {
        std::ostringstream msg;
        msg << "resolve_parameters: expected " << variant.free_count() << " free values, got "
            << free_values.size();
        throw ConfigError(msg.str());
    }
    std::array<double, 3> full{};
    for (const auto& [p, v] : variant.fixed_values()) full[static_cast<int>(p)] = v;
    for (std::size_t i = 0; i < free_values.size(); ++i)
        full[static_cast<int>(variant.free_parameters()[i])] = free_values[i];
    return CreepParameters(full[0], full[1], full[2]);
}

}  // namespace creepgp
