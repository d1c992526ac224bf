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

/**
 * @file creep_model.hpp
 * @brief Eurocode 2 creep coefficient and its sub-factors.
 *
 * All functions are pure. Times are concrete ages in days unless a name
 * says "elapsed", in which case they count days since load application.
 */

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace creepgp {

/// Fixed ambient and material conditions of a creep test.
class Environment {
public:
    /// @param relative_humidity RH in percent, 0 < RH <= 100
    /// @param mean_compressive_strength f_cm in MPa, > 0
    /// @param load_age t0 in days, > 0
    /// @param cap_beta_h limit beta_H to 1500 * alpha3 (code compliance, off by default)
    Environment(double relative_humidity, double mean_compressive_strength, double load_age,
                bool cap_beta_h = false);

    double relative_humidity() const noexcept { return relative_humidity_; }
    double mean_compressive_strength() const noexcept { return mean_compressive_strength_; }
    double load_age() const noexcept { return load_age_; }
    bool cap_beta_h() const noexcept { return cap_beta_h_; }

private:
    double relative_humidity_;
    double mean_compressive_strength_;
    double load_age_;
    bool cap_beta_h_;
};

/// Calibratable model parameters. Construction enforces t0_eff > 0, h0 > 0, 0 < n < 1.
class CreepParameters {
public:
    CreepParameters(double t0_eff, double h0, double n);

    double t0_eff() const noexcept { return t0_eff_; }
    double h0() const noexcept { return h0_; }
    double n() const noexcept { return n_; }

    bool operator==(const CreepParameters&) const = default;

private:
    double t0_eff_;
    double h0_;
    double n_;
};

struct AlphaFactors {
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    double alpha3 = 1.0;
};

/// Strength correction factors; all 1 for f_cm <= 35 MPa.
AlphaFactors alpha_factors(double f_cm);

double beta_fcm(double f_cm);
double beta_t0(double t0_eff);
double phi_rh(double relative_humidity, double h0, const AlphaFactors& alpha);

/// Progression parameter beta_H in days. Uncapped unless `cap` is set.
double beta_h(double relative_humidity, double h0, const AlphaFactors& alpha, bool cap = false);

/// Notional (final) creep coefficient phi_RH * beta_fcm * beta_t0.
double phi_notional(const Environment& env, const CreepParameters& params);

/// Creep coefficient at concrete age t >= t0. Zero at t == t0.
double creep_coefficient(double t, const Environment& env, const CreepParameters& params);

/// Same as creep_coefficient(env.load_age() + elapsed), without the round trip through t.
double creep_coefficient_elapsed(double elapsed, const Environment& env,
                                 const CreepParameters& params);

/// phi0 and beta_H resolved once, for evaluating a whole curve.
struct CreepCurve {
    double phi0;
    double beta_h;
    double n;

    CreepCurve(const Environment& env, const CreepParameters& params);

    /// elapsed >= 0 days since loading
    double operator()(double elapsed) const;
};

enum class CreepParam { t0_eff = 0, h0 = 1, n = 2 };

inline constexpr std::array<CreepParam, 3> kAllCreepParams{CreepParam::t0_eff, CreepParam::h0,
                                                          CreepParam::n};

std::string_view to_string(CreepParam p);
std::optional<CreepParam> creep_param_from_string(std::string_view name);

/**
 * Which creep parameters are calibrated and where the others are pinned.
 *
 * Free parameters are always kept in canonical order (t0_eff, h0, n),
 * regardless of the order passed to the constructor.
 */
class ModelVariant {
public:
    ModelVariant(std::vector<CreepParam> free_parameters, std::map<CreepParam, double> fixed_values);

    static ModelVariant three_parameter();
    static ModelVariant two_parameter(double t0_eff);
    static ModelVariant one_parameter(double t0_eff, double n);

    const std::vector<CreepParam>& free_parameters() const noexcept { return free_; }
    const std::map<CreepParam, double>& fixed_values() const noexcept { return fixed_; }
    std::size_t free_count() const noexcept { return free_.size(); }
    bool is_free(CreepParam p) const;

private:
    std::vector<CreepParam> free_;
    std::map<CreepParam, double> fixed_;
};

/// Merge free values (canonical order) with the variant's fixed values.
CreepParameters resolve_parameters(const ModelVariant& variant, std::span<const double> free_values);

}  // namespace creepgp
