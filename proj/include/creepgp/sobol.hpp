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
 * @file sobol.hpp
 * @brief Variance-based sensitivity of the creep model to (t0_eff, h0, n).
 *
 * Sample design: two independent N x k matrices A and B and k hybrids
 * A_B^(i) (A with column i taken from B). For every output y:
 *
 *   S_i  = mean( f(B) * (f(A_B^(i)) - f(A)) ) / Var(y)
 *   ST_i = mean( (f(A) - f(A_B^(i)))^2 ) / (2 Var(y))
 *
 * with Var(y) taken over the pooled f(A), f(B). Standard errors come from
 * a row bootstrap.
 */

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "creepgp/creep_model.hpp"

namespace creepgp {

/// Normal truncated at +-truncation std devs, or uniform on [a, b].
struct InputDistribution {
    enum class Kind { normal, uniform };

    Kind kind = Kind::normal;
    double a = 0.0;  ///< mean, or lower bound
    double b = 0.0;  ///< std dev, or upper bound
    double truncation = 4.0;

    static InputDistribution normal(double mean, double std_dev) { return {Kind::normal, mean, std_dev}; }
    static InputDistribution uniform(double lower, double upper) { return {Kind::uniform, lower, upper}; }

    double mean() const noexcept;
    bool degenerate() const noexcept;
    double draw(std::mt19937_64& rng) const;
    /// Inverse CDF, u in (0, 1).
    double quantile(double u) const;
    void validate(const std::string& name) const;
};

struct SensitivityInputSpec {
    std::vector<std::string> names{"t0_eff", "h0", "n"};
    std::vector<InputDistribution> inputs;
    std::vector<double> duration_grid;  ///< days since loading
    std::size_t base_sample_size = 4096;
    std::uint64_t seed = 1;
    std::size_t bootstrap_resamples = 200;

    /// Means (32.5, 50, 0.30) with std devs 10 %, 10 %, 3 % of the mean;
    /// log-spaced durations from 1 to 1e5 days, five per decade.
    static SensitivityInputSpec defaults();

    void validate() const;
};

struct SaltelliDesign {
    Eigen::MatrixXd a;
    Eigen::MatrixXd b;
    std::vector<Eigen::MatrixXd> ab;  ///< ab[i]: A with column i from B

    std::size_t rows() const noexcept { return static_cast<std::size_t>(a.rows()); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(a.cols()); }
};

/// Draw A and B from the input distributions (A first, row-major) and build the hybrids.
SaltelliDesign saltelli_matrices(const SensitivityInputSpec& spec);

/// Build hybrids from given A and B. Rejects designs where a varying column of A equals B's.
SaltelliDesign make_design(Eigen::MatrixXd a, Eigen::MatrixXd b);

/// Model with several scalar outputs (e.g. one per duration); writes into `out`.
using MultiOutputModel = std::function<void(std::span<const double> x, std::span<double> out)>;

struct SobolResult {
    std::vector<std::string> names;
    std::vector<double> durations;                 ///< one entry per output
    std::vector<std::vector<double>> first_order;  ///< [parameter][output]
    std::vector<std::vector<double>> total_order;
    std::vector<std::vector<double>> first_order_se;
    std::vector<std::vector<double>> total_order_se;
    std::vector<bool> undefined;  ///< zero output variance; indices are NaN there

    std::size_t index_of(std::string_view name) const;
};

SobolResult sobol_indices(const SaltelliDesign& design, const MultiOutputModel& model,
                          std::size_t outputs, const std::vector<std::string>& names,
                          std::size_t bootstrap_resamples, std::uint64_t seed);

/// Creep coefficient at t0 + d for each duration d of the duration grid.
SobolResult sobol_indices(const SensitivityInputSpec& spec, const Environment& env);

/// The creep model as a MultiOutputModel over the given durations; x = (t0_eff, h0, n).
MultiOutputModel creep_model_outputs(const Environment& env, std::vector<double> durations);

/**
 * Double-loop Monte Carlo reference with coarse_n outer and coarse_n inner
 * draws per parameter. Only meant for cross-checking sobol_indices.
 */
SobolResult brute_force_indices(const std::vector<InputDistribution>& inputs,
                                const std::vector<std::string>& names, const MultiOutputModel& model,
                                std::size_t outputs, std::size_t coarse_n, std::uint64_t seed);

SobolResult brute_force_indices(const SensitivityInputSpec& spec, const Environment& env,
                                std::size_t coarse_n);

/// CSV: duration,parameter,S,ST,SE_S,SE_ST
void write_sobol_csv(std::ostream& out, const SobolResult& result);

}  // namespace creepgp
