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
 * @file gp_core.hpp
 * @brief Gaussian process with the creep model as its mean function.
 *
 * The covariance of the observations is K + sigma_n^2 I with the squared
 * exponential kernel K. Training and query times are elapsed days since
 * load application; the environment's load age converts them to concrete age.
 *
 * Covariances are factorized with a Cholesky decomposition. A jitter of
 * 1e-10 * (sigma_s^2 + sigma_n^2) is added to the diagonal and escalated
 * by factors of ten up to 1e-6 * (sigma_s^2 + sigma_n^2) before giving up.
 */

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <span>
#include <vector>

#include "creepgp/creep_model.hpp"
#include "creepgp/dataset.hpp"
#include "creepgp/posterior_chain.hpp"
#include "creepgp/theta.hpp"

namespace creepgp {

struct PredictiveDistribution {
    std::vector<double> query_times;
    std::vector<double> mean;
    std::vector<double> variance;

    std::size_t size() const noexcept { return query_times.size(); }
    double std_dev(std::size_t i) const;
};

/// sigma_s^2 exp(-(a_i - b_j)^2 / (2 l^2))
Eigen::MatrixXd kernel_matrix(std::span<const double> times_a, std::span<const double> times_b,
                              const KernelHyperparameters& hyper);

/// Cholesky factor of K + (sigma_n^2 + jitter) I together with the jitter that made it succeed.
struct CovarianceFactor {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double jitter = 0.0;
};

/// Factorize kernel_matrix(times, times) + sigma_n^2 I with jitter escalation.
CovarianceFactor factorize_covariance(std::span<const double> times, const KernelHyperparameters& hyper);

double log_marginal_likelihood(const TrainingSet& data, const Environment& env,
                               const CreepParameters& params, const KernelHyperparameters& hyper);

double log_marginal_likelihood(const TrainingSet& data, const Environment& env,
                               const ThetaLayout& layout, std::span<const double> theta);

/// Log-likelihood plus log-prior; -infinity when theta leaves the prior support.
double log_posterior(const TrainingSet& data, const Environment& env, const ThetaLayout& layout,
                     std::span<const double> theta, const PriorSet& priors);

/**
 * Conditional Gaussian at the query times:
 *   mean     = m(t*) + k(t*, t) A^-1 (y - m(t))
 *   variance = k(t*, t*) - k(t*, t) A^-1 k(t, t*)
 * with A = K + sigma_n^2 I. The variance is that of the latent creep curve
 * (no observation noise).
 */
PredictiveDistribution posterior_predictive(const TrainingSet& data, const Environment& env,
                                            const CreepParameters& params,
                                            const KernelHyperparameters& hyper,
                                            std::span<const double> query_times);

PredictiveDistribution posterior_predictive(const TrainingSet& data, const Environment& env,
                                            const ThetaLayout& layout, std::span<const double> theta,
                                            std::span<const double> query_times);

/// Equal-weight Gaussian mixture moments per query time.
PredictiveDistribution mix_predictions(std::span<const PredictiveDistribution> components);

/// `subsample` evenly spaced indices in [0, total): floor(k * total / subsample).
std::vector<std::size_t> thinning_indices(std::size_t total, std::size_t subsample);

/**
 * Monte Carlo posterior-predictive mixture. The chains are pooled in
 * order, thinned deterministically to `subsample` draws, and the
 * closed-form predictive of each draw is mixed with equal weights.
 */
PredictiveDistribution predictive_mixture(const TrainingSet& data, const Environment& env,
                                          const ThetaLayout& layout,
                                          std::span<const PosteriorChain> chains,
                                          std::span<const double> query_times, std::size_t subsample);

}  // namespace creepgp
