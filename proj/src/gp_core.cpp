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

#include "creepgp/gp_core.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "creepgp/errors.hpp"

namespace creepgp {

namespace {

constexpr double kJitterStart = 1e-10;
constexpr double kJitterStop = 1e-6;
constexpr double kVarianceClip = 1e-10;

Eigen::VectorXd mean_vector(std::span<const double> times, const Environment& env,
                            const CreepParameters& params) {
    const CreepCurve curve(env, params);
    Eigen::VectorXd m(static_cast<Eigen::Index>(times.size()));
    for (std::size_t i = 0; i < times.size(); ++i) m[static_cast<Eigen::Index>(i)] = curve(times[i]);
    return m;
}

Eigen::VectorXd residual(const TrainingSet& data, const Environment& env, const CreepParameters& params) {
    if (data.values.size() != data.times.size())
        throw ConfigError("training set has mismatched time/value lengths");
    Eigen::VectorXd r = -mean_vector(data.times, env, params);
    for (std::size_t i = 0; i < data.values.size(); ++i) r[static_cast<Eigen::Index>(i)] += data.values[i];
    if (!r.allFinite()) throw NumericalError("non-finite residual between data and creep model");
    return r;
}

}  // namespace

double PredictiveDistribution::std_dev(std::size_t i) const { return std::sqrt(variance.at(i)); }

Eigen::MatrixXd kernel_matrix(std::span<const double> times_a, std::span<const double> times_b,
                              const KernelHyperparameters& hyper) {
    if (!(hyper.length_scale > 0.0) || !std::isfinite(hyper.length_scale))
        throw DomainError("kernel_matrix: length scale must be positive");
    const double s2 = hyper.signal_std * hyper.signal_std;
    const double inv2l2 = 1.0 / (2.0 * hyper.length_scale * hyper.length_scale);
    Eigen::MatrixXd k(static_cast<Eigen::Index>(times_a.size()), static_cast<Eigen::Index>(times_b.size()));
    for (Eigen::Index j = 0; j < k.cols(); ++j) {
        const double b = times_b[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < k.rows(); ++i) {
            const double d = times_a[static_cast<std::size_t>(i)] - b;
            k(i, j) = s2 * std::exp(-d * d * inv2l2);
        }
    }
    return k;
}

CovarianceFactor factorize_covariance(std::span<const double> times, const KernelHyperparameters& hyper) {
    hyper.validate();
    Eigen::MatrixXd a = kernel_matrix(times, times, hyper);
    const double noise = hyper.noise_std * hyper.noise_std;
    const double scale = hyper.signal_std * hyper.signal_std + noise;
    a.diagonal().array() += noise;

    std::vector<double> tried;
    CovarianceFactor out;
    for (double level = kJitterStart; level <= kJitterStop * 1.0000001; level *= 10.0) {
        const double jitter = level * scale;
        tried.push_back(jitter);
        Eigen::MatrixXd attempt = a;
        attempt.diagonal().array() += jitter;
        out.llt.compute(attempt);
        if (out.llt.info() == Eigen::Success && out.llt.matrixLLT().diagonal().allFinite() &&
            (out.llt.matrixLLT().diagonal().array() > 0.0).all()) {
            out.jitter = jitter;
            return out;
        }
    }
    std::ostringstream msg;
    msg << "covariance factorization failed for " << times.size() << " points at jitter levels";
    for (double j : tried) msg << ' ' << j;
    throw NumericalError(msg.str(), std::move(tried));
}

double log_marginal_likelihood(const TrainingSet& data, const Environment& env,
                               const CreepParameters& params, const KernelHyperparameters& hyper) {
    if (data.empty()) throw ConfigError("log_marginal_likelihood: empty training set");
    const Eigen::VectorXd r = residual(data, env, params);
    const CovarianceFactor f = factorize_covariance(data.times, hyper);
    const Eigen::VectorXd z = f.llt.matrixL().solve(r);
    const double log_det = 2.0 * f.llt.matrixLLT().diagonal().array().log().sum();
    const double n = static_cast<double>(data.size());
    return -0.5 * z.squaredNorm() - 0.5 * log_det - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

double log_marginal_likelihood(const TrainingSet& data, const Environment& env,
                               const ThetaLayout& layout, std::span<const double> theta) {
    return log_marginal_likelihood(data, env, layout.creep_parameters(theta), layout.hyperparameters(theta));
}

double log_posterior(const TrainingSet& data, const Environment& env, const ThetaLayout& layout,
                     std::span<const double> theta, const PriorSet& priors) {
    const double lp = priors.log_density(layout, theta);
    if (!std::isfinite(lp)) return -std::numeric_limits<double>::infinity();
    // An empty training set switches the likelihood off (prior-only target).
    if (data.empty()) return lp;
    return log_marginal_likelihood(data, env, layout, theta) + lp;
}

PredictiveDistribution posterior_predictive(const TrainingSet& data, const Environment& env,
                                            const CreepParameters& params,
                                            const KernelHyperparameters& hyper,
                                            std::span<const double> query_times) {
    hyper.validate();
    PredictiveDistribution out;
    out.query_times.assign(query_times.begin(), query_times.end());
    const Eigen::VectorXd prior_mean = mean_vector(query_times, env, params);
    const double s2 = hyper.signal_std * hyper.signal_std;
    out.mean.assign(prior_mean.data(), prior_mean.data() + prior_mean.size());
    out.variance.assign(query_times.size(), s2);
    if (data.empty()) return out;

    const Eigen::VectorXd r = residual(data, env, params);
    const CovarianceFactor f = factorize_covariance(data.times, hyper);
    const Eigen::MatrixXd cross = kernel_matrix(data.times, query_times, hyper);  // N x m
    const Eigen::MatrixXd v = f.llt.matrixL().solve(cross);
    const Eigen::VectorXd z = f.llt.matrixL().solve(r);
    const Eigen::VectorXd shift = v.transpose() * z;
    const double tolerance = kVarianceClip * std::max(1.0, s2);
    for (std::size_t i = 0; i < query_times.size(); ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        out.mean[i] += shift[col];
        double var = s2 - v.col(col).squaredNorm();
        if (var < 0.0) {
            if (var < -tolerance) {
                std::ostringstream msg;
                msg << "posterior_predictive: negative variance " << var << " at t = " << query_times[i];
                throw NumericalError(msg.str(), {f.jitter});
            }
            var = 0.0;
        }
        out.variance[i] = var;
    }
    return out;
}

PredictiveDistribution posterior_predictive(const TrainingSet& data, const Environment& env,
                                            const ThetaLayout& layout, std::span<const double> theta,
                                            std::span<const double> query_times) {
    return posterior_predictive(data, env, layout.creep_parameters(theta), layout.hyperparameters(theta),
                                query_times);
}

PredictiveDistribution mix_predictions(std::span<const PredictiveDistribution> components) {
    if (components.empty()) throw ConfigError("mix_predictions: no components");
    const std::size_t m = components.front().size();
    PredictiveDistribution out;
    out.query_times = components.front().query_times;
    out.mean.assign(m, 0.0);
    out.variance.assign(m, 0.0);
    const double inv = 1.0 / static_cast<double>(components.size());
    for (const auto& c : components) {
        if (c.size() != m) throw ConfigError("mix_predictions: components differ in length");
        for (std::size_t i = 0; i < m; ++i) out.mean[i] += c.mean[i] * inv;
    }
    // (1/N) sum(var + mu^2) - mean^2, accumulated around the mixture mean
    for (const auto& c : components) {
        for (std::size_t i = 0; i < m; ++i) {
            const double d = c.mean[i] - out.mean[i];
            out.variance[i] += (c.variance[i] + d * d) * inv;
        }
    }
    return out;
}

std::vector<std::size_t> thinning_indices(std::size_t total, std::size_t subsample) {
    if (subsample == 0 || subsample > total)
        throw ConfigError("thinning: subsample must lie in [1, " + std::to_string(total) + "]");
    std::vector<std::size_t> idx(subsample);
    for (std::size_t k = 0; k < subsample; ++k)
        idx[k] = static_cast<std::size_t>((static_cast<unsigned __int128>(k) * total) / subsample);
    return idx;
}

PredictiveDistribution predictive_mixture(const TrainingSet& data, const Environment& env,
                                          const ThetaLayout& layout,
                                          std::span<const PosteriorChain> chains,
                                          std::span<const double> query_times, std::size_t subsample) {
    std::size_t total = 0;
    for (const auto& c : chains) {
        if (c.dim() != layout.dim())
            throw ConfigError("predictive_mixture: chain dimension " + std::to_string(c.dim()) +
                              " does not match the variant's theta dimension " +
                              std::to_string(layout.dim()));
        total += c.size();
    }
    if (total == 0) throw ConfigError("predictive_mixture: empty chain");

    std::vector<PredictiveDistribution> parts;
    parts.reserve(subsample);
    std::size_t chain_idx = 0;
    std::size_t offset = 0;
    for (std::size_t global : thinning_indices(total, subsample)) {
        while (global >= offset + chains[chain_idx].size()) offset += chains[chain_idx++].size();
        parts.push_back(
            posterior_predictive(data, env, layout, chains[chain_idx].sample(global - offset), query_times));
    }
    return mix_predictions(parts);
}

}  // namespace creepgp
