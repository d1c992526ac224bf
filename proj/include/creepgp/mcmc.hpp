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
 * @file mcmc.hpp
 * @brief Random-walk Metropolis-Hastings over a box-bounded parameter space.
 *
 * Proposals perturb every coordinate at once with a Gaussian step.
 * Proposals outside the prior box are rejected without evaluating the
 * target. The walk can move in the parameters themselves or in logit
 * coordinates of the prior box; the latter includes the Jacobian, so the
 * stationary distribution is the same, but scale-like parameters with long
 * tails mix far better.
 *
 * With adaptation enabled, step sizes (or the full step covariance) are
 * re-estimated from the chain at 1/4, 1/2 and 3/4 of the burn-in and a
 * common factor is tuned towards 20-40 % acceptance in batches of 100
 * iterations. Everything is frozen once burn-in ends.
 */

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "creepgp/creep_model.hpp"
#include "creepgp/dataset.hpp"
#include "creepgp/posterior_chain.hpp"
#include "creepgp/theta.hpp"

namespace creepgp {

/// Shape of the random-walk step learned during burn-in.
enum class ProposalKind {
    diagonal,    ///< independent per-coordinate scales
    covariance,  ///< full covariance of the burn-in window
};

std::string_view to_string(ProposalKind kind);

/// Coordinates the random walk moves in. Both leave the posterior unchanged.
enum class SamplingSpace {
    native,  ///< the parameters themselves
    logit,   ///< log((x - lower) / (upper - x)) per prior interval, Jacobian-corrected
};

std::string_view to_string(SamplingSpace space);
SamplingSpace sampling_space_from_string(std::string_view name);
ProposalKind proposal_kind_from_string(std::string_view name);

struct McmcConfig {
    std::size_t iterations = 50000;  ///< total per chain, burn-in included
    std::size_t burn_in = 20000;
    std::vector<double> proposal_scales;  ///< empty: 5 % of each prior width
    std::uint64_t seed = 1;
    bool adapt = true;
    ProposalKind proposal = ProposalKind::covariance;
    SamplingSpace space = SamplingSpace::logit;
    std::size_t chains = 4;

    void validate(std::size_t dim) const;
};

using LogDensity = std::function<double(std::span<const double>)>;

/// Independent per-chain seed derived from the run seed.
std::uint64_t chain_seed(std::uint64_t run_seed, std::size_t chain_index);

/// One chain. `target` may return -infinity; NumericalError from it counts as a rejection.
PosteriorChain run_chain(const LogDensity& target, std::span<const UniformPrior> box,
                         std::vector<std::string> names, const McmcConfig& config,
                         std::size_t chain_index);

/// config.chains independent chains, run concurrently.
std::vector<PosteriorChain> run_chains(const LogDensity& target, std::span<const UniformPrior> box,
                                       const std::vector<std::string>& names, const McmcConfig& config);

/// Joint posterior of the variant's free creep parameters and the kernel hyperparameters.
/// An empty training set samples the prior alone.
std::vector<PosteriorChain> sample_posterior(const TrainingSet& data, const Environment& env,
                                             const ThetaLayout& layout, const PriorSet& priors,
                                             const McmcConfig& config);

struct ParameterSummary {
    std::vector<std::string> names;
    std::vector<double> mean;
    std::vector<double> std_dev;
    Eigen::MatrixXd correlation;   ///< unit diagonal; 0 off-diagonal for degenerate coordinates
    std::vector<bool> degenerate;  ///< zero variance
    std::size_t samples = 0;

    std::size_t index_of(std::string_view name) const;
};

/// Pooled moments over all chains.
ParameterSummary summarize(std::span<const PosteriorChain> chains);

struct DiagnosticsOptions {
    double min_ess = 100.0;
    double max_rhat = 1.05;
    double boundary_band = 0.02;       ///< fraction of the prior width next to each bound
    double boundary_mass_limit = 0.10; ///< flag when more mass than this sits in a band
    std::set<std::string> boundary_checked{"t0_eff", "h0", "n"};
};

struct ParameterDiagnostics {
    std::string name;
    double ess = 0.0;
    double rhat = 0.0;            ///< NaN with a single chain
    double lower_boundary_mass = 0.0;
    double upper_boundary_mass = 0.0;
};

struct DiagnosticsReport {
    std::vector<double> acceptance;
    std::vector<ParameterDiagnostics> parameters;
    std::vector<std::string> warnings;
    bool rhat_failed = false;
    bool ess_low = false;
    bool boundary_hugging = false;

    bool ok() const noexcept { return warnings.empty(); }
};

/// `box` may be empty, in which case boundary masses are not computed.
DiagnosticsReport diagnostics(std::span<const PosteriorChain> chains,
                              std::span<const UniformPrior> box = {},
                              const DiagnosticsOptions& options = {});

/// Autocorrelation-based ESS with Geyer's initial monotone sequence truncation.
double effective_sample_size(std::span<const double> draws);

/// Split-chain potential scale reduction factor.
double split_rhat(std::span<const std::vector<double>> chains);

}  // namespace creepgp
