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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace creepgp {

/// Post-burn-in samples of one Metropolis-Hastings chain, stored row-major.
class PosteriorChain {
public:
    PosteriorChain() = default;
    explicit PosteriorChain(std::vector<std::string> parameter_names);

    void append(std::span<const double> theta, double log_posterior);

    const std::vector<std::string>& parameter_names() const noexcept { return names_; }
    std::size_t dim() const noexcept { return names_.size(); }
    std::size_t size() const noexcept { return log_posterior_.size(); }
    bool empty() const noexcept { return log_posterior_.empty(); }

    std::span<const double> sample(std::size_t i) const {
        return {samples_.data() + i * dim(), dim()};
    }
    std::vector<double> column(std::size_t j) const;
    const std::vector<double>& log_posterior_trace() const noexcept { return log_posterior_; }

    double acceptance_rate = 0.0;         ///< over retained iterations
    double burn_in_acceptance_rate = 0.0;
    std::size_t numerical_rejections = 0; ///< proposals whose likelihood failed to factorize
    std::uint64_t seed = 0;
    std::vector<double> proposal_scales;  ///< frozen scales used after burn-in

private:
    std::vector<std::string> names_;
    std::vector<double> samples_;
    std::vector<double> log_posterior_;
};

/*
 * Chain CSV: metadata comment lines, then a header with one column per
 * theta coordinate followed by "log_posterior", then one row per sample.
 *
 *   # seed=12345
 *   # acceptance_rate=0.27
 *   h0,n,sigma_n,sigma_s,length_scale,log_posterior
 */
void write_chain(std::ostream& out, const PosteriorChain& chain);
void save_chain(const std::filesystem::path& file, const PosteriorChain& chain);
PosteriorChain read_chain(std::istream& in);
PosteriorChain load_chain(const std::filesystem::path& file);

}  // namespace creepgp
