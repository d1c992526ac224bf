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

#include "creepgp/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "creepgp/errors.hpp"
#include "creepgp/format.hpp"
#include "creepgp/gp_core.hpp"

namespace creepgp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kAdaptBatch = 100;
constexpr std::size_t kMaxInitAttempts = 1000;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double safe_eval(const LogDensity& target, std::span<const UniformPrior> box,
                 std::span<const double> x, std::size_t& numerical_failures) {
    for (std::size_t i = 0; i < box.size(); ++i)
        if (!box[i].contains(x[i])) return kNegInf;
    try {
        const double lp = target(x);
        return std::isnan(lp) ? kNegInf : lp;
    } catch (const NumericalError&) {
        ++numerical_failures;
        return kNegInf;
    }
}

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double variance_of(std::span<const double> v, double mean) {
    if (v.size() < 2) return 0.0;
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return s / static_cast<double>(v.size() - 1);
}

/*
 * Cholesky factor of scale^2 * cov(window). A small diagonal floor keeps it
 * positive definite when a coordinate barely moved in the window.
 */
Eigen::MatrixXd covariance_step(const std::vector<double>& window, std::size_t dim, const std::vector<double>& base,
                                double scale) {
    const auto d = static_cast<Eigen::Index>(dim);
    const auto rows = static_cast<Eigen::Index>(window.size() / dim);
    if (rows < 2 * d + 2) return {};
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> w(window.data(),
                                                                                                      rows, d);
    const Eigen::MatrixXd centered = w.rowwise() - w.colwise().mean();
    Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(rows - 1);
    cov *= scale * scale;
    for (Eigen::Index i = 0; i < d; ++i) {
        const double floor = 1e-6 * base[static_cast<std::size_t>(i)] * base[static_cast<std::size_t>(i)];
        cov(i, i) = std::max(cov(i, i), floor) + floor;
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) return {};
    return llt.matrixL();
}

}  // namespace

std::string_view to_string(SamplingSpace space) {
    return space == SamplingSpace::native ? "native" : "logit";
}

SamplingSpace sampling_space_from_string(std::string_view name) {
    if (name == "native") return SamplingSpace::native;
    if (name == "logit") return SamplingSpace::logit;
    throw ConfigError("mcmc: unknown space '" + std::string(name) + "' (native | logit)");
}

std::string_view to_string(ProposalKind kind) {
    return kind == ProposalKind::diagonal ? "diagonal" : "covariance";
}

ProposalKind proposal_kind_from_string(std::string_view name) {
    if (name == "diagonal") return ProposalKind::diagonal;
    if (name == "covariance") return ProposalKind::covariance;
    throw ConfigError("mcmc: unknown proposal '" + std::string(name) + "' (diagonal | covariance)");
}

void McmcConfig::validate(std::size_t dim) const {
    if (iterations == 0) throw ConfigError("mcmc: iterations must be positive");
    if (burn_in >= iterations) throw ConfigError("mcmc: burn_in must be smaller than iterations");
    if (chains == 0) throw ConfigError("mcmc: at least one chain required");
    if (!proposal_scales.empty()) {
        if (proposal_scales.size() != dim)
            throw ConfigError("mcmc: " + std::to_string(proposal_scales.size()) + " proposal scales for " +
                              std::to_string(dim) + " parameters");
        for (double s : proposal_scales)
            if (!(std::isfinite(s) && s > 0.0)) throw ConfigError("mcmc: proposal scales must be > 0");
    }
}

std::uint64_t chain_seed(std::uint64_t run_seed, std::size_t chain_index) {
    return splitmix64(splitmix64(run_seed) + static_cast<std::uint64_t>(chain_index));
}

PosteriorChain run_chain(const LogDensity& target, std::span<const UniformPrior> box,
                         std::vector<std::string> names, const McmcConfig& config,
                         std::size_t chain_index) {
    const std::size_t dim = box.size();
    if (names.size() != dim) throw ConfigError("run_chain: names and box differ in dimension");
    config.validate(dim);

    PosteriorChain chain(std::move(names));
    chain.seed = chain_seed(config.seed, chain_index);
    std::mt19937_64 rng(chain.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<double> x(dim);
    double lp = kNegInf;
    std::size_t numerical = 0;
    for (std::size_t attempt = 0; attempt < kMaxInitAttempts && !std::isfinite(lp); ++attempt) {
        for (std::size_t i = 0; i < dim; ++i) {
            do {
                x[i] = box[i].lower + box[i].width() * unit(rng);
            } while (!box[i].contains(x[i]));
        }
        lp = safe_eval(target, box, x, numerical);
    }
    if (!std::isfinite(lp))
        throw DiagnosticError("mcmc: no starting point with finite log density after " +
                              std::to_string(kMaxInitAttempts) + " uniform draws from the prior box");

    // the walk moves y; in logit space x = lower + width * sigmoid(y)
    const bool logit = config.space == SamplingSpace::logit;
    auto to_y = [&](std::span<const double> xs, std::vector<double>& ys) {
        for (std::size_t i = 0; i < dim; ++i)
            ys[i] = logit ? std::log((xs[i] - box[i].lower) / (box[i].upper - xs[i])) : xs[i];
    };
    auto to_x = [&](std::span<const double> ys, std::vector<double>& xs) {
        for (std::size_t i = 0; i < dim; ++i)
            xs[i] = logit ? box[i].lower + box[i].width() / (1.0 + std::exp(-ys[i])) : ys[i];
    };
    // log |dx/dy|, turning the target density on x into one on y
    auto log_jacobian = [&](std::span<const double> xs) {
        if (!logit) return 0.0;
        double s = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            s += std::log((xs[i] - box[i].lower) * (box[i].upper - xs[i]) / box[i].width());
        return s;
    };

    std::vector<double> y(dim);
    to_y(x, y);
    double jac = log_jacobian(x);

    // a native step s corresponds to 4 s / width logit units at the box centre
    std::vector<double> base(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        base[i] = config.proposal_scales.empty() ? 0.05 * box[i].width() : config.proposal_scales[i];
        if (logit) base[i] *= 4.0 / box[i].width();
    }
    double factor = 1.0;

    // samples since the last scale refresh, for re-estimating step sizes
    std::vector<double> window;
    const std::size_t refresh_every = config.burn_in / 4;

    // lower Cholesky factor of the learned step covariance; empty while diagonal
    Eigen::MatrixXd step;

    std::vector<double> proposal(dim);
    std::vector<double> proposal_x(dim);
    Eigen::VectorXd z(static_cast<Eigen::Index>(dim));
    std::size_t batch_accepted = 0;
    std::size_t burn_accepted = 0;
    std::size_t kept_accepted = 0;
    chain.numerical_rejections = 0;

    for (std::size_t it = 0; it < config.iterations; ++it) {
        if (step.size() == 0) {
            for (std::size_t i = 0; i < dim; ++i) proposal[i] = y[i] + factor * base[i] * normal(rng);
        } else {
            for (auto& zi : z) zi = normal(rng);
            const Eigen::VectorXd dy = step.triangularView<Eigen::Lower>() * z;
            for (std::size_t i = 0; i < dim; ++i) proposal[i] = y[i] + factor * dy[static_cast<Eigen::Index>(i)];
        }
        to_x(proposal, proposal_x);
        const double lp_new = safe_eval(target, box, proposal_x, chain.numerical_rejections);
        const double jac_new = std::isfinite(lp_new) ? log_jacobian(proposal_x) : 0.0;
        const double u = unit(rng);
        const double log_ratio = (lp_new + jac_new) - (lp + jac);
        const bool accept = std::isfinite(lp_new) && (log_ratio >= 0.0 || std::log(u) < log_ratio);
        if (accept) {
            y = proposal;
            x = proposal_x;
            lp = lp_new;
            jac = jac_new;
        }

        if (it < config.burn_in) {
            burn_accepted += accept;
            if (!config.adapt) continue;
            batch_accepted += accept;
            window.insert(window.end(), y.begin(), y.end());
            if ((it + 1) % kAdaptBatch == 0) {
                const double rate = static_cast<double>(batch_accepted) / kAdaptBatch;
                if (rate < 0.2) factor *= 0.8;
                else if (rate > 0.4) factor *= 1.25;
                batch_accepted = 0;
            }
            const bool refresh_point = refresh_every >= 2 * kAdaptBatch && (it + 1) % refresh_every == 0 &&
                                       (it + 1) < 4 * refresh_every;
            if (refresh_point) {
                const std::size_t rows = window.size() / dim;
                const double scale = 2.38 / std::sqrt(static_cast<double>(dim));
                std::vector<double> col(rows);
                for (std::size_t i = 0; i < dim; ++i) {
                    for (std::size_t r = 0; r < rows; ++r) col[r] = window[r * dim + i];
                    const double sd = std::sqrt(variance_of(col, mean_of(col)));
                    if (sd > 0.0) base[i] = logit ? scale * sd : std::min(scale * sd, box[i].width());
                }
                if (config.proposal == ProposalKind::covariance) step = covariance_step(window, dim, base, scale);
                factor = 1.0;
                window.clear();
            }
        } else {
            kept_accepted += accept;
            chain.append(x, lp);
        }
    }

    const std::size_t kept = config.iterations - config.burn_in;
    chain.acceptance_rate = static_cast<double>(kept_accepted) / static_cast<double>(kept);
    chain.burn_in_acceptance_rate =
        config.burn_in ? static_cast<double>(burn_accepted) / static_cast<double>(config.burn_in) : 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double s = step.size() == 0 ? base[i] : step.row(static_cast<Eigen::Index>(i)).norm();
        chain.proposal_scales.push_back(s * factor);
    }
    if (kept_accepted + burn_accepted == 0)
        throw DiagnosticError("mcmc: chain " + std::to_string(chain_index) +
                              " accepted no proposal in " + std::to_string(config.iterations) +
                              " iterations; reduce the proposal scales");
    return chain;
}

std::vector<PosteriorChain> run_chains(const LogDensity& target, std::span<const UniformPrior> box,
                                       const std::vector<std::string>& names, const McmcConfig& config) {
    config.validate(box.size());
    std::vector<PosteriorChain> chains(config.chains);
    std::vector<std::exception_ptr> errors(config.chains);
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(config.chains, std::thread::hardware_concurrency()));
    if (workers == 1) {
        for (std::size_t c = 0; c < config.chains; ++c) chains[c] = run_chain(target, box, names, config, c);
        return chains;
    }
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t c = w; c < config.chains; c += workers) {
                try {
                    chains[c] = run_chain(target, box, names, config, c);
                } catch (...) {
                    errors[c] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return chains;
}

std::vector<PosteriorChain> sample_posterior(const TrainingSet& data, const Environment& env,
                                             const ThetaLayout& layout, const PriorSet& priors,
                                             const McmcConfig& config) {
    const auto box = priors.box(layout);
    const LogDensity target = [&](std::span<const double> theta) {
        return log_posterior(data, env, layout, theta, priors);
    };
    return run_chains(target, box, layout.names(), config);
}

std::size_t ParameterSummary::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    throw ConfigError("summary has no parameter named '" + std::string(name) + "'");
}

ParameterSummary summarize(std::span<const PosteriorChain> chains) {
    if (chains.empty()) throw ConfigError("summarize: no chains");
    const std::size_t dim = chains.front().dim();
    ParameterSummary s;
    s.names = chains.front().parameter_names();
    for (const auto& c : chains) {
        if (c.dim() != dim) throw ConfigError("summarize: chains differ in dimension");
        s.samples += c.size();
    }
    if (s.samples == 0) throw ConfigError("summarize: no samples");

    const auto n = static_cast<double>(s.samples);
    s.mean.assign(dim, 0.0);
    for (const auto& c : chains)
        for (std::size_t r = 0; r < c.size(); ++r)
            for (std::size_t i = 0; i < dim; ++i) s.mean[i] += c.sample(r)[i];
    for (auto& m : s.mean) m /= n;

    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    std::vector<double> d(dim);
    for (const auto& c : chains) {
        for (std::size_t r = 0; r < c.size(); ++r) {
            const auto row = c.sample(r);
            for (std::size_t i = 0; i < dim; ++i) d[i] = row[i] - s.mean[i];
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j <= i; ++j)
                    cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += d[i] * d[j];
        }
    }
    const double denom = s.samples > 1 ? n - 1.0 : 1.0;
    cov /= denom;

    s.std_dev.resize(dim);
    s.degenerate.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const double v = cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
        s.std_dev[i] = std::sqrt(std::max(v, 0.0));
        s.degenerate[i] = !(v > 0.0);
    }
    s.correlation = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            double r = 0.0;
            if (!s.degenerate[i] && !s.degenerate[j])
                r = std::clamp(cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) /
                                   (s.std_dev[i] * s.std_dev[j]),
                               -1.0, 1.0);
            s.correlation(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r;
            s.correlation(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = r;
        }
    }
    return s;
}

double effective_sample_size(std::span<const double> draws) {
    const std::size_t n = draws.size();
    if (n < 4) return static_cast<double>(n);
    const double m = mean_of(draws);
    auto autocov = [&](std::size_t lag) {
        double s = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) s += (draws[i] - m) * (draws[i + lag] - m);
        return s / static_cast<double>(n);
    };
    const double c0 = autocov(0);
    if (!(c0 > 0.0)) return static_cast<double>(n);

    // Geyer: sum consecutive pairs while positive, forcing them non-increasing.
    double tau = -1.0;
    double prev_pair = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < n; k += 2) {
        double pair = (autocov(k) + autocov(k + 1)) / c0;
        if (pair <= 0.0) break;
        pair = std::min(pair, prev_pair);
        tau += 2.0 * pair;
        prev_pair = pair;
    }
    tau = std::max(tau, 1.0 / std::log10(static_cast<double>(n)));
    return static_cast<double>(n) / tau;
}

double split_rhat(std::span<const std::vector<double>> chains) {
    std::vector<std::span<const double>> halves;
    for (const auto& c : chains) {
        const std::size_t h = c.size() / 2;
        if (h < 2) throw ConfigError("split_rhat: chains need at least 4 draws");
        halves.emplace_back(c.data(), h);
        halves.emplace_back(c.data() + (c.size() - h), h);
    }
    std::size_t n = halves.front().size();
    for (const auto& h : halves) n = std::min(n, h.size());
    const double m = static_cast<double>(halves.size());
    std::vector<double> means;
    double w = 0.0;
    for (auto h : halves) {
        h = h.first(n);
        const double mu = mean_of(h);
        means.push_back(mu);
        w += variance_of(h, mu);
    }
    w /= m;
    const double grand = mean_of(means);
    double b = 0.0;
    for (double mu : means) b += (mu - grand) * (mu - grand);
    const double nn = static_cast<double>(n);
    b *= nn / (m - 1.0);
    if (!(w > 0.0)) return b > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
    const double var_plus = (nn - 1.0) / nn * w + b / nn;
    return std::sqrt(var_plus / w);
}

DiagnosticsReport diagnostics(std::span<const PosteriorChain> chains, std::span<const UniformPrior> box,
                              const DiagnosticsOptions& options) {
    if (chains.empty()) throw ConfigError("diagnostics: no chains");
    DiagnosticsReport report;
    const std::size_t dim = chains.front().dim();
    if (!box.empty() && box.size() != dim) throw ConfigError("diagnostics: prior box dimension mismatch");
    for (const auto& c : chains) report.acceptance.push_back(c.acceptance_rate);

    for (std::size_t j = 0; j < dim; ++j) {
        ParameterDiagnostics p;
        p.name = chains.front().parameter_names()[j];
        std::vector<std::vector<double>> columns;
        for (const auto& c : chains) {
            columns.push_back(c.column(j));
            p.ess += effective_sample_size(columns.back());
        }
        p.rhat = chains.size() >= 2 ? split_rhat(columns) : std::numeric_limits<double>::quiet_NaN();
        if (!box.empty()) {
            const double band = options.boundary_band * box[j].width();
            std::size_t lower = 0, upper = 0, total = 0;
            for (const auto& col : columns) {
                for (double v : col) {
                    lower += v < box[j].lower + band;
                    upper += v > box[j].upper - band;
                }
                total += col.size();
            }
            p.lower_boundary_mass = static_cast<double>(lower) / static_cast<double>(total);
            p.upper_boundary_mass = static_cast<double>(upper) / static_cast<double>(total);
        }

        if (p.ess < options.min_ess) {
            report.ess_low = true;
            report.warnings.push_back(p.name + ": effective sample size " + format_double(std::round(p.ess)) +
                                      " below " + format_double(options.min_ess));
        }
        if (std::isfinite(p.rhat) ? p.rhat > options.max_rhat : chains.size() >= 2) {
            report.rhat_failed = true;
            report.warnings.push_back(p.name + ": split R-hat " + format_double(p.rhat) + " above " +
                                      format_double(options.max_rhat));
        }
        if (!box.empty() && options.boundary_checked.count(p.name)) {
            const double mass = std::max(p.lower_boundary_mass, p.upper_boundary_mass);
            if (mass > options.boundary_mass_limit) {
                report.boundary_hugging = true;
                const bool low = p.lower_boundary_mass >= p.upper_boundary_mass;
                report.warnings.push_back(p.name + ": " + format_double(mass) + " of the posterior mass lies within " +
                                          format_double(100.0 * options.boundary_band) + "% of the " +
                                          (low ? "lower" : "upper") + " prior bound");
            }
        }
        report.parameters.push_back(std::move(p));
    }
    return report;
}

}  // namespace creepgp
