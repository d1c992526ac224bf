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

#include "creepgp/sobol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include <boost/math/distributions/normal.hpp>

#include "creepgp/data_pipeline.hpp"
#include "creepgp/errors.hpp"
#include "creepgp/format.hpp"

namespace creepgp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Moments {
    double first;  // S_i numerator
    double total;  // ST_i numerator
};

// Outputs of the model at every row of a matrix: result(row, output)
Eigen::MatrixXd evaluate(const MultiOutputModel& model, const Eigen::MatrixXd& x, std::size_t outputs) {
    Eigen::MatrixXd y(x.rows(), static_cast<Eigen::Index>(outputs));
    std::vector<double> row(static_cast<std::size_t>(x.cols()));
    std::vector<double> out(outputs);
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        for (Eigen::Index c = 0; c < x.cols(); ++c) row[static_cast<std::size_t>(c)] = x(r, c);
        model(row, out);
        for (std::size_t o = 0; o < outputs; ++o) y(r, static_cast<Eigen::Index>(o)) = out[o];
    }
    return y;
}

// Indices over a chosen multiset of rows; returns variance through `var`.
void estimate(std::span<const std::size_t> rows, const Eigen::VectorXd& fa, const Eigen::VectorXd& fb,
              const std::vector<Eigen::VectorXd>& fab, double& var, std::vector<Moments>& m) {
    const auto n = static_cast<double>(rows.size());
    double sum = 0.0;
    for (std::size_t r : rows) sum += fa[static_cast<Eigen::Index>(r)] + fb[static_cast<Eigen::Index>(r)];
    const double mean = sum / (2.0 * n);
    double ss = 0.0;
    for (std::size_t r : rows) {
        const double da = fa[static_cast<Eigen::Index>(r)] - mean;
        const double db = fb[static_cast<Eigen::Index>(r)] - mean;
        ss += da * da + db * db;
    }
    var = ss / (2.0 * n - 1.0);
    m.assign(fab.size(), {0.0, 0.0});
    for (std::size_t i = 0; i < fab.size(); ++i) {
        double s1 = 0.0, st = 0.0;
        for (std::size_t r : rows) {
            const auto k = static_cast<Eigen::Index>(r);
            const double diff = fab[i][k] - fa[k];
            // centring f(B) leaves the expectation unchanged and removes the mean^2 noise term
            s1 += (fb[k] - mean) * diff;
            st += diff * diff;
        }
        m[i] = {s1 / n, st / (2.0 * n)};
    }
}

bool zero_variance(double var, const Eigen::VectorXd& fa) {
    const double scale = std::max(1.0, fa.cwiseAbs().maxCoeff());
    return !(var > 1e-28 * scale * scale);
}

SobolResult empty_result(const std::vector<std::string>& names, std::size_t outputs) {
    SobolResult r;
    r.names = names;
    const std::vector<double> col(outputs, kNaN);
    r.first_order.assign(names.size(), col);
    r.total_order.assign(names.size(), col);
    r.first_order_se.assign(names.size(), col);
    r.total_order_se.assign(names.size(), col);
    r.undefined.assign(outputs, false);
    return r;
}

}  // namespace

double InputDistribution::mean() const noexcept { return kind == Kind::normal ? a : 0.5 * (a + b); }

bool InputDistribution::degenerate() const noexcept { return kind == Kind::normal ? b == 0.0 : a == b; }

double InputDistribution::draw(std::mt19937_64& rng) const {
    if (kind == Kind::uniform) return a + (b - a) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    if (b == 0.0) return a;
    std::normal_distribution<double> normal(0.0, 1.0);
    double z;
    do {
        z = normal(rng);
    } while (std::abs(z) > truncation);
    return a + b * z;
}

double InputDistribution::quantile(double u) const {
    if (kind == Kind::uniform) return a + (b - a) * u;
    if (b == 0.0) return a;
    const boost::math::normal_distribution<double> unit;
    const double lo = boost::math::cdf(unit, -truncation);
    const double hi = boost::math::cdf(unit, truncation);
    return a + b * boost::math::quantile(unit, lo + u * (hi - lo));
}

void InputDistribution::validate(const std::string& name) const {
    if (kind == Kind::normal) {
        if (!(std::isfinite(a) && std::isfinite(b) && b >= 0.0))
            throw ConfigError("sensitivity input '" + name + "': std dev must be finite and >= 0");
        if (!(truncation > 0.0)) throw ConfigError("sensitivity input '" + name + "': truncation must be > 0");
    } else if (!(std::isfinite(a) && std::isfinite(b) && a <= b)) {
        throw ConfigError("sensitivity input '" + name + "': uniform needs lower <= upper");
    }
}

SensitivityInputSpec SensitivityInputSpec::defaults() {
    SensitivityInputSpec s;
    s.inputs = {InputDistribution::normal(32.5, 0.10 * 32.5), InputDistribution::normal(50.0, 0.10 * 50.0),
                InputDistribution::normal(0.30, 0.03 * 0.30)};
    s.duration_grid = time_grid(SamplingKind::logarithmic, 26, 1.0, 1e5);
    return s;
}

void SensitivityInputSpec::validate() const {
    if (names.size() != inputs.size() || names.empty())
        throw ConfigError("sensitivity: one distribution per named input required");
    for (std::size_t i = 0; i < inputs.size(); ++i) inputs[i].validate(names[i]);
    if (base_sample_size < 2) throw ConfigError("sensitivity: base sample size must be >= 2");
    if (duration_grid.empty()) throw ConfigError("sensitivity: empty duration grid");
    for (std::size_t g = 0; g < duration_grid.size(); ++g) {
        if (!(duration_grid[g] > 0.0) || (g > 0 && !(duration_grid[g] > duration_grid[g - 1])))
            throw ConfigError("sensitivity: duration grid must be positive and strictly increasing");
    }
}

std::size_t SobolResult::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    throw ConfigError("sobol result has no parameter '" + std::string(name) + "'");
}

SaltelliDesign saltelli_matrices(const SensitivityInputSpec& spec) {
    spec.validate();
    const auto n = static_cast<Eigen::Index>(spec.base_sample_size);
    const auto k = static_cast<Eigen::Index>(spec.inputs.size());
    std::mt19937_64 rng(spec.seed);
    Eigen::MatrixXd a(n, k), b(n, k);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < k; ++c) a(r, c) = spec.inputs[static_cast<std::size_t>(c)].draw(rng);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < k; ++c) b(r, c) = spec.inputs[static_cast<std::size_t>(c)].draw(rng);
    return make_design(std::move(a), std::move(b));
}

SaltelliDesign make_design(Eigen::MatrixXd a, Eigen::MatrixXd b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ConfigError("saltelli: A and B differ in shape");
    if (a.rows() < 2) throw ConfigError("saltelli: base sample size must be >= 2");
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
        const bool varies = a.col(c).maxCoeff() > a.col(c).minCoeff();
        if (varies && a.col(c) == b.col(c))
            throw ConfigError("saltelli: column " + std::to_string(c) +
                              " of B duplicates A; the design cannot separate that input");
    }
    SaltelliDesign d{std::move(a), std::move(b), {}};
    for (Eigen::Index c = 0; c < d.a.cols(); ++c) {
        Eigen::MatrixXd hybrid = d.a;
        hybrid.col(c) = d.b.col(c);
        d.ab.push_back(std::move(hybrid));
    }
    return d;
}

SobolResult sobol_indices(const SaltelliDesign& design, const MultiOutputModel& model,
                          std::size_t outputs, const std::vector<std::string>& names,
                          std::size_t bootstrap_resamples, std::uint64_t seed) {
    const std::size_t k = design.dim();
    const std::size_t n = design.rows();
    if (names.size() != k) throw ConfigError("sobol: one name per design column required");

    const Eigen::MatrixXd ya = evaluate(model, design.a, outputs);
    const Eigen::MatrixXd yb = evaluate(model, design.b, outputs);
    std::vector<Eigen::MatrixXd> yab;
    for (const auto& m : design.ab) yab.push_back(evaluate(model, m, outputs));

    SobolResult result = empty_result(names, outputs);
    std::vector<std::size_t> all(n);
    for (std::size_t r = 0; r < n; ++r) all[r] = r;

    // bootstrap row draws are shared by all outputs
    std::mt19937_64 rng(seed ^ 0x5DEECE66DULL);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::vector<std::size_t>> resamples(bootstrap_resamples, std::vector<std::size_t>(n));
    for (auto& rows : resamples)
        for (auto& r : rows) r = pick(rng);

    std::vector<Moments> m;
    for (std::size_t o = 0; o < outputs; ++o) {
        const auto col = static_cast<Eigen::Index>(o);
        const Eigen::VectorXd fa = ya.col(col);
        const Eigen::VectorXd fb = yb.col(col);
        std::vector<Eigen::VectorXd> fab;
        for (const auto& y : yab) fab.push_back(y.col(col));

        double var = 0.0;
        estimate(all, fa, fb, fab, var, m);
        if (zero_variance(var, fa)) {
            result.undefined[o] = true;
            continue;
        }
        for (std::size_t i = 0; i < k; ++i) {
            result.first_order[i][o] = m[i].first / var;
            result.total_order[i][o] = m[i].total / var;
        }
        if (bootstrap_resamples < 2) continue;

        std::vector<double> s_sum(k, 0.0), s_sq(k, 0.0), t_sum(k, 0.0), t_sq(k, 0.0);
        std::size_t used = 0;
        for (const auto& rows : resamples) {
            double bvar = 0.0;
            estimate(rows, fa, fb, fab, bvar, m);
            if (zero_variance(bvar, fa)) continue;
            ++used;
            for (std::size_t i = 0; i < k; ++i) {
                const double s = m[i].first / bvar;
                const double t = m[i].total / bvar;
                s_sum[i] += s;
                s_sq[i] += s * s;
                t_sum[i] += t;
                t_sq[i] += t * t;
            }
        }
        if (used < 2) continue;
        const double u = static_cast<double>(used);
        for (std::size_t i = 0; i < k; ++i) {
            result.first_order_se[i][o] = std::sqrt(std::max(0.0, (s_sq[i] - s_sum[i] * s_sum[i] / u) / (u - 1.0)));
            result.total_order_se[i][o] = std::sqrt(std::max(0.0, (t_sq[i] - t_sum[i] * t_sum[i] / u) / (u - 1.0)));
        }
    }
    return result;
}

MultiOutputModel creep_model_outputs(const Environment& env, std::vector<double> durations) {
    return [env, durations = std::move(durations)](std::span<const double> x, std::span<double> out) {
        const CreepCurve curve(env, CreepParameters(x[0], x[1], x[2]));
        for (std::size_t g = 0; g < durations.size(); ++g) out[g] = curve(durations[g]);
    };
}

SobolResult sobol_indices(const SensitivityInputSpec& spec, const Environment& env) {
    if (spec.inputs.size() != 3) throw ConfigError("sensitivity of the creep model needs exactly 3 inputs");
    const SaltelliDesign design = saltelli_matrices(spec);
    SobolResult r = sobol_indices(design, creep_model_outputs(env, spec.duration_grid), spec.duration_grid.size(),
                                  spec.names, spec.bootstrap_resamples, spec.seed);
    r.durations = spec.duration_grid;
    return r;
}

SobolResult brute_force_indices(const std::vector<InputDistribution>& inputs,
                                const std::vector<std::string>& names, const MultiOutputModel& model,
                                std::size_t outputs, std::size_t coarse_n, std::uint64_t seed) {
    if (coarse_n < 2 || coarse_n > 512) throw ConfigError("brute force: coarse_n must lie in [2, 512]");
    const std::size_t k = inputs.size();
    std::mt19937_64 rng(seed);
    SobolResult result = empty_result(names, outputs);

    std::vector<double> x(k);
    std::vector<double> out(outputs);
    // Per output: overall moments plus conditional means/variances per outer draw.
    std::vector<double> total_sum(outputs, 0.0), total_sq(outputs, 0.0);
    std::size_t total_count = 0;
    const auto nn = static_cast<double>(coarse_n);

    std::vector<std::vector<double>> vi(k, std::vector<double>(outputs, 0.0));
    std::vector<std::vector<double>> eti(k, std::vector<double>(outputs, 0.0));

    for (std::size_t i = 0; i < k; ++i) {
        for (int pass = 0; pass < 2; ++pass) {
            // pass 0: fix x_i, vary the rest -> Var(E[f | x_i])
            //         (x_i drawn once per equal-probability stratum)
            // pass 1: fix the rest, vary x_i -> E[Var(f | x_~i)]
            std::vector<std::size_t> strata(coarse_n);
            std::iota(strata.begin(), strata.end(), std::size_t{0});
            std::shuffle(strata.begin(), strata.end(), rng);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            std::vector<double> outer_mean_sum(outputs, 0.0), outer_mean_sq(outputs, 0.0), inner_var_sum(outputs, 0.0);
            for (std::size_t a = 0; a < coarse_n; ++a) {
                if (pass == 0) {
                    x[i] = inputs[i].quantile((static_cast<double>(strata[a]) + unit(rng)) / nn);
                } else {
                    for (std::size_t j = 0; j < k; ++j)
                        if (j != i) x[j] = inputs[j].draw(rng);
                }
                std::vector<double> s(outputs, 0.0), sq(outputs, 0.0);
                for (std::size_t b = 0; b < coarse_n; ++b) {
                    for (std::size_t j = 0; j < k; ++j)
                        if ((pass == 0) != (j == i)) x[j] = inputs[j].draw(rng);
                    model(x, out);
                    for (std::size_t o = 0; o < outputs; ++o) {
                        s[o] += out[o];
                        sq[o] += out[o] * out[o];
                        total_sum[o] += out[o];
                        total_sq[o] += out[o] * out[o];
                    }
                    ++total_count;
                }
                for (std::size_t o = 0; o < outputs; ++o) {
                    const double mu = s[o] / nn;
                    outer_mean_sum[o] += mu;
                    outer_mean_sq[o] += mu * mu;
                    inner_var_sum[o] += std::max(0.0, (sq[o] - s[o] * mu) / (nn - 1.0));
                }
            }
            for (std::size_t o = 0; o < outputs; ++o) {
                const double mean_inner_var = inner_var_sum[o] / nn;
                if (pass == 0) {
                    const double var_of_means =
                        (outer_mean_sq[o] - outer_mean_sum[o] * outer_mean_sum[o] / nn) / (nn - 1.0);
                    // the conditional means carry inner-loop noise of variance mean_inner_var / n
                    vi[i][o] = var_of_means - mean_inner_var / nn;
                } else {
                    eti[i][o] = mean_inner_var;
                }
            }
        }
    }
    const auto tc = static_cast<double>(total_count);
    for (std::size_t o = 0; o < outputs; ++o) {
        const double var = (total_sq[o] - total_sum[o] * total_sum[o] / tc) / (tc - 1.0);
        const double scale = std::max(1.0, std::abs(total_sum[o] / tc));
        if (!(var > 1e-28 * scale * scale)) {
            result.undefined[o] = true;
            continue;
        }
        for (std::size_t i = 0; i < k; ++i) {
            result.first_order[i][o] = vi[i][o] / var;
            result.total_order[i][o] = eti[i][o] / var;
        }
    }
    return result;
}

SobolResult brute_force_indices(const SensitivityInputSpec& spec, const Environment& env,
                                std::size_t coarse_n) {
    spec.validate();
    SobolResult r = brute_force_indices(spec.inputs, spec.names, creep_model_outputs(env, spec.duration_grid),
                                        spec.duration_grid.size(), coarse_n, spec.seed);
    r.durations = spec.duration_grid;
    return r;
}

void write_sobol_csv(std::ostream& out, const SobolResult& result) {
    out << "duration,parameter,S,ST,SE_S,SE_ST\n";
    for (std::size_t g = 0; g < result.durations.size(); ++g) {
        for (std::size_t i = 0; i < result.names.size(); ++i) {
            out << format_double(result.durations[g]) << ',' << result.names[i] << ','
                << format_double(result.first_order[i][g]) << ',' << format_double(result.total_order[i][g]) << ','
                << format_double(result.first_order_se[i][g]) << ',' << format_double(result.total_order_se[i][g])
                << '\n';
        }
    }
}

}  // namespace creepgp
