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

#include "creepgp/data_pipeline.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>

#include "creepgp/errors.hpp"
#include "creepgp/format.hpp"
#include "creepgp/gp_core.hpp"

namespace creepgp {

namespace {

constexpr std::string_view kHeader = "time_days,creep_coefficient";

std::string_view source_name(DataSource s) {
    switch (s) {
        case DataSource::raw: return "raw";
        case DataSource::resampled: return "resampled";
        case DataSource::synthetic: return "synthetic";
    }
    return "raw";
}

DataSource source_from(std::string_view name, std::size_t line) {
    if (name == "raw") return DataSource::raw;
    if (name == "resampled") return DataSource::resampled;
    if (name == "synthetic") return DataSource::synthetic;
    throw ParseError("unknown source '" + std::string(name) + "'", line);
}

// Linear interpolation at a time inside [front, back] of the knots.
double interpolate_at(const std::vector<Observation>& obs, double t) {
    auto it = std::lower_bound(obs.begin(), obs.end(), t,
                               [](const Observation& o, double v) { return o.time_days < v; });
    if (it == obs.end()) throw RangeError("interpolation beyond the last observation");
    if (it->time_days == t) return it->creep_coefficient;
    if (it == obs.begin()) throw RangeError("interpolation before the first observation");
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (t - lo.time_days) / (hi.time_days - lo.time_days);
    return lo.creep_coefficient + w * (hi.creep_coefficient - lo.creep_coefficient);
}

}  // namespace

void SamplingScheme::validate() const {
    if (count < 2) throw ConfigError("sampling scheme needs at least 2 points");
    if (!(std::isfinite(min_time) && min_time > 0.0)) throw ConfigError("sampling min_time must be > 0");
}

std::string_view to_string(SamplingKind kind) {
    return kind == SamplingKind::equidistant ? "equidistant" : "logarithmic";
}

SamplingKind sampling_kind_from_string(std::string_view name) {
    if (name == "equidistant") return SamplingKind::equidistant;
    if (name == "logarithmic") return SamplingKind::logarithmic;
    throw ConfigError("unknown sampling kind '" + std::string(name) + "'");
}

CreepDataset parse_dataset(std::istream& in, const std::string& fallback_id) {
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    std::string specimen_id = fallback_id;
    std::optional<double> preload;
    DataSource source = DataSource::raw;
    std::map<std::string, double> truth_fields;
    std::vector<Observation> obs;

    while (std::getline(in, line)) {
        ++lineno;
        std::string_view text = line;
        if (lineno == 1 && text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
        text = trim(text);
        if (text.empty()) continue;
        if (text.front() == '#') {
            const auto body = trim(text.substr(1));
            auto sep = body.find('=');
            if (sep == std::string_view::npos) sep = body.find(':');
            if (sep == std::string_view::npos) continue;
            const std::string key(trim(body.substr(0, sep)));
            const auto value = trim(body.substr(sep + 1));
            try {
                if (key == "specimen_id") specimen_id = std::string(value);
                else if (key == "preload_intensity") preload = parse_double(value);
                else if (key == "source") source = source_from(value, lineno);
                else if (key.starts_with("truth_")) truth_fields[key.substr(6)] = parse_double(value);
            } catch (const std::invalid_argument& e) {
                throw ParseError(key + ": " + e.what(), lineno);
            }
            continue;
        }
        if (!have_header) {
            if (text != kHeader)
                throw ParseError("expected header '" + std::string(kHeader) + "'", lineno);
            have_header = true;
            continue;
        }
        const auto fields = split(text, ',');
        if (fields.size() != 2)
            throw ParseError("expected 2 fields, got " + std::to_string(fields.size()), lineno);
        Observation o{};
        try {
            o.time_days = parse_double(fields[0]);
            o.creep_coefficient = parse_double(fields[1]);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), lineno);
        }
        if (!std::isfinite(o.time_days) || !std::isfinite(o.creep_coefficient))
            throw ParseError("non-finite value", lineno);
        if (o.time_days < 0.0) throw ValidationError("line " + std::to_string(lineno) + ": negative time");
        if (!obs.empty() && o.time_days == obs.back().time_days)
            throw ValidationError("line " + std::to_string(lineno) + ": duplicate time " +
                                  format_double(o.time_days));
        if (!obs.empty() && o.time_days < obs.back().time_days)
            throw ValidationError("line " + std::to_string(lineno) + ": time " + format_double(o.time_days) +
                                  " goes backwards (previous " + format_double(obs.back().time_days) + ")");
        obs.push_back(o);
    }
    if (!have_header) throw ParseError("missing header '" + std::string(kHeader) + "'", lineno);
    CreepDataset ds(specimen_id, preload, std::move(obs), source);
    static const char* keys[] = {"t0_eff", "h0", "n", "sigma_s", "length_scale", "sigma_n", "seed"};
    if (std::all_of(std::begin(keys), std::end(keys), [&](const char* k) { return truth_fields.count(k); })) {
        ds.set_truth({truth_fields["t0_eff"], truth_fields["h0"], truth_fields["n"],
                      KernelHyperparameters{truth_fields["sigma_s"], truth_fields["length_scale"],
                                            truth_fields["sigma_n"]},
                      static_cast<unsigned long long>(truth_fields["seed"])});
    }
    return ds;
}

CreepDataset load_dataset(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ValidationError("cannot open dataset " + file.string());
    return parse_dataset(in, file.stem().string());
}

void write_dataset(std::ostream& out, const CreepDataset& dataset) {
    out << "# specimen_id=" << dataset.specimen_id() << '\n';
    if (dataset.preload_intensity()) out << "# preload_intensity=" << format_double(*dataset.preload_intensity()) << '\n';
    out << "# source=" << source_name(dataset.source()) << '\n';
    if (const auto& t = dataset.truth()) {
        out << "# truth_t0_eff=" << format_double(t->t0_eff) << '\n'
            << "# truth_h0=" << format_double(t->h0) << '\n'
            << "# truth_n=" << format_double(t->n) << '\n'
            << "# truth_sigma_s=" << format_double(t->hyper.signal_std) << '\n'
            << "# truth_length_scale=" << format_double(t->hyper.length_scale) << '\n'
            << "# truth_sigma_n=" << format_double(t->hyper.noise_std) << '\n'
            << "# truth_seed=" << t->seed << '\n';
    }
    out << kHeader << '\n';
    for (const auto& o : dataset.observations())
        out << format_double(o.time_days) << ',' << format_double(o.creep_coefficient) << '\n';
}

void save_dataset(const std::filesystem::path& file, const CreepDataset& dataset) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw ConfigError("cannot write dataset " + file.string());
    write_dataset(out, dataset);
}

std::vector<double> time_grid(SamplingKind kind, std::size_t count, double first, double last) {
    if (count < 2) throw ConfigError("time grid needs at least 2 points");
    if (!(std::isfinite(first) && std::isfinite(last) && first < last))
        throw RangeError("time grid needs first < last");
    std::vector<double> grid(count);
    const double steps = static_cast<double>(count - 1);
    if (kind == SamplingKind::equidistant) {
        for (std::size_t k = 0; k < count; ++k)
            grid[k] = first + (last - first) * (static_cast<double>(k) / steps);
    } else {
        if (!(first > 0.0)) throw RangeError("logarithmic grid needs a positive start");
        const double lo = std::log(first);
        const double hi = std::log(last);
        for (std::size_t k = 0; k < count; ++k)
            grid[k] = std::exp(lo + (hi - lo) * (static_cast<double>(k) / steps));
    }
    grid.front() = first;
    grid.back() = last;
    for (std::size_t k = 1; k < count; ++k)
        if (!(grid[k] > grid[k - 1])) throw RangeError("time grid too dense to be strictly increasing");
    return grid;
}

CreepDataset resample_at(const CreepDataset& dataset, std::span<const double> times) {
    std::vector<Observation> out;
    out.reserve(times.size());
    for (double t : times) {
        if (t < dataset.first_time() || t > dataset.last_time())
            throw RangeError("resample: time " + format_double(t) + " outside data span [" +
                             format_double(dataset.first_time()) + ", " + format_double(dataset.last_time()) + "]");
        out.push_back({t, interpolate_at(dataset.observations(), t)});
    }
    CreepDataset ds(dataset.specimen_id(), dataset.preload_intensity(), std::move(out), DataSource::resampled);
    if (dataset.truth()) ds.set_truth(*dataset.truth());
    return ds;
}

CreepDataset resample(const CreepDataset& dataset, const SamplingScheme& scheme) {
    scheme.validate();
    const double first = dataset.first_time();
    const double last = dataset.last_time();
    const double start = scheme.kind == SamplingKind::logarithmic ? std::max(first, scheme.min_time) : first;
    if (!(start < last))
        throw RangeError("resample: requested range starts at " + format_double(start) +
                         " but data end at " + format_double(last));
    return resample_at(dataset, time_grid(scheme.kind, scheme.count, start, last));
}

CreepDataset truncate(const CreepDataset& dataset, double duration) {
    if (!(std::isfinite(duration) && duration > 0.0)) throw ValidationError("truncate: duration must be > 0");
    std::vector<Observation> kept;
    for (const auto& o : dataset.observations())
        if (o.time_days <= duration) kept.push_back(o);
    if (kept.size() < 2)
        throw ValidationError("truncate: duration " + format_double(duration) + " leaves " +
                              std::to_string(kept.size()) + " observation(s), need at least 2");
    CreepDataset ds(dataset.specimen_id(), dataset.preload_intensity(), std::move(kept), dataset.source());
    if (dataset.truth()) ds.set_truth(*dataset.truth());
    return ds;
}

std::vector<double> scheme_times(const SamplingScheme& scheme, double duration) {
    scheme.validate();
    if (scheme.kind == SamplingKind::equidistant) return time_grid(scheme.kind, scheme.count, 0.0, duration);
    if (!(scheme.min_time < duration)) throw RangeError("scheme_times: min_time must be below the duration");
    return time_grid(scheme.kind, scheme.count, scheme.min_time, duration);
}

CreepDataset synthesize(const Environment& env, const CreepParameters& truth,
                        const KernelHyperparameters& hyper, std::span<const double> times,
                        unsigned long long seed, std::string specimen_id,
                        std::optional<double> preload_intensity) {
    hyper.validate();
    const CreepCurve curve(env, truth);
    const auto n = static_cast<Eigen::Index>(times.size());
    Eigen::VectorXd values(n);
    for (Eigen::Index i = 0; i < n; ++i) values[i] = curve(times[static_cast<std::size_t>(i)]);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    if (hyper.signal_std > 0.0) {
        // Pivoted LDL^T tolerates the near-singular kernel matrices of dense grids.
        const Eigen::MatrixXd k = kernel_matrix(times, times, hyper);
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(k);
        Eigen::VectorXd z(n);
        for (Eigen::Index i = 0; i < n; ++i) z[i] = normal(rng);
        const Eigen::VectorXd d = ldlt.vectorD().cwiseMax(0.0).cwiseSqrt();
        const Eigen::VectorXd y = ldlt.matrixL() * d.cwiseProduct(z);
        values += Eigen::VectorXd(ldlt.transpositionsP().transpose() * y);
    }
    if (hyper.noise_std > 0.0)
        for (Eigen::Index i = 0; i < n; ++i) values[i] += hyper.noise_std * normal(rng);

    std::vector<Observation> obs(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) obs[i] = {times[i], values[static_cast<Eigen::Index>(i)]};
    CreepDataset ds(std::move(specimen_id), preload_intensity, std::move(obs), DataSource::synthetic);
    ds.set_truth({truth.t0_eff(), truth.h0(), truth.n(), hyper, seed});
    return ds;
}

CreepDataset synthesize(const Environment& env, const CreepParameters& truth,
                        const KernelHyperparameters& hyper, const SamplingScheme& scheme,
                        double duration, unsigned long long seed) {
    return synthesize(env, truth, hyper, scheme_times(scheme, duration), seed);
}

}  // namespace creepgp
