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

#include "creepgp/commands.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "creepgp/errors.hpp"
#include "creepgp/format.hpp"

namespace creepgp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file(const fs::path& file, const std::string& content) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + file.string());
    out << content;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void prepare_output(const RunConfig& config, const std::string& command) {
    fs::create_directories(config.output_dir);
    write_file(config.output_dir / "config.resolved.json", dump(config.to_json()));
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream ts;
    ts << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    write_file(config.output_dir / "run_metadata.json",
               dump({{"command", command}, {"started_utc", ts.str()}, {"seed", config.seed}}));
}

std::string predictive_csv(const PredictiveDistribution& p) {
    std::ostringstream out;
    out << "time_days,mean,std\n";
    for (std::size_t i = 0; i < p.size(); ++i)
        out << format_double(p.query_times[i]) << ',' << format_double(p.mean[i]) << ','
            << format_double(p.std_dev(i)) << '\n';
    return out.str();
}

json diagnostics_json(const DiagnosticsReport& d) {
    json params = json::array();
    for (const auto& p : d.parameters) {
        params.push_back({{"name", p.name},
                          {"ess", p.ess},
                          {"rhat", std::isfinite(p.rhat) ? json(p.rhat) : json(nullptr)},
                          {"lower_boundary_mass", p.lower_boundary_mass},
                          {"upper_boundary_mass", p.upper_boundary_mass}});
    }
    return {{"acceptance", d.acceptance}, {"parameters", params}, {"warnings", d.warnings},
            {"rhat_failed", d.rhat_failed}, {"ess_low", d.ess_low}, {"boundary_hugging", d.boundary_hugging}};
}

std::string summary_csv(const ParameterSummary& s) {
    std::ostringstream out;
    out << "parameter,mean,std,degenerate\n";
    for (std::size_t i = 0; i < s.names.size(); ++i)
        out << s.names[i] << ',' << format_double(s.mean[i]) << ',' << format_double(s.std_dev[i]) << ','
            << (s.degenerate[i] ? 1 : 0) << '\n';
    return out.str();
}

std::string correlation_csv(const ParameterSummary& s) {
    std::ostringstream out;
    out << "parameter";
    for (const auto& n : s.names) out << ',' << n;
    out << '\n';
    for (std::size_t i = 0; i < s.names.size(); ++i) {
        out << s.names[i];
        for (std::size_t j = 0; j < s.names.size(); ++j)
            out << ',' << format_double(s.correlation(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        out << '\n';
    }
    return out.str();
}

void write_calibration(const fs::path& dir, const CalibrationResult& r, const PredictionOptions& prediction) {
    fs::create_directories(dir);
    for (std::size_t c = 0; c < r.chains.size(); ++c) save_chain(dir / ("chain_" + std::to_string(c) + ".csv"), r.chains[c]);
    write_file(dir / "summary.csv", summary_csv(r.summary));
    write_file(dir / "correlation.csv", correlation_csv(r.summary));
    write_file(dir / "predictive.csv", predictive_csv(r.prediction));
    write_file(dir / "diagnostics.json", dump(diagnostics_json(r.diagnostics)));
    write_file(dir / "final_creep.json",
               dump({{"phi_inf_mean", r.phi_inf_mean},
                     {"phi_inf_std", r.phi_inf_std},
                     {"horizon_days", prediction.horizon_days},
                     {"note", "phi_inf is the predictive-mixture mean at horizon_days (100-year convention)"}}));
}

json study_json(const StudyReport& report) {
    json cases = json::array();
    for (const auto& c : report.cases) {
        json params = json::object();
        for (std::size_t i = 0; i < c.parameter_names.size(); ++i)
            params[c.parameter_names[i]] = {{"mean", c.mean[i]}, {"std", c.std_dev[i]}};
        cases.push_back({{"label", c.label},
                         {"variant", c.variant},
                         {"scheme", c.scheme ? json(std::string(to_string(*c.scheme))) : json(nullptr)},
                         {"duration_days", c.duration_days ? json(*c.duration_days) : json(nullptr)},
                         {"preload_intensity", c.preload_intensity ? json(*c.preload_intensity) : json(nullptr)},
                         {"seed", c.seed},
                         {"parameters", params},
                         {"phi_inf", {{"mean", c.phi_inf_mean}, {"std", c.phi_inf_std}}},
                         {"warnings", c.warnings},
                         {"directory", c.directory.generic_string()}});
    }
    return {{"study", std::string(to_string(report.kind))},
            {"phi_inf_horizon_days", report.phi_inf_horizon_days},
            {"phi_inf_convention", "predictive-mixture mean at the horizon"},
            {"config", "config.resolved.json"},
            {"cases", cases}};
}

}  // namespace

std::vector<CreepDataset> load_inputs(const Paths& files, const RunConfig& config) {
    if (files.empty()) throw ValidationError("no dataset files given");
    std::vector<CreepDataset> out;
    for (const auto& f : files) {
        CreepDataset d = load_dataset(f);
        if (config.truncate_days) d = truncate(d, *config.truncate_days);
        if (config.sampling) d = resample(d, *config.sampling);
        out.push_back(std::move(d));
    }
    return out;
}

int cmd_calibrate(const RunConfig& config, const Paths& data_files, std::ostream& log) {
    const auto data = load_inputs(data_files, config);
    prepare_output(config, "calibrate");
    log << "calibrating " << data.size() << " dataset(s), " << config.mcmc.chains << " chain(s) x "
        << config.mcmc.iterations << " iterations\n";
    const CalibrationResult r =
        calibrate(data, config.environment, config.variant, config.priors, config.mcmc, config.prediction);
    write_calibration(config.output_dir, r, config.prediction);
    for (std::size_t i = 0; i < r.summary.names.size(); ++i)
        log << "  " << r.summary.names[i] << " = " << r.summary.mean[i] << " +- " << r.summary.std_dev[i] << '\n';
    log << "  phi_inf(" << config.prediction.horizon_days << " d) = " << r.phi_inf_mean << " +- " << r.phi_inf_std << '\n';
    for (const auto& w : r.diagnostics.warnings) log << "warning: " << w << '\n';
    return r.diagnostics.ok() ? kExitOk : kExitDiagnostics;
}

int cmd_predict(const RunConfig& config, const Paths& chain_files, const Paths& data_files,
                const std::vector<double>& query_times, std::ostream& log) {
    if (chain_files.empty()) throw ConfigError("predict: no chain files given");
    if (query_times.empty()) throw ConfigError("predict: no query times given");
    const ThetaLayout layout(config.variant);
    std::vector<PosteriorChain> chains;
    for (const auto& f : chain_files) {
        PosteriorChain c = load_chain(f);
        if (c.dim() != layout.dim() || c.parameter_names() != layout.names())
            throw ConfigError("predict: chain " + f.string() + " has " + std::to_string(c.dim()) +
                              " coordinates, the configured variant expects " + std::to_string(layout.dim()));
        chains.push_back(std::move(c));
    }
    const auto data = load_inputs(data_files, config);
    prepare_output(config, "predict");
    std::size_t total = 0;
    for (const auto& c : chains) total += c.size();
    const auto pred = predictive_mixture(TrainingSet::pooled(data), config.environment, layout, chains, query_times,
                                         std::min(config.prediction.subsample, total));
    write_file(config.output_dir / "prediction.csv", predictive_csv(pred));
    log << "predicted " << pred.size() << " time(s) from " << total << " posterior samples\n";
    return kExitOk;
}

int cmd_sensitivity(const RunConfig& config, std::ostream& log) {
    prepare_output(config, "sensitivity");
    const SobolResult r = sobol_indices(config.sensitivity, config.environment);
    std::ostringstream csv;
    write_sobol_csv(csv, r);
    write_file(config.output_dir / "sensitivity.csv", csv.str());
    std::size_t gaps = 0;
    for (bool u : r.undefined) gaps += u;
    log << "sobol indices at " << r.durations.size() << " durations written";
    if (gaps) log << " (" << gaps << " duration(s) with zero output variance left undefined)";
    log << '\n';
    return kExitOk;
}

int cmd_study(StudyKind kind, const RunConfig& config, const Paths& data_files, std::ostream& log) {
    std::vector<CreepDataset> data;
    for (const auto& f : data_files) data.push_back(load_dataset(f));
    if (data.empty()) throw ValidationError("study: no dataset files given");
    prepare_output(config, "study " + std::string(to_string(kind)));
    std::size_t index = 0;
    const CaseSink sink = [&](StudyCase& c, const CalibrationResult& r) {
        c.directory = fs::path("case_" + std::to_string(index++));
        write_calibration(config.output_dir / c.directory, r, config.prediction);
        log << "  case " << c.label << ": phi_inf = " << c.phi_inf_mean << " +- " << c.phi_inf_std << '\n';
    };
    const StudyReport report = run_study(kind, data, config, sink);
    std::ostringstream csv;
    write_study_csv(csv, report);
    write_file(config.output_dir / "study_report.csv", csv.str());
    write_file(config.output_dir / "study_report.json", dump(study_json(report)));
    bool warned = false;
    for (const auto& c : report.cases) warned |= !c.warnings.empty();
    return warned ? kExitDiagnostics : kExitOk;
}

int cmd_simulate(const RunConfig& config, std::ostream& log) {
    const auto& sim = config.simulate;
    std::vector<SimulationScenario> scenarios = sim.scenarios;
    if (scenarios.empty()) scenarios.push_back({"synthetic", std::nullopt, {}, {}, {}});
    std::vector<CreepParameters> truths;
    for (const auto& s : scenarios) {
        try {
            truths.emplace_back(s.t0_eff.value_or(sim.t0_eff), s.h0.value_or(sim.h0), s.n.value_or(sim.n));
        } catch (const DomainError& e) {
            throw ConfigError(std::string("simulate: ") + e.what());
        }
    }
    prepare_output(config, "simulate");
    const auto times = scheme_times(sim.scheme, sim.duration_days);
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const auto& s = scenarios[i];
        const CreepDataset d = synthesize(config.environment, truths[i], sim.kernel, times, chain_seed(config.seed, i),
                                          s.specimen_id, s.preload_intensity);
        save_dataset(config.output_dir / (s.specimen_id + ".csv"), d);
        log << "wrote " << (config.output_dir / (s.specimen_id + ".csv")).string() << '\n';
    }
    return kExitOk;
}

int report_error(std::ostream& err) {
    try {
        throw;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const RangeError& e) {
        err << "range error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const DiagnosticError& e) {
        err << "sampler error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace creepgp
