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

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "creepgp/calibration.hpp"
#include "creepgp/creep_model.hpp"
#include "creepgp/data_pipeline.hpp"
#include "creepgp/errors.hpp"
#include "creepgp/gp_core.hpp"
#include "creepgp/sobol.hpp"

namespace py = pybind11;
using namespace creepgp;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a) {
    if (a.ndim() != 1) throw py::value_error("expected a one-dimensional array");
    return {a.data(), a.data() + a.size()};
}

Array to_array(const std::vector<double>& v) { return Array(static_cast<py::ssize_t>(v.size()), v.data()); }

ModelVariant make_variant(const std::vector<std::string>& free, const std::map<std::string, double>& fixed) {
    auto param = [](const std::string& name) {
        const auto p = creep_param_from_string(name);
        if (!p) throw ConfigError("unknown creep parameter '" + name + "'");
        return *p;
    };
    std::vector<CreepParam> f;
    for (const auto& n : free) f.push_back(param(n));
    std::map<CreepParam, double> x;
    for (const auto& [n, v] : fixed) x.emplace(param(n), v);
    return ModelVariant(std::move(f), std::move(x));
}

py::dict calibrate_py(const Array& times, const Array& values, const Environment& env,
                      const std::vector<std::string>& free, const std::map<std::string, double>& fixed,
                      std::size_t iterations, std::size_t burn_in, std::size_t chains, std::uint64_t seed) {
    std::vector<Observation> obs;
    const auto t = to_vector(times), y = to_vector(values);
    if (t.size() != y.size()) throw py::value_error("times and values differ in length");
    for (std::size_t i = 0; i < t.size(); ++i) obs.push_back({t[i], y[i]});
    const CreepDataset data("python", std::nullopt, std::move(obs));
    McmcConfig mcmc;
    mcmc.iterations = iterations;
    mcmc.burn_in = burn_in;
    mcmc.chains = chains;
    mcmc.seed = seed;
    std::optional<CalibrationResult> result;
    {
        py::gil_scoped_release release;
        result = calibrate(std::span(&data, 1), env, make_variant(free, fixed), PriorSet::defaults(), mcmc,
                           PredictionOptions{});
    }
    const CalibrationResult& r = *result;
    std::size_t rows = 0;
    for (const auto& c : r.chains) rows += c.size();
    const auto dim = static_cast<py::ssize_t>(r.layout.dim());
    py::array_t<double> samples({static_cast<py::ssize_t>(rows), dim});
    auto s = samples.mutable_unchecked<2>();
    py::ssize_t row = 0;
    for (const auto& c : r.chains)
        for (std::size_t k = 0; k < c.size(); ++k, ++row)
            for (py::ssize_t j = 0; j < dim; ++j) s(row, j) = c.sample(k)[static_cast<std::size_t>(j)];

    py::dict out;
    out["names"] = r.summary.names;
    out["mean"] = to_array(r.summary.mean);
    out["std"] = to_array(r.summary.std_dev);
    out["correlation"] = r.summary.correlation;
    out["samples"] = samples;
    out["acceptance"] = r.diagnostics.acceptance;
    out["warnings"] = r.diagnostics.warnings;
    out["phi_inf_mean"] = r.phi_inf_mean;
    out["phi_inf_std"] = r.phi_inf_std;
    out["prediction_times"] = to_array(r.prediction.query_times);
    out["prediction_mean"] = to_array(r.prediction.mean);
    out["prediction_variance"] = to_array(r.prediction.variance);
    return out;
}

}  // namespace

PYBIND11_MODULE(_creepgp, m) {
    m.doc() = "Gaussian-process calibration of the EC 2 creep model";

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<DiagnosticError>(m, "DiagnosticError", PyExc_RuntimeError);

    py::class_<Environment>(m, "Environment")
        .def(py::init<double, double, double>(), py::arg("relative_humidity"), py::arg("mean_compressive_strength"),
             py::arg("load_age"))
        .def_property_readonly("relative_humidity", &Environment::relative_humidity)
        .def_property_readonly("mean_compressive_strength", &Environment::mean_compressive_strength)
        .def_property_readonly("load_age", &Environment::load_age);

    py::class_<CreepParameters>(m, "CreepParameters")
        .def(py::init<double, double, double>(), py::arg("t0_eff"), py::arg("h0"), py::arg("n"))
        .def_property_readonly("t0_eff", &CreepParameters::t0_eff)
        .def_property_readonly("h0", &CreepParameters::h0)
        .def_property_readonly("n", &CreepParameters::n);

    py::class_<KernelHyperparameters>(m, "KernelHyperparameters")
        .def(py::init([](double s, double l, double n) {
                 KernelHyperparameters h{s, l, n};
                 h.validate();
                 return h;
             }),
             py::arg("signal_std"), py::arg("length_scale"), py::arg("noise_std"))
        .def_readonly("signal_std", &KernelHyperparameters::signal_std)
        .def_readonly("length_scale", &KernelHyperparameters::length_scale)
        .def_readonly("noise_std", &KernelHyperparameters::noise_std);

    m.def("phi_notional", &phi_notional, py::arg("env"), py::arg("params"));

    m.def(
        "creep_coefficient",
        [](const Array& elapsed, const Environment& env, const CreepParameters& p) {
            std::vector<double> out;
            for (double t : to_vector(elapsed)) out.push_back(creep_coefficient_elapsed(t, env, p));
            return to_array(out);
        },
        py::arg("elapsed_days"), py::arg("env"), py::arg("params"),
        "Creep coefficient at the given days since loading.");

    m.def(
        "log_marginal_likelihood",
        [](const Array& t, const Array& y, const Environment& env, const CreepParameters& p,
           const KernelHyperparameters& h) { return log_marginal_likelihood(TrainingSet{to_vector(t), to_vector(y)}, env, p, h); },
        py::arg("times"), py::arg("values"), py::arg("env"), py::arg("params"), py::arg("hyper"));

    m.def(
        "posterior_predictive",
        [](const Array& t, const Array& y, const Environment& env, const CreepParameters& p,
           const KernelHyperparameters& h, const Array& query) {
            const auto q = to_vector(query);
            const auto r = posterior_predictive(TrainingSet{to_vector(t), to_vector(y)}, env, p, h, q);
            return py::make_tuple(to_array(r.mean), to_array(r.variance));
        },
        py::arg("times"), py::arg("values"), py::arg("env"), py::arg("params"), py::arg("hyper"), py::arg("query"),
        "Latent-curve predictive mean and variance at the query times.");

    m.def(
        "synthesize",
        [](const Environment& env, const CreepParameters& p, const KernelHyperparameters& h, const Array& times,
           unsigned long long seed) {
            const auto t = to_vector(times);
            const auto d = synthesize(env, p, h, t, seed);
            return py::make_tuple(to_array(d.times()), to_array(d.values()));
        },
        py::arg("env"), py::arg("params"), py::arg("hyper"), py::arg("times"), py::arg("seed"));

    m.def(
        "log_time_grid",
        [](std::size_t count, double first, double last) {
            return to_array(time_grid(SamplingKind::logarithmic, count, first, last));
        },
        py::arg("count"), py::arg("first"), py::arg("last"));

    m.def("calibrate", &calibrate_py, py::arg("times"), py::arg("values"), py::arg("env"),
          py::arg("free") = std::vector<std::string>{"h0", "n"},
          py::arg("fixed") = std::map<std::string, double>{{"t0_eff", 32.5}}, py::arg("iterations") = 50000,
          py::arg("burn_in") = 20000, py::arg("chains") = 4, py::arg("seed") = 1);

    m.def(
        "sobol_indices",
        [](const Environment& env, std::vector<double> durations, std::size_t base_sample_size, std::uint64_t seed,
           std::size_t bootstrap_resamples) {
            auto spec = SensitivityInputSpec::defaults();
            if (!durations.empty()) spec.duration_grid = std::move(durations);
            spec.base_sample_size = base_sample_size;
            spec.seed = seed;
            spec.bootstrap_resamples = bootstrap_resamples;
            spec.validate();
            SobolResult r;
            {
                py::gil_scoped_release release;
                r = sobol_indices(spec, env);
            }
            py::dict out;
            out["names"] = r.names;
            out["durations"] = to_array(r.durations);
            out["first_order"] = r.first_order;
            out["total_order"] = r.total_order;
            out["first_order_se"] = r.first_order_se;
            out["total_order_se"] = r.total_order_se;
            return out;
        },
        py::arg("env"), py::arg("durations") = std::vector<double>{}, py::arg("base_sample_size") = 4096,
        py::arg("seed") = 1, py::arg("bootstrap_resamples") = 200,
        "Sobol indices of the creep coefficient over (t0_eff, h0, n) with the default input distributions.");
}
