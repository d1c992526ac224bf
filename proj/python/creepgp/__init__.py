# Copyright 2026 The creepgp Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Gaussian-process calibration of the EC 2 creep model."""

from ._creepgp import (
    CreepParameters,
    DiagnosticError,
    Environment,
    KernelHyperparameters,
    NumericalError,
    calibrate,
    creep_coefficient,
    log_marginal_likelihood,
    log_time_grid,
    phi_notional,
    posterior_predictive,
    sobol_indices,
    synthesize,
)

__all__ = [
    "CreepParameters",
    "DiagnosticError",
    "Environment",
    "KernelHyperparameters",
    "NumericalError",
    "calibrate",
    "creep_coefficient",
    "log_marginal_likelihood",
    "log_time_grid",
    "phi_notional",
    "posterior_predictive",
    "sobol_indices",
    "synthesize",
]
