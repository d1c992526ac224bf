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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace creepgp {

// Argument outside the mathematical domain of a model function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Inconsistent configuration (variant, priors, sampler settings, file shapes).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input data violating a dataset invariant.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed input file; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Request outside the span covered by the data (no extrapolation).
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Covariance factorization failed at every jitter level that was tried.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, std::vector<double> jitter_levels = {})
        : std::runtime_error(what), jitter_levels_(std::move(jitter_levels)) {}

    const std::vector<double>& jitter_levels() const noexcept { return jitter_levels_; }

private:
    std::vector<double> jitter_levels_;
};

// Sampler pathology (e.g. no proposal accepted during the whole run).
class DiagnosticError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace creepgp
