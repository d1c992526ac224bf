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

#include "creepgp/posterior_chain.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "creepgp/errors.hpp"
#include "creepgp/format.hpp"

namespace creepgp {

PosteriorChain::PosteriorChain(std::vector<std::string> parameter_names)
    : names_(std::move(parameter_names)) {}

void PosteriorChain::append(std::span<const double> theta, double log_posterior) {
    if (theta.size() != dim()) throw ConfigError("PosteriorChain::append: dimension mismatch");
    samples_.insert(samples_.end(), theta.begin(), theta.end());
    log_posterior_.push_back(log_posterior);
}

std::vector<double> PosteriorChain::column(std::size_t j) const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = samples_[i * dim() + j];
    return out;
}

void write_chain(std::ostream& out, const PosteriorChain& chain) {
    out << "# seed=" << chain.seed << '\n';
    out << "# acceptance_rate=" << format_double(chain.acceptance_rate) << '\n';
    out << "# burn_in_acceptance_rate=" << format_double(chain.burn_in_acceptance_rate) << '\n';
    out << "# numerical_rejections=" << chain.numerical_rejections << '\n';
    for (const auto& name : chain.parameter_names()) out << name << ',';
    out << "log_posterior\n";
    for (std::size_t i = 0; i < chain.size(); ++i) {
        for (double v : chain.sample(i)) out << format_double(v) << ',';
        out << format_double(chain.log_posterior_trace()[i]) << '\n';
    }
}

void save_chain(const std::filesystem::path& file, const PosteriorChain& chain) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw ConfigError("cannot write chain file " + file.string());
    write_chain(out, chain);
}

PosteriorChain read_chain(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::uint64_t seed = 0;
    double acceptance = 0.0;
    double burn_acceptance = 0.0;
    PosteriorChain chain;
    bool have_header = false;
    std::vector<double> row;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view text = trim(line);
        if (text.empty()) continue;
        if (text.front() == '#') {
            const auto body = trim(text.substr(1));
            const auto eq = body.find('=');
            if (eq == std::string_view::npos) continue;
            const auto key = trim(body.substr(0, eq));
            const auto value = trim(body.substr(eq + 1));
            try {
                if (key == "seed") seed = std::stoull(std::string(value));
                else if (key == "acceptance_rate") acceptance = parse_double(value);
                else if (key == "burn_in_acceptance_rate") burn_acceptance = parse_double(value);
            } catch (const std::exception& e) {
                throw ParseError(e.what(), lineno);
            }
            continue;
        }
        auto fields = split(text, ',');
        if (!have_header) {
            if (fields.size() < 2 || trim(fields.back()) != "log_posterior")
                throw ParseError("chain header must end with 'log_posterior'", lineno);
            std::vector<std::string> names;
            for (std::size_t i = 0; i + 1 < fields.size(); ++i) names.emplace_back(trim(fields[i]));
            chain = PosteriorChain(std::move(names));
            have_header = true;
            continue;
        }
        if (fields.size() != chain.dim() + 1)
            throw ParseError("expected " + std::to_string(chain.dim() + 1) + " fields, got " +
                                 std::to_string(fields.size()),
                             lineno);
        row.resize(chain.dim());
        try {
            for (std::size_t i = 0; i < chain.dim(); ++i) row[i] = parse_double(fields[i]);
            chain.append(row, parse_double(fields.back()));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    if (!have_header) throw ParseError("missing chain header", lineno);
    chain.seed = seed;
    chain.acceptance_rate = acceptance;
    chain.burn_in_acceptance_rate = burn_acceptance;
    return chain;
}

PosteriorChain load_chain(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot open chain file " + file.string());
    return read_chain(in);
}

}  // namespace creepgp
