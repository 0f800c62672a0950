// spcm: superposition-coded multicast distortion analysis and power allocation
// Copyright (C) 2026 spcm developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "spcm/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "spcm/eed.hpp"
#include "spcm/rng.hpp"

namespace spcm::scenario {

namespace {

constexpr std::uint64_t k_stream_placement = 0xA11;

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == ',') {
            if (!cur.empty()) {
                out.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

[[noreturn]] void fail(int line, const std::string& what) {
    throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& v, int line, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size() || !std::isfinite(x))
            fail(line, "value '" + v + "' for " + key + " is not a finite number");
        return x;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail(line, "value '" + v + "' for " + key + " is not a number");
    }
}

std::uint64_t parse_u64(const std::string& v, int line, const std::string& key) {
    try {
        // stoull accepts a leading minus and wraps; reject it explicitly.
        if (v.find('-') != std::string::npos)
            fail(line, "value '" + v + "' for " + key + " is not an unsigned integer");
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size())
            fail(line, "value '" + v + "' for " + key + " is not an unsigned integer");
        return static_cast<std::uint64_t>(x);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail(line, "value '" + v + "' for " + key + " is not an unsigned integer");
    }
}

std::size_t parse_size(const std::string& v, int line, const std::string& key) {
    return static_cast<std::size_t>(parse_u64(v, line, key));
}

} // namespace

const std::vector<SchemeDef>& builtin_schemes() {
    using hiermod::Modulation;
    static const std::vector<SchemeDef> defs = {
        {"relay-3l", true, {Modulation::bpsk, Modulation::bpsk, Modulation::qam16}},
        {"direct-3l", false, {Modulation::bpsk, Modulation::bpsk, Modulation::qam16}},
        {"relay-2l", true, {Modulation::qpsk, Modulation::qam16}},
        {"direct-2l", false, {Modulation::qpsk, Modulation::qam16}},
        {"relay-mono", true, {Modulation::qam64}},
        {"direct-mono", false, {Modulation::qam64}},
    };
    return defs;
}

const SchemeDef* find_scheme(const std::string& name) {
    for (const SchemeDef& d : builtin_schemes())
        if (d.name == name)
            return &d;
    return nullptr;
}

const SchemeDef& scheme_by_name(const std::string& name) {
    const SchemeDef* d = find_scheme(name);
    if (!d)
        throw std::invalid_argument("unknown scheme '" + name + "'");
    return *d;
}

const char* metric_name(Metric m) {
    return m == Metric::p1 ? "p1" : "p2";
}

Metric metric_from_name(const std::string& name) {
    const std::string n = lower(name);
    if (n == "p1")
        return Metric::p1;
    if (n == "p2")
        return Metric::p2;
    throw std::invalid_argument("unknown metric '" + name + "' (expected p1 or p2)");
}

void Scenario::validate() const {
    if (!(extent > 0.0) || !std::isfinite(extent))
        throw std::invalid_argument("scenario: extent must be positive");
    if (n_users == 0)
        throw std::invalid_argument("scenario: at least one user required");
    if (!(path_loss_exp > 0.0) || !std::isfinite(path_loss_exp))
        throw std::invalid_argument("scenario: path_loss_exponent must be positive");
    if (!(fading_shape > 0.0) || !std::isfinite(fading_shape))
        throw std::invalid_argument("scenario: fading_shape must be positive");
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw std::invalid_argument("scenario: sigma2 must be positive");
    if (!(noise_psd > 0.0) || !std::isfinite(noise_psd))
        throw std::invalid_argument("scenario: noise_psd must be positive");
    if (snr_db.empty())
        throw std::invalid_argument("scenario: snr_db list is empty");
    for (double s : snr_db)
        if (!std::isfinite(s))
            throw std::invalid_argument("scenario: snr_db entries must be finite");
    if (schemes.empty())
        throw std::invalid_argument("scenario: scheme list is empty");
    for (const std::string& s : schemes)
        scheme_by_name(s);
    if (metrics.empty())
        throw std::invalid_argument("scenario: metric list is empty");
    if (optimizer_draws < 2 || report_draws < 2)
        throw std::invalid_argument("scenario: draw counts must be at least 2");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("scenario: epsilon must be positive");
    if (max_iterations == 0)
        throw std::invalid_argument("scenario: max_iterations must be positive");
}

Scenario parse_config(const std::string& text) {
    Scenario s;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    std::set<std::string> seen;
    while (std::getline(in, raw)) {
        ++line;
        std::string t = raw;
        const std::size_t hash = t.find_first_of("#;");
        if (hash != std::string::npos)
            t = t.substr(0, hash);
        t = trim(t);
        if (t.empty())
            continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                fail(line, "unterminated section header");
            section = lower(trim(t.substr(1, t.size() - 2)));
            if (section != "scenario" && section != "run")
                fail(line, "unknown section [" + section + "]");
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            fail(line, "expected key = value");
        const std::string key = lower(trim(t.substr(0, eq)));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            fail(line, "empty key");
        if (value.empty())
            fail(line, "empty value for " + key);
        if (section.empty())
            fail(line, "key '" + key + "' outside any section");
        const std::string fq = section + "." + key;
        if (!seen.insert(fq).second)
            fail(line, "duplicate key '" + key + "' in [" + section + "]");

        if (section == "scenario") {
            if (key == "extent")
                s.extent = parse_double(value, line, key);
            else if (key == "users")
                s.n_users = parse_size(value, line, key);
            else if (key == "path_loss_exponent")
                s.path_loss_exp = parse_double(value, line, key);
            else if (key == "fading_shape")
                s.fading_shape = parse_double(value, line, key);
            else if (key == "sigma2")
                s.sigma2 = parse_double(value, line, key);
            else if (key == "noise_psd")
                s.noise_psd = parse_double(value, line, key);
            else if (key == "seed")
                s.seed = parse_u64(value, line, key);
            else
                fail(line, "unknown key '" + key + "' in [scenario]");
        } else {
            if (key == "snr_db") {
                s.snr_db.clear();
                for (const std::string& v : split_list(value))
                    s.snr_db.push_back(parse_double(v, line, key));
            } else if (key == "schemes") {
                s.schemes = split_list(value);
                for (const std::string& name : s.schemes)
                    if (!find_scheme(name))
                        fail(line, "unknown scheme '" + name + "'");
            } else if (key == "metrics") {
                s.metrics.clear();
                for (const std::string& v : split_list(value)) {
                    try {
                        s.metrics.push_back(metric_from_name(v));
                    } catch (const std::invalid_argument& e) {
                        fail(line, e.what());
                    }
                }
            } else if (key == "optimizer_draws") {
                s.optimizer_draws = parse_size(value, line, key);
            } else if (key == "report_draws") {
                s.report_draws = parse_size(value, line, key);
            } else if (key == "epsilon") {
                s.epsilon = parse_double(value, line, key);
            } else if (key == "max_iterations") {
                s.max_iterations = parse_size(value, line, key);
            } else {
                fail(line, "unknown key '" + key + "' in [run]");
            }
        }
    }
    s.validate();
    return s;
}

Scenario load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

Placement make_placement(const Scenario& s) {
    s.validate();
    Placement p;
    p.geom.alpha = s.path_loss_exp;
    p.geom.nodes["src"] = {0.0, 0.0};
    p.geom.nodes["rly"] = {0.5 * s.extent, 0.5 * s.extent};
    for (std::size_t u = 0; u < s.n_users; ++u) {
        double r[2];
        rng::uniform2(s.seed, k_stream_placement, u, r);
        p.geom.nodes["u" + std::to_string(u)] = {r[0] * s.extent, r[1] * s.extent};
    }
    p.geom.validate();
    return p;
}

double reference_power(const Scenario& s, double snr_db) {
    const double ref_dist = s.extent / std::sqrt(2.0);
    return std::pow(10.0, snr_db / 10.0) * s.noise_psd *
           std::pow(ref_dist, s.path_loss_exp);
}

evaluator::EvalProblem make_problem(const Scenario& s, const Placement& p,
                                    const SchemeDef& scheme, double snr_db,
                                    Metric metric) {
    s.validate();
    const std::size_t nl = scheme.layers.size();
    const double power = reference_power(s, snr_db);

    evaluator::EvalProblem prob;
    prob.source_scheme.layers = scheme.layers;
    prob.source_scheme.beta.assign(nl, 0.0);
    prob.source_scheme.symbol_energy = power;
    prob.source_scheme.noise_psd = s.noise_psd;
    prob.relay_scheme = prob.source_scheme;
    prob.relay_enabled = scheme.relay;

    prob.sr = {s.fading_shape, channel::mean_gain_from_geometry(p.geom, "src", "rly")};
    prob.users.resize(s.n_users);
    for (std::size_t u = 0; u < s.n_users; ++u) {
        const std::string name = "u" + std::to_string(u);
        prob.users[u].sd = {s.fading_shape,
                            channel::mean_gain_from_geometry(p.geom, "src", name)};
        prob.users[u].rd = {s.fading_shape,
                            channel::mean_gain_from_geometry(p.geom, "rly", name)};
    }

    std::vector<int> rates(nl);
    for (std::size_t l = 0; l < nl; ++l)
        rates[l] = hiermod::bits_per_symbol(scheme.layers[l]);
    prob.model = eed::EedModel::from_rates(s.sigma2, rates);

    prob.weights = metric == Metric::p1 ? eed::ObjectiveWeights::uniform(s.n_users)
                                        : eed::ObjectiveWeights::worst_user();
    prob.draws = s.optimizer_draws;
    prob.seed = s.seed;
    prob.validate();
    return prob;
}

} // namespace spcm::scenario
