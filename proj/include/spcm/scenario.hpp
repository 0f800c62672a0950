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

#ifndef SPCM_SCENARIO_HPP
#define SPCM_SCENARIO_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "spcm/channel.hpp"
#include "spcm/evaluator.hpp"
#include "spcm/hiermod.hpp"

namespace spcm::scenario {

// A named layer stack plus whether a relay assists it. The direct variants
// keep the same stack but disable the relay path, so relayed and direct
// transmission can be compared at equal spectral efficiency.
struct SchemeDef {
    std::string name;
    bool relay = true;
    std::vector<hiermod::Modulation> layers;
};

// Built-in catalog: mono (one 64QAM layer), 2l (QPSK base + 16QAM
// enhancement), 3l (BPSK + BPSK + 16QAM), each in a relay- and a direct-only
// variant. All carry 6 bits per symbol.
const std::vector<SchemeDef>& builtin_schemes();
const SchemeDef* find_scheme(const std::string& name);
const SchemeDef& scheme_by_name(const std::string& name);

// Objective selector: p1 weighs users uniformly, p2 tracks the worst user.
enum class Metric { p1, p2 };
const char* metric_name(Metric m);
Metric metric_from_name(const std::string& name);

// Experiment description: a source at the origin, a relay at the square's
// center, destinations placed uniformly at random in the square, and a sweep
// over reference SNRs, schemes, and objectives. Reference SNR is measured at
// the source-relay distance, so transmit power is
// 10^(snr_db/10) * noise_psd * (extent/sqrt(2))^path_loss_exp.
struct Scenario {
    double extent = 10.0;
    std::size_t n_users = 10;
    double path_loss_exp = 3.0;
    double fading_shape = 2.0;
    double sigma2 = 1.0;
    double noise_psd = 1.0;
    std::uint64_t seed = 29;
    std::vector<double> snr_db = {-15.0, -5.0, 5.0, 15.0, 25.0};
    std::vector<std::string> schemes = {"relay-3l",   "direct-3l", "relay-2l",
                                        "direct-2l",  "relay-mono", "direct-mono"};
    std::vector<Metric> metrics = {Metric::p1, Metric::p2};
    std::size_t optimizer_draws = 20000;
    std::size_t report_draws = 200000;
    // Convergence threshold in units of sigma2.
    double epsilon = 1e-3;
    std::size_t max_iterations = 100;

    void validate() const;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// INI-style key = value parser ('#' and ';' comments, [scenario] and [run]
// sections). Unknown sections, unknown keys, malformed values, and duplicate
// keys are reported with their line number.
Scenario parse_config(const std::string& text);
Scenario load_config(const std::string& path);

// Node layout realized from the scenario seed: "src", "rly", and "u0".."uN-1".
struct Placement {
    channel::Geometry geom;
};
Placement make_placement(const Scenario& s);

// Transmit symbol energy that realizes the given reference SNR.
double reference_power(const Scenario& s, double snr_db);

// Assemble the evaluation problem for one scheme at one reference SNR.
evaluator::EvalProblem make_problem(const Scenario& s, const Placement& p,
                                    const SchemeDef& scheme, double snr_db,
                                    Metric metric);

} // namespace spcm::scenario

#endif
