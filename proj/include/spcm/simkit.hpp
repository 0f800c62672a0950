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

#ifndef SPCM_SIMKIT_HPP
#define SPCM_SIMKIT_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "spcm/channel.hpp"
#include "spcm/eed.hpp"
#include "spcm/hiermod.hpp"

namespace spcm::simkit {

// What the relay transmits on layers it failed to decode.
//   surrogate: fresh random constellation symbols stand in for the missing
//              layers, so the forwarded signal always carries the whole
//              superposition and the relay-to-destination error statistics do
//              not depend on the source-to-relay outcome.
//   renormalized: only the decoded prefix is forwarded, with its power
//                 fractions scaled up so the relay still spends its full
//                 power budget (diagnostic mode).
enum class RelayFill { surrogate, renormalized };

struct SimConfig {
    std::size_t symbols_per_slot = 50;
    std::size_t slots = 4000;
    std::uint64_t seed = 2026;
    RelayFill relay_fill = RelayFill::surrogate;
    bool relay_enabled = true;
    // Fixed power gains (sd, sr, rd) replace the per-slot fading draws.
    std::optional<std::array<double, 3>> fixed_gains;

    void validate() const;
};

// Per-link decoding statistics. cond_ser[l] is the genie-aided conditional
// symbol error rate of layer l (lower layers removed exactly before the
// decision); depth_freq[d] is the fraction of symbols whose successive
// cancellation chain survived exactly d layers. Standard errors are computed
// across slots, so they stay valid under per-slot fading.
struct LinkStats {
    std::vector<double> cond_ser;
    std::vector<double> cond_ser_se;
    std::vector<double> depth_freq;
};

struct SimReport {
    std::size_t layers = 0;
    std::size_t symbols = 0;
    // Delivered-depth distribution at the destination: event_freq[d] is the
    // fraction of symbols whose first d layers (and no more) arrived via the
    // better of the direct and relayed paths.
    std::vector<double> event_freq;
    std::vector<double> event_se;
    double eed = 0.0;
    double eed_se = 0.0;
    // sd: source->destination, sr: source->relay, rd: relay->destination.
    // sr and rd are all-zero when the relay is disabled.
    LinkStats sd, sr, rd;
};

// Symbol-level Monte Carlo of one destination served by a direct link and a
// decode-and-forward relay. Per slot one fading draw per link; per symbol the
// layered signal is superimposed, carried over both hops with independent
// Gaussian noise, and decoded by successive interference cancellation at the
// relay and at the destination.
SimReport simulate(const SimConfig& cfg,
                   const hiermod::HierScheme& source_scheme,
                   const hiermod::HierScheme& relay_scheme,
                   const channel::FadingSpec& sd,
                   const channel::FadingSpec& sr,
                   const channel::FadingSpec& rd,
                   const eed::EedModel& model);

// Paired per-slot test that end-to-end failure factors across links: within a
// slot the three noise processes are independent given the fading draws, so
// the measured rate of "layer l not delivered" should match
// p_sd * (1 - (1 - p_sr) * (1 - p_rd)) built from the same slot's per-link
// rates. measured/predicted are slot-averaged, diff_se is the standard error
// of the paired per-slot difference, and max_sigma is the largest
// |measured - predicted| in units of that standard error.
struct FactorizationReport {
    std::vector<double> measured;
    std::vector<double> predicted;
    std::vector<double> diff_se;
    double max_abs_diff = 0.0;
    double max_sigma = 0.0;
};

FactorizationReport validate_factorization(const SimConfig& cfg,
                                           const hiermod::HierScheme& source_scheme,
                                           const hiermod::HierScheme& relay_scheme,
                                           const channel::FadingSpec& sd,
                                           const channel::FadingSpec& sr,
                                           const channel::FadingSpec& rd);

// Fast single-link oracle at a fixed power gain: i.i.d. symbols, genie-aided
// per-layer conditional error counts, binomial standard errors.
struct LinkSimResult {
    std::vector<double> cond_ser;
    std::vector<double> cond_ser_se;
    std::size_t symbols = 0;
};

LinkSimResult simulate_link(const hiermod::HierScheme& scheme, double gain,
                            std::size_t symbols, std::uint64_t seed);

} // namespace spcm::simkit

#endif
