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

#ifndef SPCM_LINK_HPP
#define SPCM_LINK_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "spcm/channel.hpp"
#include "spcm/hiermod.hpp"

namespace spcm::link {

// Cumulative decode failure per layer over one link: cum_ser[l-1] is the
// probability that SIC decoding fails at or before layer l.
struct LinkErrorProfile {
    std::vector<double> cum_ser;
};

// Probabilities of the L+1 reconstruction depths at a destination:
// probs[0] is total loss, probs[l] is "exactly layers 1..l delivered".
struct E2eEventDist {
    std::vector<double> probs;
};

// Monte Carlo integration settings shared by the expectation operations.
// When fixed_gains is set, every draw uses those gains (point-mass channel).
struct Integrator {
    std::size_t draws = 20000;
    std::uint64_t seed = 1;
    std::optional<std::array<double, 3>> fixed_gains; // h_sd, h_sr, h_rd
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t draws = 0;
};

// cum_l = 1 - prod_{k<=l}(1 - q_k) from per-layer conditional SERs q.
LinkErrorProfile cumulative_link_ser(const hiermod::LayerSerProfile& profile);

// Per-layer end-to-end failure: the direct link fails AND at least one hop
// of the relayed path fails, at the "up to layer l" granularity.
std::vector<double> e2e_ser(const LinkErrorProfile& direct,
                            const LinkErrorProfile& sr,
                            const LinkErrorProfile& rd);

// Difference the cumulative failure vector into the L+1 depth events.
E2eEventDist event_distribution(const std::vector<double>& e2e);

// Monte Carlo expectation of the layer-l end-to-end failure probability over
// the three fading links (layer is 1-based). Raw detector semantics: a
// zero-power layer contributes its guess-error rate, matching the
// deterministic layer_ser_profile composition.
McEstimate expected_e2e_ser(const hiermod::HierScheme& source_scheme,
                            const hiermod::HierScheme& relay_scheme,
                            const channel::FadingSpec& sd,
                            const channel::FadingSpec& sr,
                            const channel::FadingSpec& rd,
                            std::size_t layer,
                            const Integrator& integ);

} // namespace spcm::link

#endif
