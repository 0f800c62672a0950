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

#ifndef SPCM_HIERMOD_HPP
#define SPCM_HIERMOD_HPP

#include <string>
#include <vector>

#include "spcm/kernels.hpp"

namespace spcm::hiermod {

enum class Modulation { bpsk, qpsk, qam16, qam64 };

int bits_per_symbol(Modulation m);
const char* modulation_name(Modulation m);
Modulation modulation_from_name(const std::string& name);

// Superposition-coded layer stack. Layer 1 is the base layer; receivers
// decode in listed order with successive interference cancellation. beta are
// per-layer power fractions of symbol_energy (their sum is NOT constrained
// here: the optimizer's relaxation explores the full [0,1]^L box).
struct HierScheme {
    std::vector<Modulation> layers;
    std::vector<double> beta;
    double symbol_energy = 1.0;
    double noise_psd = 1.0;

    void validate() const;
    HierScheme with_beta(const std::vector<double>& b) const;
};

// Genie-aided conditional symbol error rate per layer: lower layers removed
// exactly, upper layers superimposed as interference.
struct LayerSerProfile {
    std::vector<double> cond_ser;
};

// Gaussian tail probability Q(x) = P(N(0,1) > x). Total on finite inputs;
// accepts negative arguments.
double q_function(double x);

// Unit-energy per-axis amplitude levels of one modulation (in-phase /
// quadrature decomposition; BPSK occupies the in-phase axis only).
struct AxisLevels {
    std::vector<double> x;
    std::vector<double> y;
};
AxisLevels unit_levels(Modulation m);

// Zero-power handling when compiling a scheme into a kernel table.
//   guess_rate: a zero-power layer still reports the detector's guess-error
//               probability (raw detector statistics).
//   lost: a zero-power layer is undecodable (conditional SER 1), and h == 0
//         loses every layer; this is the semantics of the end-to-end
//         distortion pipeline, where no signal means no delivery.
enum class ZeroPowerPolicy { guess_rate, lost };

// Compile the per-layer Q-term tables for this scheme (enumerating all
// interferer amplitude patterns per axis, deduplicated by coefficient).
kernels::SerTable build_ser_table(const HierScheme& scheme, ZeroPowerPolicy policy);

// Exact per-layer conditional SERs at power gain h (raw detector semantics).
LayerSerProfile layer_ser_profile(double h, const HierScheme& scheme);

// Closed-form base-layer SER of the two-layer QPSK/QPSK stack: the four-case
// average over the enhancement layer's relative signs.
double qpsk_qpsk_base_ser(double h, const HierScheme& scheme);

// Closed-form enhancement-layer conditional SER of the QPSK/QPSK stack after
// exact base-layer cancellation: 2Q(g) - Q(g)^2 with g = sqrt(h E2 / N0).
double qpsk_qpsk_enh_ser_cond(double h, const HierScheme& scheme);

} // namespace spcm::hiermod

#endif
