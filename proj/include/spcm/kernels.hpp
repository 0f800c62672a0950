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

#ifndef SPCM_KERNELS_HPP
#define SPCM_KERNELS_HPP

#include <cstddef>
#include <vector>

namespace spcm::kernels {

// Precompiled Q-function term table for one link's layered SIC receiver.
//
// For power gain h, the per-axis symbol error probability of layer l is
//   p_axis(h) = sum_j weight[j] * erfc(coef[j] * sqrt(h)),
// with the Q->erfc conversion (factor 1/2, argument 1/sqrt(2)) already folded
// into the stored weights and coefficients. Coefficients may be negative
// (overlapping constellations). The two axes combine as 1 - (1-px)(1-py), and
// the cumulative failure probability cascades multiplicatively across layers.
struct AxisTerms {
    std::vector<double> coef;
    std::vector<double> weight;
};

struct LayerTerms {
    AxisTerms x;
    AxisTerms y;
    // Layer carries exactly zero signal power: undecodable at any gain.
    bool dead = false;
};

struct SerTable {
    std::vector<LayerTerms> layers;
    // Pipeline convention: at h == 0 no layer carries signal, so every layer
    // fails. Raw detector tables leave this off and report guess rates.
    bool zero_gain_lost = false;
};

enum class Backend {
    auto_detect,
    scalar,
    avx2,
};

// Selects the kernel implementation used by the batch entry points below.
// auto_detect picks the best supported variant at first use. Requesting an
// unsupported variant throws std::invalid_argument. Thread-unsafe by design:
// call during setup, not concurrently with batch evaluation.
void set_backend(Backend b);

// Variant that will execute batch calls right now (auto_detect resolved).
Backend active_backend();

const char* backend_name(Backend b);

Backend backend_from_name(const char* name);

bool avx2_available();

// y[i] = erfc(x[i]). Accuracy within a few ulp of the C library in the
// normal range; results below ~1e-300 may flush to 0.
void erfc_batch(const double* x, double* y, std::size_t n);

// y[i] = exp(x[i]); arguments are clamped to [-746, 709.78] so results
// saturate at 0 / ~1.79e308 instead of overflowing.
void exp_batch(const double* x, double* y, std::size_t n);

// Scalar convenience wrapper over the reference erfc (backend-independent).
double erfc1(double x);

// cum[l*n + i] = 1 - prod_{k <= l} (1 - q_k(h[i])) for layers l = 0..L-1.
// Preconditions: h[i] >= 0 and finite.
void cum_ser_batch(const SerTable& table, const double* h, std::size_t n, double* cum);

} // namespace spcm::kernels

#endif
