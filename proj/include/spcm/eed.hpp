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

#ifndef SPCM_EED_HPP
#define SPCM_EED_HPP

#include <cstddef>
#include <vector>

#include "spcm/channel.hpp"
#include "spcm/hiermod.hpp"
#include "spcm/link.hpp"

namespace spcm::eed {

// Distortion model of an L-layer scalable Gaussian source: reconstructing
// through layer l leaves quantizer distortion dq[l-1] = 2^(-2 sum_{j<=l} R_j),
// and losing everything leaves the source variance sigma2.
struct EedModel {
    double sigma2 = 1.0;
    std::vector<int> rates;
    std::vector<double> dq;

    // Builds dq from per-layer rates; validates.
    static EedModel from_rates(double sigma2, const std::vector<int>& rates);

    void validate() const;
};

// Distortion expected over the reconstruction-depth events:
// sigma2 * p(0) + sum_l dq[l-1] * p(l).
double instantaneous_eed(const link::E2eEventDist& events, const EedModel& model);

namespace detail {

// Summed-by-parts distortion from a nondecreasing cumulative failure vector
// p[0..nl), assuming validated inputs. Starting from dq_L and adding
// nonnegative gap terms in ascending distortion order makes the rounded
// result provably >= dq_L; monotonicity of rounding and the exact
// power-of-two partial sums cap it at sigma2 (the p1 == 1 case is exact by
// substitution).
inline double eed_ascending(const double* p, const double* dq, double sigma2, std::size_t nl)
{
    if (p[0] >= 1.0) return sigma2;
    double acc = dq[nl - 1];
    for (std::size_t l = nl - 1; l >= 1; --l)
        acc += (dq[l - 1] - dq[l]) * p[l];
    acc += (sigma2 - dq[0]) * p[0];
    return acc;
}

} // namespace detail

// Same quantity evaluated directly from the cumulative end-to-end failure
// vector p (p[l-1] = failure at or before layer l), in the summed-by-parts
// form dq_L + sum_l (dq_{l-1} - dq_l) p_l with dq_0 = sigma2. The ascending
// accumulation keeps the result inside [dq_L, sigma2] under floating-point
// rounding, which the event-weighted form cannot guarantee.
double eed_from_cum_ser(const std::vector<double>& cum_e2e, const EedModel& model);

// Monte Carlo expectation of the end-to-end distortion over the three fading
// links for one destination. Pipeline semantics: zero-power layers (and zero
// channel gain) deliver nothing.
link::McEstimate expected_eed(const hiermod::HierScheme& source_scheme,
                              const hiermod::HierScheme& relay_scheme,
                              const channel::FadingSpec& sd,
                              const channel::FadingSpec& sr,
                              const channel::FadingSpec& rd,
                              const EedModel& model,
                              const link::Integrator& integ);

// Multi-user objective: either a convex weight vector over users (weights c,
// one per user, in [0,1] and summing to 1) or the worst user's value.
struct ObjectiveWeights {
    std::vector<double> c;
    bool worst = false;

    static ObjectiveWeights uniform(std::size_t n_users);
    static ObjectiveWeights worst_user();

    void validate(std::size_t n_users) const;
};

double weighted_objective(const std::vector<double>& per_user_eed,
                          const ObjectiveWeights& weights);

} // namespace spcm::eed

#endif
