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

#ifndef SPCM_CHANNEL_HPP
#define SPCM_CHANNEL_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace spcm::channel {

// Nakagami-m fading described on the power-gain axis: the instantaneous power
// gain is Gamma(shape rho, scale mean_gain/rho), so E[h] = mean_gain and
// rho = 1 is Rayleigh fading.
struct FadingSpec {
    double rho = 1.0;
    double mean_gain = 1.0;

    void validate() const;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// Node layout on the plane plus the path-loss exponent used to derive mean
// power gains (mean_gain = distance^-alpha).
struct Geometry {
    std::map<std::string, Vec2> nodes;
    double alpha = 2.0;

    void validate() const;
};

// One joint draw of all link power gains.
struct ChannelDraw {
    std::map<std::string, double> gains;
};

// Probability density of the power gain at h. All-finite inputs required;
// negative h is a domain error. At h = 0 the density limit is returned
// (0 for rho > 1, 1/mean_gain for rho = 1, +infinity for rho < 1).
double nakagami_pdf(const FadingSpec& spec, double h);

// Cumulative distribution of the power gain at h, via the regularized lower
// incomplete gamma function.
double nakagami_cdf(const FadingSpec& spec, double h);

// Mean power gain between two named nodes: distance^-alpha. Coincident nodes
// are a domain error (the far-field model breaks down at zero distance).
double mean_gain_from_geometry(const Geometry& geom, const std::string& from,
                               const std::string& to);

// Columnar sampler: n independent power gains for one link into out[0..n).
// The stream id isolates links from each other; draws are indexed, so the
// sequence for a fixed (seed, stream) never depends on evaluation order.
void sample_gain_array(const FadingSpec& spec, std::uint64_t seed, std::uint64_t stream,
                       std::size_t n, double* out);

// Joint draws for a set of named links; link streams are assigned in key
// order. count = 0 yields an empty sequence.
std::vector<ChannelDraw> sample_gains(const std::map<std::string, FadingSpec>& specs,
                                      std::uint64_t seed, std::int64_t count);

} // namespace spcm::channel

#endif
