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

#include "spcm/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "spcm/rng.hpp"
#include "spcm/special.hpp"

namespace spcm::channel {

void FadingSpec::validate() const {
    if (!std::isfinite(rho) || rho < 0.5)
        throw std::invalid_argument("FadingSpec: rho must be finite and >= 0.5");
    if (!std::isfinite(mean_gain) || mean_gain <= 0.0)
        throw std::invalid_argument("FadingSpec: mean_gain must be finite and positive");
}

void Geometry::validate() const {
    if (!std::isfinite(alpha) || alpha < 1.0)
        throw std::invalid_argument("Geometry: alpha must be finite and >= 1");
    for (const auto& [name, p] : nodes)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("Geometry: non-finite coordinates for node " + name);
}

double nakagami_pdf(const FadingSpec& spec, double h) {
    spec.validate();
    if (!std::isfinite(h) || h < 0.0)
        throw std::domain_error("nakagami_pdf: h must be finite and nonnegative");
    const double r = spec.rho / spec.mean_gain;
    if (h == 0.0) {
        if (spec.rho > 1.0)
            return 0.0;
        if (spec.rho == 1.0)
            return r;
        return std::numeric_limits<double>::infinity();
    }
    const double log_pdf = spec.rho * std::log(r) + (spec.rho - 1.0) * std::log(h) -
                           r * h - std::lgamma(spec.rho);
    return std::exp(log_pdf);
}

double nakagami_cdf(const FadingSpec& spec, double h) {
    spec.validate();
    if (!std::isfinite(h) || h < 0.0)
        throw std::domain_error("nakagami_cdf: h must be finite and nonnegative");
    return special::reg_lower_gamma(spec.rho, spec.rho * h / spec.mean_gain);
}

double mean_gain_from_geometry(const Geometry& geom, const std::string& from,
                               const std::string& to) {
    geom.validate();
    const auto a = geom.nodes.find(from);
    const auto b = geom.nodes.find(to);
    if (a == geom.nodes.end() || b == geom.nodes.end())
        throw std::invalid_argument("mean_gain_from_geometry: unknown node name");
    const double dx = a->second.x - b->second.x;
    const double dy = a->second.y - b->second.y;
    const double d = std::hypot(dx, dy);
    if (d == 0.0)
        throw std::domain_error("mean_gain_from_geometry: coincident nodes");
    return std::pow(d, -geom.alpha);
}

void sample_gain_array(const FadingSpec& spec, std::uint64_t seed, std::uint64_t stream,
                       std::size_t n, double* out) {
    spec.validate();
    const double scale = spec.mean_gain / spec.rho;
    for (std::size_t i = 0; i < n; ++i)
        out[i] = rng::gamma_draw(spec.rho, scale, seed, stream, i);
}

std::vector<ChannelDraw> sample_gains(const std::map<std::string, FadingSpec>& specs,
                                      std::uint64_t seed, std::int64_t count) {
    if (count < 0)
        throw std::invalid_argument("sample_gains: count must be nonnegative");
    for (const auto& [name, spec] : specs)
        spec.validate();
    std::vector<ChannelDraw> draws(static_cast<std::size_t>(count));
    std::uint64_t stream = 0;
    std::vector<double> column(static_cast<std::size_t>(count));
    for (const auto& [name, spec] : specs) {
        sample_gain_array(spec, seed, stream, column.size(), column.data());
        for (std::size_t i = 0; i < column.size(); ++i)
            draws[i].gains[name] = column[i];
        ++stream;
    }
    return draws;
}

} // namespace spcm::channel
