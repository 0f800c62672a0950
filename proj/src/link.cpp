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

#include "spcm/link.hpp"

#include <cmath>
#include <stdexcept>

#include "spcm/kernels.hpp"

namespace spcm::link {

LinkErrorProfile cumulative_link_ser(const hiermod::LayerSerProfile& profile)
{
    if (profile.cond_ser.empty())
        throw std::invalid_argument("cumulative_link_ser: empty profile");
    LinkErrorProfile out;
    out.cum_ser.reserve(profile.cond_ser.size());
    double survive = 1.0;
    for (double q : profile.cond_ser) {
        if (!std::isfinite(q) || q < 0.0 || q > 1.0)
            throw std::invalid_argument("cumulative_link_ser: conditional SER outside [0, 1]");
        survive *= 1.0 - q;
        out.cum_ser.push_back(1.0 - survive);
    }
    return out;
}

std::vector<double> e2e_ser(const LinkErrorProfile& direct,
                            const LinkErrorProfile& sr,
                            const LinkErrorProfile& rd)
{
    const std::size_t nl = direct.cum_ser.size();
    if (nl == 0 || sr.cum_ser.size() != nl || rd.cum_ser.size() != nl)
        throw std::invalid_argument("e2e_ser: profiles must share a nonzero layer count");
    std::vector<double> out(nl);
    for (std::size_t l = 0; l < nl; ++l) {
        const double relay_fail = 1.0 - (1.0 - sr.cum_ser[l]) * (1.0 - rd.cum_ser[l]);
        out[l] = direct.cum_ser[l] * relay_fail;
    }
    return out;
}

E2eEventDist event_distribution(const std::vector<double>& e2e)
{
    const std::size_t nl = e2e.size();
    if (nl == 0)
        throw std::invalid_argument("event_distribution: empty input");
    double prev = 0.0;
    for (double p : e2e) {
        if (!std::isfinite(p) || p < 0.0 || p > 1.0)
            throw std::domain_error("event_distribution: entries must lie in [0, 1]");
        if (p < prev)
            throw std::domain_error("event_distribution: cumulative SERs must be nondecreasing");
        prev = p;
    }
    E2eEventDist dist;
    dist.probs.resize(nl + 1);
    dist.probs[0] = e2e[0];
    for (std::size_t l = 1; l < nl; ++l)
        dist.probs[l] = e2e[l] - e2e[l - 1];
    dist.probs[nl] = 1.0 - e2e[nl - 1];
    return dist;
}

McEstimate expected_e2e_ser(const hiermod::HierScheme& source_scheme,
                            const hiermod::HierScheme& relay_scheme,
                            const channel::FadingSpec& sd,
                            const channel::FadingSpec& sr,
                            const channel::FadingSpec& rd,
                            std::size_t layer,
                            const Integrator& integ)
{
    source_scheme.validate();
    relay_scheme.validate();
    const std::size_t nl = source_scheme.layers.size();
    if (relay_scheme.layers.size() != nl)
        throw std::invalid_argument("expected_e2e_ser: schemes must share the layer count");
    if (layer < 1 || layer > nl)
        throw std::invalid_argument("expected_e2e_ser: layer index out of range");
    if (integ.draws < 1)
        throw std::invalid_argument("expected_e2e_ser: draw count must be at least 1");

    const std::size_t n = integ.draws;
    std::vector<double> h_sd(n), h_sr(n), h_rd(n);
    if (integ.fixed_gains) {
        const auto& g = *integ.fixed_gains;
        for (std::size_t i = 0; i < n; ++i) {
            h_sd[i] = g[0];
            h_sr[i] = g[1];
            h_rd[i] = g[2];
        }
    } else {
        sd.validate();
        sr.validate();
        rd.validate();
        channel::sample_gain_array(sd, integ.seed, 0, n, h_sd.data());
        channel::sample_gain_array(sr, integ.seed, 1, n, h_sr.data());
        channel::sample_gain_array(rd, integ.seed, 2, n, h_rd.data());
    }

    const kernels::SerTable table_s =
        hiermod::build_ser_table(source_scheme, hiermod::ZeroPowerPolicy::guess_rate);
    const kernels::SerTable table_r =
        hiermod::build_ser_table(relay_scheme, hiermod::ZeroPowerPolicy::guess_rate);

    std::vector<double> cum_sd(nl * n), cum_sr(nl * n), cum_rd(nl * n);
    kernels::cum_ser_batch(table_s, h_sd.data(), n, cum_sd.data());
    kernels::cum_ser_batch(table_s, h_sr.data(), n, cum_sr.data());
    kernels::cum_ser_batch(table_r, h_rd.data(), n, cum_rd.data());

    const double* psd = cum_sd.data() + (layer - 1) * n;
    const double* psr = cum_sr.data() + (layer - 1) * n;
    const double* prd = cum_rd.data() + (layer - 1) * n;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = psd[i] * (1.0 - (1.0 - psr[i]) * (1.0 - prd[i]));
        sum += v;
        sumsq += v * v;
    }

    McEstimate est;
    est.draws = n;
    est.value = sum / static_cast<double>(n);
    if (n > 1) {
        const double var = (sumsq - sum * est.value) / static_cast<double>(n - 1);
        est.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
    }
    return est;
}

} // namespace spcm::link
