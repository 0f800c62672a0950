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

#include "spcm/eed.hpp"

#include <cmath>
#include <stdexcept>

#include "spcm/kernels.hpp"

namespace spcm::eed {

EedModel EedModel::from_rates(double sigma2, const std::vector<int>& rates)
{
    EedModel m;
    m.sigma2 = sigma2;
    m.rates = rates;
    m.dq.reserve(rates.size());
    int cum_bits = 0;
    for (int r : rates) {
        if (r < 1)
            throw std::invalid_argument("EedModel: per-layer rates must be positive");
        cum_bits += r;
        m.dq.push_back(std::exp2(-2.0 * static_cast<double>(cum_bits)));
    }
    m.validate();
    return m;
}

void EedModel::validate() const
{
    if (!std::isfinite(sigma2) || sigma2 <= 0.0)
        throw std::invalid_argument("EedModel: sigma2 must be positive and finite");
    if (rates.empty() || rates.size() != dq.size())
        throw std::invalid_argument("EedModel: rates and dq must be nonempty and equal length");
    double prev = sigma2;
    for (std::size_t l = 0; l < dq.size(); ++l) {
        if (rates[l] < 1)
            throw std::invalid_argument("EedModel: per-layer rates must be positive");
        if (!std::isfinite(dq[l]) || dq[l] <= 0.0 || dq[l] >= prev)
            throw std::invalid_argument(
                "EedModel: dq must satisfy 0 < dq_L < ... < dq_1 < sigma2");
        prev = dq[l];
    }
}

double instantaneous_eed(const link::E2eEventDist& events, const EedModel& model)
{
    model.validate();
    const std::size_t nl = model.dq.size();
    if (events.probs.size() != nl + 1)
        throw std::invalid_argument("instantaneous_eed: event count must be layers + 1");
    double acc = model.sigma2 * events.probs[0];
    for (std::size_t l = 1; l <= nl; ++l)
        acc += model.dq[l - 1] * events.probs[l];
    return acc;
}

double eed_from_cum_ser(const std::vector<double>& cum_e2e, const EedModel& model)
{
    model.validate();
    const std::size_t nl = model.dq.size();
    if (cum_e2e.size() != nl)
        throw std::invalid_argument("eed_from_cum_ser: layer count mismatch");
    double prev = 0.0;
    for (double p : cum_e2e) {
        if (!std::isfinite(p) || p < 0.0 || p > 1.0 || p < prev)
            throw std::domain_error(
                "eed_from_cum_ser: cumulative SERs must be nondecreasing in [0, 1]");
        prev = p;
    }
    return detail::eed_ascending(cum_e2e.data(), model.dq.data(), model.sigma2, nl);
}

link::McEstimate expected_eed(const hiermod::HierScheme& source_scheme,
                              const hiermod::HierScheme& relay_scheme,
                              const channel::FadingSpec& sd,
                              const channel::FadingSpec& sr,
                              const channel::FadingSpec& rd,
                              const EedModel& model,
                              const link::Integrator& integ)
{
    source_scheme.validate();
    relay_scheme.validate();
    model.validate();
    const std::size_t nl = source_scheme.layers.size();
    if (relay_scheme.layers.size() != nl)
        throw std::invalid_argument("expected_eed: schemes must share the layer count");
    if (model.dq.size() != nl)
        throw std::invalid_argument("expected_eed: model layer count mismatch");
    if (integ.draws < 1)
        throw std::invalid_argument("expected_eed: draw count must be at least 1");

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
        hiermod::build_ser_table(source_scheme, hiermod::ZeroPowerPolicy::lost);
    const kernels::SerTable table_r =
        hiermod::build_ser_table(relay_scheme, hiermod::ZeroPowerPolicy::lost);

    std::vector<double> cum_sd(nl * n), cum_sr(nl * n), cum_rd(nl * n);
    kernels::cum_ser_batch(table_s, h_sd.data(), n, cum_sd.data());
    kernels::cum_ser_batch(table_s, h_sr.data(), n, cum_sr.data());
    kernels::cum_ser_batch(table_r, h_rd.data(), n, cum_rd.data());

    double sum = 0.0, sumsq = 0.0;
    double p[4];
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = 0; l < nl; ++l) {
            const double psd = cum_sd[l * n + i];
            const double psr = cum_sr[l * n + i];
            const double prd = cum_rd[l * n + i];
            p[l] = psd * (1.0 - (1.0 - psr) * (1.0 - prd));
        }
        const double v = detail::eed_ascending(p, model.dq.data(), model.sigma2, nl);
        sum += v;
        sumsq += v * v;
    }

    link::McEstimate est;
    est.draws = n;
    est.value = sum / static_cast<double>(n);
    if (n > 1) {
        const double var = (sumsq - sum * est.value) / static_cast<double>(n - 1);
        est.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
    }
    return est;
}

ObjectiveWeights ObjectiveWeights::uniform(std::size_t n_users)
{
    if (n_users == 0)
        throw std::invalid_argument("ObjectiveWeights: need at least one user");
    ObjectiveWeights w;
    w.c.assign(n_users, 1.0 / static_cast<double>(n_users));
    return w;
}

ObjectiveWeights ObjectiveWeights::worst_user()
{
    ObjectiveWeights w;
    w.worst = true;
    return w;
}

void ObjectiveWeights::validate(std::size_t n_users) const
{
    if (worst) {
        if (!c.empty())
            throw std::invalid_argument("ObjectiveWeights: worst-user selector takes no weights");
        return;
    }
    if (c.size() != n_users)
        throw std::invalid_argument("ObjectiveWeights: weight count must match user count");
    double sum = 0.0;
    for (double v : c) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0)
            throw std::invalid_argument("ObjectiveWeights: weights must lie in [0, 1]");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("ObjectiveWeights: weights must sum to 1");
}

double weighted_objective(const std::vector<double>& per_user_eed,
                          const ObjectiveWeights& weights)
{
    if (per_user_eed.empty())
        throw std::invalid_argument("weighted_objective: empty input");
    weights.validate(per_user_eed.size());
    if (weights.worst) {
        double best = per_user_eed[0];
        for (double v : per_user_eed) best = std::max(best, v);
        return best;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < per_user_eed.size(); ++i)
        acc += weights.c[i] * per_user_eed[i];
    return acc;
}

} // namespace spcm::eed
