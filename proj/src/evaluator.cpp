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

#include "spcm/evaluator.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "spcm/kernels.hpp"

namespace spcm::evaluator {

void EvalProblem::validate() const
{
    source_scheme.validate();
    relay_scheme.validate();
    if (relay_scheme.layers.size() != source_scheme.layers.size())
        throw std::invalid_argument("EvalProblem: schemes must share the layer count");
    model.validate();
    if (model.dq.size() != source_scheme.layers.size())
        throw std::invalid_argument("EvalProblem: model layer count mismatch");
    if (users.empty())
        throw std::invalid_argument("EvalProblem: need at least one user");
    sr.validate();
    for (const auto& u : users) {
        u.sd.validate();
        u.rd.validate();
    }
    weights.validate(users.size());
    if (draws < 2)
        throw std::invalid_argument("EvalProblem: need at least 2 draws");
}

std::size_t ScenarioEvaluator::KeyHash::operator()(const Key& k) const noexcept
{
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint64_t w : k) {
        h ^= w;
        h *= 1099511628211ull;
        h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
}

ScenarioEvaluator::ScenarioEvaluator(EvalProblem prob) : prob_(std::move(prob))
{
    prob_.validate();
    n_layers_ = prob_.source_scheme.layers.size();
    const std::size_t n = prob_.draws;
    const std::size_t nu = prob_.users.size();

    h_sr_.resize(n);
    channel::sample_gain_array(prob_.sr, prob_.seed, 0, n, h_sr_.data());
    h_sd_.resize(nu * n);
    h_rd_.resize(nu * n);
    for (std::size_t u = 0; u < nu; ++u) {
        channel::sample_gain_array(prob_.users[u].sd, prob_.seed, 2 * u + 1, n,
                                   h_sd_.data() + u * n);
        channel::sample_gain_array(prob_.users[u].rd, prob_.seed, 2 * u + 2, n,
                                   h_rd_.data() + u * n);
    }
    src_cum_.resize((nu + 1) * n_layers_ * n);
    rly_cum_.resize(nu * n_layers_ * n);
    wacc_.resize(n);
}

namespace {

std::vector<std::uint64_t> beta_key(const std::vector<double>& beta, std::size_t n)
{
    std::vector<std::uint64_t> key;
    key.reserve(beta.size() + 1);
    key.push_back(static_cast<std::uint64_t>(n));
    for (double b : beta) key.push_back(std::bit_cast<std::uint64_t>(b));
    return key;
}

} // namespace

const double* ScenarioEvaluator::source_side(const std::vector<double>& beta_s, std::size_t n)
{
    Key key = beta_key(beta_s, n);
    if (key == src_key_) return src_cum_.data();
    const kernels::SerTable table = hiermod::build_ser_table(
        prob_.source_scheme.with_beta(beta_s), hiermod::ZeroPowerPolicy::lost);
    const std::size_t nu = prob_.users.size();
    const std::size_t block = n_layers_ * n;
    kernels::cum_ser_batch(table, h_sr_.data(), n, src_cum_.data());
    for (std::size_t u = 0; u < nu; ++u)
        kernels::cum_ser_batch(table, h_sd_.data() + u * prob_.draws, n,
                               src_cum_.data() + (u + 1) * block);
    src_key_ = std::move(key);
    return src_cum_.data();
}

const double* ScenarioEvaluator::relay_side(const std::vector<double>& beta_r, std::size_t n)
{
    Key key = beta_key(beta_r, n);
    if (key == rly_key_) return rly_cum_.data();
    const kernels::SerTable table = hiermod::build_ser_table(
        prob_.relay_scheme.with_beta(beta_r), hiermod::ZeroPowerPolicy::lost);
    const std::size_t nu = prob_.users.size();
    const std::size_t block = n_layers_ * n;
    for (std::size_t u = 0; u < nu; ++u)
        kernels::cum_ser_batch(table, h_rd_.data() + u * prob_.draws, n,
                               rly_cum_.data() + u * block);
    rly_key_ = std::move(key);
    return rly_cum_.data();
}

double ScenarioEvaluator::compute(const std::vector<double>& beta_s,
                                  const std::vector<double>& beta_r, std::size_t n,
                                  EvalResult* detail)
{
    const std::size_t nu = prob_.users.size();
    const std::size_t nl = n_layers_;
    const std::size_t block = nl * n;
    const double* src = source_side(beta_s, n);
    const double* rly = prob_.relay_enabled ? relay_side(beta_r, n) : nullptr;
    const double* dq = prob_.model.dq.data();
    const double sigma2 = prob_.model.sigma2;
    const bool weighted = !prob_.weights.worst;

    if (weighted) wacc_.assign(n, 0.0);
    std::vector<double> user_mean(nu), user_se(nu);
    double p[4];
    for (std::size_t u = 0; u < nu; ++u) {
        const double* csr = src;
        const double* csd = src + (u + 1) * block;
        const double* crd = prob_.relay_enabled ? rly + u * block : nullptr;
        const double cu = weighted ? prob_.weights.c[u] : 0.0;
        double sum = 0.0, sumsq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (prob_.relay_enabled) {
                for (std::size_t l = 0; l < nl; ++l) {
                    const double relay_fail =
                        1.0 - (1.0 - csr[l * n + i]) * (1.0 - crd[l * n + i]);
                    p[l] = csd[l * n + i] * relay_fail;
                }
            } else {
                for (std::size_t l = 0; l < nl; ++l) p[l] = csd[l * n + i];
            }
            const double v = eed::detail::eed_ascending(p, dq, sigma2, nl);
            sum += v;
            sumsq += v * v;
            if (weighted) wacc_[i] += cu * v;
        }
        user_mean[u] = sum / static_cast<double>(n);
        const double var =
            (sumsq - sum * user_mean[u]) / static_cast<double>(n - 1);
        user_se[u] = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
    }

    double obj, obj_se;
    if (weighted) {
        double sum = 0.0, sumsq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += wacc_[i];
            sumsq += wacc_[i] * wacc_[i];
        }
        obj = sum / static_cast<double>(n);
        const double var = (sumsq - sum * obj) / static_cast<double>(n - 1);
        obj_se = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
    } else {
        std::size_t worst = 0;
        for (std::size_t u = 1; u < nu; ++u)
            if (user_mean[u] > user_mean[worst]) worst = u;
        obj = user_mean[worst];
        obj_se = user_se[worst];
    }

    if (detail) {
        detail->objective = obj;
        detail->std_error = obj_se;
        detail->per_user = std::move(user_mean);
        detail->per_user_se = std::move(user_se);
    }
    ++evals_;
    return obj;
}

double ScenarioEvaluator::objective(const std::vector<double>& beta_s,
                                    const std::vector<double>& beta_r)
{
    return objective_at(beta_s, beta_r, prob_.draws);
}

double ScenarioEvaluator::objective_at(const std::vector<double>& beta_s,
                                       const std::vector<double>& beta_r, std::size_t n_draws)
{
    if (n_draws < 2 || n_draws > prob_.draws)
        throw std::invalid_argument("ScenarioEvaluator: draw count out of range");
    Key key;
    key.reserve(2 * n_layers_ + 1);
    key.push_back(static_cast<std::uint64_t>(n_draws));
    for (double b : beta_s) key.push_back(std::bit_cast<std::uint64_t>(b));
    for (double b : beta_r) key.push_back(std::bit_cast<std::uint64_t>(b));
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const double v = compute(beta_s, beta_r, n_draws, nullptr);
    memo_.emplace(std::move(key), v);
    return v;
}

EvalResult ScenarioEvaluator::evaluate(const std::vector<double>& beta_s,
                                       const std::vector<double>& beta_r)
{
    EvalResult res;
    compute(beta_s, beta_r, prob_.draws, &res);
    return res;
}

} // namespace spcm::evaluator
