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

#ifndef SPCM_EVALUATOR_HPP
#define SPCM_EVALUATOR_HPP

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "spcm/channel.hpp"
#include "spcm/eed.hpp"
#include "spcm/hiermod.hpp"

namespace spcm::evaluator {

struct UserLinks {
    channel::FadingSpec sd;
    channel::FadingSpec rd;
};

// One multicast instance: the source-relay link, the per-user direct and
// relay-hop links, the layer stack (beta fields are placeholders, overwritten
// per candidate), the distortion model, and the integration settings.
struct EvalProblem {
    hiermod::HierScheme source_scheme;
    hiermod::HierScheme relay_scheme;
    channel::FadingSpec sr;
    std::vector<UserLinks> users;
    eed::EedModel model;
    eed::ObjectiveWeights weights;
    std::size_t draws = 20000;
    std::uint64_t seed = 1;
    bool relay_enabled = true;

    void validate() const;
};

struct EvalResult {
    double objective = 0.0;
    double std_error = 0.0;
    std::vector<double> per_user;
    std::vector<double> per_user_se;
};

// Weighted-expected-EED objective over a fixed set of channel draws (common
// random numbers: the gains are sampled once at construction, so candidate
// comparisons are free of sampling noise). Objective values are memoized per
// (beta_s, beta_r, draw-count); single-slot caches keep the per-side
// cumulative-SER arrays of the most recent candidate so coordinate probes
// that touch only one node recompute only that node's links.
class ScenarioEvaluator {
public:
    explicit ScenarioEvaluator(EvalProblem prob);

    const EvalProblem& problem() const { return prob_; }

    // Objective at full draw count.
    double objective(const std::vector<double>& beta_s, const std::vector<double>& beta_r);

    // Objective over the first n_draws draws (1 <= n_draws <= problem().draws);
    // a prefix of the same draw set, so estimates at different fidelities are
    // positively correlated.
    double objective_at(const std::vector<double>& beta_s, const std::vector<double>& beta_r,
                        std::size_t n_draws);

    // Full per-user detail at full draw count (not memoized).
    EvalResult evaluate(const std::vector<double>& beta_s, const std::vector<double>& beta_r);

    // Number of non-memoized objective computations so far.
    std::size_t evaluations() const { return evals_; }

private:
    using Key = std::vector<std::uint64_t>;
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept;
    };

    double compute(const std::vector<double>& beta_s, const std::vector<double>& beta_r,
                   std::size_t n, EvalResult* detail);
    const double* source_side(const std::vector<double>& beta_s, std::size_t n);
    const double* relay_side(const std::vector<double>& beta_r, std::size_t n);

    EvalProblem prob_;
    std::size_t n_layers_ = 0;
    std::vector<double> h_sr_;              // draws
    std::vector<double> h_sd_;              // users x draws, row-major
    std::vector<double> h_rd_;

    // Source-side cache: cum_sr (L x n) followed by per-user cum_sd blocks
    // (users x L x n). Relay-side cache: per-user cum_rd blocks.
    Key src_key_, rly_key_;
    std::vector<double> src_cum_, rly_cum_;

    std::vector<double> wacc_;
    std::unordered_map<Key, double, KeyHash> memo_;
    std::size_t evals_ = 0;
};

} // namespace spcm::evaluator

#endif
