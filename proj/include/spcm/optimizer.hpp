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

#ifndef SPCM_OPTIMIZER_HPP
#define SPCM_OPTIMIZER_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "spcm/evaluator.hpp"
#include "spcm/pattern_search.hpp"

namespace spcm::optimizer {

// One column of the master program: a power split per node.
struct PowerCandidate {
    std::vector<double> beta_s;
    std::vector<double> beta_r;
};

struct MasterSolution {
    bool feasible = false;
    std::vector<double> lambda;
    double z = 0.0;
};

struct DualSolution {
    bool feasible = false;
    double nu_s = 0.0;
    double nu_r = 0.0;
    double theta = 0.0;
};

// Master LP over the current candidate set: minimize the convex combination
// of candidate objectives subject to the per-node combined power constraints
// sum_l lambda_l (1'beta_l - 1) <= 0, sum lambda = 1, lambda >= 0.
// constraint_rows[l] = {1'beta_s - 1, 1'beta_r - 1} of candidate l.
MasterSolution solve_master_lp(const std::vector<double>& objectives,
                               const std::vector<std::array<double, 2>>& constraint_rows);

// The master's dual: maximize theta subject to
// theta <= obj_l + nu_s row_s + nu_r row_r for every candidate, nu >= 0.
DualSolution solve_master_dual(const std::vector<double>& objectives,
                               const std::vector<std::array<double, 2>>& constraint_rows);

struct DualSearchConfig {
    std::size_t coarse_draws = 2000; // probe fidelity (clamped to problem draws)
    search::PatternConfig pattern{0.25, 0.5, 1.0 / 1024.0, 250};
    std::uint64_t seed = 1234;
    std::size_t random_starts = 2;
    std::uint64_t round = 0; // salt so repeated calls explore fresh starts
};

// Approximately minimize the penalized objective
//   obj(beta_s, beta_r) + nu_s (1'beta_s - 1) + nu_r (1'beta_r - 1)
// over the unit box via multi-start compass search. Probes run at the coarse
// draw count; candidates are ranked at full fidelity, so the returned value
// is the full-fidelity penalized objective of the returned point. Warm starts
// are evaluated at full fidelity unconditionally, which keeps the returned
// value no worse than the best warm start.
std::pair<PowerCandidate, double> minimize_dual_function(
    evaluator::ScenarioEvaluator& ev, double nu_s, double nu_r,
    const std::vector<PowerCandidate>& warm_starts, const DualSearchConfig& cfg);

struct IterationRecord {
    std::size_t iter = 0;
    double z = 0.0;
    double theta = 0.0;
    double nu_s = 0.0;
    double nu_r = 0.0;
    double g = 0.0;
    double d_min = 0.0;
    double d_max = 0.0;
};

struct GpConfig {
    double epsilon = 1e-3;
    std::size_t max_iters = 100;
    DualSearchConfig search{};
    // Consecutive iterations allowed to re-propose an existing candidate
    // before giving up (the master cannot improve without fresh columns).
    std::size_t max_stalls = 3;
};

struct GpResult {
    bool converged = false;
    std::size_t iterations = 0;
    double d_min = 0.0;
    double d_max = 0.0;
    // Last inner minimizer and its penalized objective (the algorithm's
    // formal output).
    PowerCandidate final;
    double final_g = 0.0;
    // Best constraint-feasible point seen, by full-fidelity objective: the
    // value to report for the scheme.
    PowerCandidate best;
    double best_objective = 0.0;
    std::vector<IterationRecord> trace;
    std::vector<PowerCandidate> candidates;
    std::vector<double> candidate_objectives;
    std::vector<double> final_lambda;
};

// The column-generation loop: master LP + dual multipliers + inner penalized
// search, stopping when d_max - d_min <= epsilon or the iteration budget is
// exhausted. Deterministic for a fixed evaluator seed and configuration.
GpResult run_generalized_programming(evaluator::ScenarioEvaluator& ev, const GpConfig& cfg);

} // namespace spcm::optimizer

#endif
