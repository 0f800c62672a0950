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

#include "spcm/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spcm::lp {

namespace {

constexpr double kEps = 1e-10;

struct Tableau {
    std::size_t m = 0;      // constraint rows
    std::size_t cols = 0;   // variable columns (rhs kept separately)
    std::vector<double> a;  // m x cols
    std::vector<double> rhs;
    std::vector<std::size_t> basis;

    double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    void pivot(std::size_t pr, std::size_t pc)
    {
        const double pv = at(pr, pc);
        const double inv = 1.0 / pv;
        for (std::size_t j = 0; j < cols; ++j) at(pr, j) *= inv;
        rhs[pr] *= inv;
        at(pr, pc) = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == pr) continue;
            const double f = at(i, pc);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < cols; ++j) at(i, j) -= f * at(pr, j);
            rhs[i] -= f * rhs[pr];
            at(i, pc) = 0.0;
        }
        basis[pr] = pc;
    }
};

// Reduced cost vector z for the cost coefficients c: z_j = c_j - c_B . B^-1 A_j.
void reduced_costs(const Tableau& t, const std::vector<double>& c, std::vector<double>& z)
{
    z.assign(t.cols, 0.0);
    for (std::size_t j = 0; j < t.cols; ++j) z[j] = j < c.size() ? c[j] : 0.0;
    for (std::size_t i = 0; i < t.m; ++i) {
        const double cb = t.basis[i] < c.size() ? c[t.basis[i]] : 0.0;
        if (cb == 0.0) continue;
        for (std::size_t j = 0; j < t.cols; ++j) z[j] -= cb * t.at(i, j);
    }
}

enum class StepResult { optimal, pivoted, unbounded };

// One Bland's-rule iteration: smallest-index entering column with negative
// reduced cost, smallest-basis-index leaving row among minimum ratios.
StepResult simplex_step(Tableau& t, const std::vector<double>& c,
                        const std::vector<bool>& allowed, std::vector<double>& z)
{
    reduced_costs(t, c, z);
    std::size_t enter = t.cols;
    for (std::size_t j = 0; j < t.cols; ++j) {
        if (!allowed[j]) continue;
        if (z[j] < -kEps) {
            enter = j;
            break;
        }
    }
    if (enter == t.cols) return StepResult::optimal;

    std::size_t leave = t.m;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.m; ++i) {
        const double aij = t.at(i, enter);
        if (aij <= kEps) continue;
        const double ratio = t.rhs[i] / aij;
        if (ratio < best_ratio - kEps ||
            (ratio < best_ratio + kEps && (leave == t.m || t.basis[i] < t.basis[leave]))) {
            best_ratio = ratio;
            leave = i;
        }
    }
    if (leave == t.m) return StepResult::unbounded;
    t.pivot(leave, enter);
    return StepResult::pivoted;
}

// Returns true at an optimum, false on unboundedness; throws only if the
// defensive iteration cap trips (which indicates solver misuse, not a
// property of the input).
bool run_simplex(Tableau& t, const std::vector<double>& c, const std::vector<bool>& allowed)
{
    std::vector<double> z;
    const std::size_t max_steps = 50000 + 200 * (t.m + t.cols);
    for (std::size_t step = 0; step < max_steps; ++step) {
        switch (simplex_step(t, c, allowed, z)) {
        case StepResult::optimal: return true;
        case StepResult::unbounded: return false;
        case StepResult::pivoted: break;
        }
    }
    throw std::runtime_error("simplex: iteration cap exceeded");
}

} // namespace

LpSolution solve(const Lp& lp)
{
    const std::size_t n = lp.n_vars;
    const std::size_t m = lp.rows.size();
    if (lp.objective.size() != n)
        throw std::invalid_argument("lp::solve: objective length mismatch");
    for (const auto& r : lp.rows) {
        if (r.a.size() != n)
            throw std::invalid_argument("lp::solve: constraint length mismatch");
    }
    if (m == 0) {
        // Only x >= 0 constraints: minimum is at x = 0 unless a negative cost
        // coefficient makes the problem unbounded.
        for (double cj : lp.objective)
            if (cj < -kEps) return {LpStatus::unbounded, {}, 0.0};
        LpSolution s;
        s.status = LpStatus::optimal;
        s.x.assign(n, 0.0);
        s.objective = 0.0;
        return s;
    }

    std::size_t n_slack = 0;
    for (const auto& r : lp.rows)
        if (!r.equality) ++n_slack;

    const std::size_t cols = n + n_slack + m; // artificials for every row
    Tableau t;
    t.m = m;
    t.cols = cols;
    t.a.assign(m * cols, 0.0);
    t.rhs.resize(m);
    t.basis.resize(m);

    std::size_t slack_at = n;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& r = lp.rows[i];
        const double sign = r.b < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) t.at(i, j) = sign * r.a[j];
        t.rhs[i] = sign * r.b;
        if (!r.equality) {
            t.at(i, slack_at) = sign;
            ++slack_at;
        }
        t.at(i, n + n_slack + i) = 1.0;
        t.basis[i] = n + n_slack + i;
    }

    // Phase 1: minimize the sum of artificials (bounded below by zero, so
    // unboundedness cannot occur here).
    std::vector<double> phase1_cost(cols, 0.0);
    for (std::size_t i = 0; i < m; ++i) phase1_cost[n + n_slack + i] = 1.0;
    std::vector<bool> all_allowed(cols, true);
    if (!run_simplex(t, phase1_cost, all_allowed))
        throw std::runtime_error("lp::solve: phase 1 reported unbounded");

    double art_sum = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        if (t.basis[i] >= n + n_slack) art_sum += t.rhs[i];
    if (art_sum > 1e-8) return {LpStatus::infeasible, {}, 0.0};

    // Drive any degenerate artificial out of the basis where possible; its
    // row is redundant otherwise and the artificial stays at zero.
    for (std::size_t i = 0; i < m; ++i) {
        if (t.basis[i] < n + n_slack) continue;
        for (std::size_t j = 0; j < n + n_slack; ++j) {
            if (std::abs(t.at(i, j)) > kEps) {
                t.pivot(i, j);
                break;
            }
        }
    }

    // Phase 2: artificial columns are banned from re-entering.
    std::vector<bool> allowed(cols, true);
    for (std::size_t j = n + n_slack; j < cols; ++j) allowed[j] = false;
    std::vector<double> cost(cols, 0.0);
    for (std::size_t j = 0; j < n; ++j) cost[j] = lp.objective[j];
    if (!run_simplex(t, cost, allowed)) return {LpStatus::unbounded, {}, 0.0};

    LpSolution s;
    s.status = LpStatus::optimal;
    s.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (t.basis[i] < n) s.x[t.basis[i]] = t.rhs[i];
    s.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) s.objective += lp.objective[j] * s.x[j];
    return s;
}

} // namespace spcm::lp
