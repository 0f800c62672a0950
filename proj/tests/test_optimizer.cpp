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

#include "doctest.h"

#include "spcm/optimizer.hpp"
#include "spcm/rng.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace spcm::optimizer;
using spcm::channel::FadingSpec;
using spcm::eed::EedModel;
using spcm::eed::ObjectiveWeights;
using spcm::evaluator::EvalProblem;
using spcm::evaluator::ScenarioEvaluator;
using spcm::evaluator::UserLinks;
using spcm::hiermod::HierScheme;
using spcm::hiermod::Modulation;

namespace {

// Small single-user relay problem, cheap enough for exhaustive cross-checks.
EvalProblem small_problem(bool relay, std::size_t draws) {
    EvalProblem p;
    p.source_scheme.layers = {Modulation::qpsk, Modulation::qam16};
    p.source_scheme.beta = {0.0, 0.0};
    p.source_scheme.symbol_energy = 20.0;
    p.relay_scheme = p.source_scheme;
    p.sr = FadingSpec{2.0, 2.0};
    p.users = {UserLinks{FadingSpec{2.0, 0.4}, FadingSpec{2.0, 0.8}}};
    p.model = EedModel::from_rates(1.0, {2, 4});
    p.weights = ObjectiveWeights::uniform(1);
    p.draws = draws;
    p.seed = 11;
    p.relay_enabled = relay;
    return p;
}

EvalProblem mono_problem(std::size_t draws) {
    EvalProblem p;
    p.source_scheme.layers = {Modulation::qpsk};
    p.source_scheme.beta = {0.0};
    p.source_scheme.symbol_energy = 10.0;
    p.relay_scheme = p.source_scheme;
    p.sr = FadingSpec{2.0, 2.0};
    p.users = {UserLinks{FadingSpec{2.0, 0.5}, FadingSpec{2.0, 1.0}}};
    p.model = EedModel::from_rates(1.0, {2});
    p.weights = ObjectiveWeights::uniform(1);
    p.draws = draws;
    p.seed = 13;
    p.relay_enabled = true;
    return p;
}

}  // namespace

TEST_CASE("master with one feasible column") {
    auto m = solve_master_lp({0.5}, {{{-0.2, -0.1}}});
    REQUIRE(m.feasible);
    REQUIRE(m.lambda.size() == 1);
    CHECK(m.lambda[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m.z == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("master picks the better of two feasible columns") {
    auto m = solve_master_lp({0.5, 0.3}, {{{-0.2, -0.1}, {-0.1, -0.3}}});
    REQUIRE(m.feasible);
    CHECK(m.z == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(m.lambda[0] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(m.lambda[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("master mixes columns to satisfy the power constraint") {
    // The cheap column overspends; the expensive one underspends. Optimal
    // mixture puts exactly enough weight on the underspender:
    // lambda = (1/3, 2/3), z = 0.5/3 + 0.3 * 2/3 = 11/30.
    auto m = solve_master_lp({0.5, 0.3}, {{{-0.2, -0.2}, {0.1, 0.1}}});
    REQUIRE(m.feasible);
    CHECK(m.lambda[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(m.lambda[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(m.z == doctest::Approx(11.0 / 30.0).epsilon(1e-9));
}

TEST_CASE("master reports infeasibility") {
    // Every column overspends on the source node: no mixture can comply.
    auto m = solve_master_lp({0.5, 0.3}, {{{0.2, -0.1}, {0.1, -0.2}}});
    CHECK(!m.feasible);
}

TEST_CASE("master input validation") {
    CHECK_THROWS_AS(solve_master_lp({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(solve_master_lp({0.5}, {}), std::invalid_argument);
    CHECK_THROWS_AS(
        solve_master_lp({std::nan("")}, {{{-0.1, -0.1}}}),
        std::invalid_argument);
}

TEST_CASE("dual with one interior column") {
    auto d = solve_master_dual({0.5}, {{{-0.2, -0.3}}});
    REQUIRE(d.feasible);
    CHECK(d.nu_s == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(d.nu_r == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(d.theta == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("strong duality on random instances") {
    double u[2];
    for (std::uint64_t inst = 0; inst < 100; ++inst) {
        std::size_t k = 1 + inst % 5;
        std::vector<double> obj(k);
        std::vector<std::array<double, 2>> rows(k);
        bool any_interior = false;
        for (std::size_t l = 0; l < k; ++l) {
            spcm::rng::uniform2(900 + inst, l, 0, u);
            obj[l] = u[0];
            spcm::rng::uniform2(900 + inst, l, 1, u);
            rows[l] = {u[0] - 0.6, u[1] - 0.6};
            if (rows[l][0] <= 0.0 && rows[l][1] <= 0.0) any_interior = true;
        }
        auto m = solve_master_lp(obj, rows);
        auto d = solve_master_dual(obj, rows);
        // A column inside both budgets makes the primal trivially feasible.
        if (any_interior) CHECK(m.feasible);
        if (!m.feasible) {
            // Primal infeasible: the dual cannot report a finite optimum.
            CHECK(!d.feasible);
            continue;
        }
        REQUIRE(d.feasible);
        CHECK(std::abs(m.z - d.theta) < 1e-9 * std::max(1.0, std::abs(m.z)));
        CHECK(d.nu_s >= -1e-12);
        CHECK(d.nu_r >= -1e-12);
        // Dual feasibility: theta <= obj_l + nu . row_l for every column.
        for (std::size_t l = 0; l < k; ++l) {
            CHECK(d.theta <=
                  obj[l] + d.nu_s * rows[l][0] + d.nu_r * rows[l][1] + 1e-9);
        }
        // Primal solution is a distribution.
        double lam_sum = 0.0;
        for (double lv : m.lambda) {
            CHECK(lv >= -1e-12);
            lam_sum += lv;
        }
        CHECK(lam_sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("inner search with huge multipliers collapses to zero power") {
    auto prob = small_problem(true, 400);
    ScenarioEvaluator ev(prob);
    DualSearchConfig cfg;
    cfg.coarse_draws = 100;
    cfg.pattern.max_evals = 150;
    auto [cand, g] = minimize_dual_function(ev, 50.0, 60.0, {}, cfg);
    double sum_s = 0.0, sum_r = 0.0;
    for (double b : cand.beta_s) sum_s += b;
    for (double b : cand.beta_r) sum_r += b;
    CHECK(sum_s < 0.02);
    CHECK(sum_r < 0.02);
    // Exactly zero power marks every layer lost (objective sigma2), but any
    // positive sliver decodes a fraction of symbols by chance, so the dual
    // minimum sits just above the origin. The reported value must beat the
    // zero corner and stay consistent with the evaluator at the candidate.
    CHECK(g <= prob.model.sigma2 - 50.0 - 60.0 + 1e-9);
    double want = ev.objective(cand.beta_s, cand.beta_r) +
                  50.0 * (sum_s - 1.0) + 60.0 * (sum_r - 1.0);
    CHECK(g == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("inner search with zero multipliers spends the whole box") {
    // Single layer per node: the objective improves monotonically with power,
    // so the unpenalized minimum sits at the top corner of the box.
    auto prob = mono_problem(400);
    ScenarioEvaluator ev(prob);
    DualSearchConfig cfg;
    cfg.coarse_draws = 100;
    cfg.pattern.max_evals = 200;
    auto [cand, g] = minimize_dual_function(ev, 0.0, 0.0, {}, cfg);
    REQUIRE(cand.beta_s.size() == 1);
    CHECK(cand.beta_s[0] > 1.0 - 3.0 / 1024.0);
    CHECK(cand.beta_r[0] > 1.0 - 3.0 / 1024.0);
    CHECK(g == doctest::Approx(ev.objective(cand.beta_s, cand.beta_r))
                   .epsilon(1e-12));
}

TEST_CASE("inner search result never loses to a warm start") {
    auto prob = small_problem(true, 400);
    ScenarioEvaluator ev(prob);
    DualSearchConfig cfg;
    cfg.coarse_draws = 100;
    cfg.pattern.max_evals = 60;
    PowerCandidate w1{{0.5, 0.3}, {0.4, 0.2}};
    PowerCandidate w2{{0.2, 0.2}, {0.3, 0.3}};
    double nu_s = 0.15, nu_r = 0.05;
    auto pen = [&](const PowerCandidate& c) {
        double s = -1.0, r = -1.0;
        for (double b : c.beta_s) s += b;
        for (double b : c.beta_r) r += b;
        return ev.objective(c.beta_s, c.beta_r) + nu_s * s + nu_r * r;
    };
    double best_warm = std::min(pen(w1), pen(w2));
    auto [cand, g] = minimize_dual_function(ev, nu_s, nu_r, {w1, w2}, cfg);
    CHECK(g <= best_warm + 1e-12);
}

TEST_CASE("inner search rejects negative multipliers") {
    auto prob = mono_problem(100);
    ScenarioEvaluator ev(prob);
    CHECK_THROWS_AS(minimize_dual_function(ev, -0.1, 0.0, {}, DualSearchConfig{}),
                    std::invalid_argument);
}

TEST_CASE("generalized programming on a small problem") {
    auto prob = small_problem(true, 400);
    ScenarioEvaluator ev(prob);
    GpConfig cfg;
    cfg.epsilon = 5e-3;
    cfg.max_iters = 30;
    cfg.search.coarse_draws = 100;
    cfg.search.pattern.max_evals = 150;
    cfg.search.random_starts = 1;
    auto res = run_generalized_programming(ev, cfg);

    CHECK(res.converged);
    CHECK(res.iterations <= 30);
    CHECK(res.d_max - res.d_min <= cfg.epsilon + 1e-12);
    REQUIRE(!res.trace.empty());

    double prev_z = 1e300;
    for (const auto& row : res.trace) {
        // Upper bound never rises (the master only gains columns).
        CHECK(row.z <= prev_z + 1e-12);
        prev_z = row.z;
        // Strong duality at every master solve.
        CHECK(std::abs(row.z - row.theta) < 1e-8 * std::max(1.0, std::abs(row.z)));
        CHECK(row.nu_s >= -1e-12);
        CHECK(row.nu_r >= -1e-12);
        // The warm-started inner search always reaches the dual value.
        CHECK(row.g <= row.z + 1e-9);
        CHECK(row.d_min <= row.d_max + 1e-12);
    }

    // Reported point is feasible for the real constraint.
    double sum_s = 0.0, sum_r = 0.0;
    for (double b : res.best.beta_s) sum_s += b;
    for (double b : res.best.beta_r) sum_r += b;
    CHECK(sum_s <= 1.0 + 1e-9);
    CHECK(sum_r <= 1.0 + 1e-9);
    CHECK(res.best_objective ==
          doctest::Approx(ev.objective(res.best.beta_s, res.best.beta_r))
              .epsilon(1e-12));

    // The reported objective should not lose to an exhaustive scan of the
    // feasible quarter-step grid (evaluated on the same draws) by more than
    // the convergence tolerance.
    double grid_best = 1e300;
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; a + b <= 4; ++b)
            for (int c = 0; c <= 4; ++c)
                for (int d = 0; c + d <= 4; ++d) {
                    std::vector<double> bs = {a / 4.0, b / 4.0};
                    std::vector<double> br = {c / 4.0, d / 4.0};
                    grid_best = std::min(grid_best, ev.objective(bs, br));
                }
    CHECK(res.best_objective <= grid_best + cfg.epsilon);
    // The dual lower bound sits below every feasible objective, up to the
    // inexactness of the inner search (bounded by the convergence gap).
    CHECK(res.d_min <= grid_best + cfg.epsilon);
}

TEST_CASE("generalized programming without the relay") {
    auto prob = small_problem(false, 400);
    ScenarioEvaluator ev(prob);
    GpConfig cfg;
    cfg.epsilon = 5e-3;
    cfg.max_iters = 30;
    cfg.search.coarse_draws = 100;
    cfg.search.pattern.max_evals = 150;
    cfg.search.random_starts = 1;
    auto res = run_generalized_programming(ev, cfg);
    CHECK(res.converged);
    // The relay node never receives power.
    for (const auto& c : res.candidates)
        for (double b : c.beta_r) CHECK(b == 0.0);
    for (double b : res.best.beta_r) CHECK(b == 0.0);
}

TEST_CASE("generalized programming is deterministic") {
    auto prob = mono_problem(300);
    GpConfig cfg;
    cfg.epsilon = 1e-2;
    cfg.max_iters = 15;
    cfg.search.coarse_draws = 80;
    cfg.search.pattern.max_evals = 100;
    ScenarioEvaluator ev1(prob);
    ScenarioEvaluator ev2(prob);
    auto a = run_generalized_programming(ev1, cfg);
    auto b = run_generalized_programming(ev2, cfg);
    CHECK(a.best_objective == b.best_objective);
    CHECK(a.best.beta_s == b.best.beta_s);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("generalized programming config validation") {
    auto prob = mono_problem(100);
    ScenarioEvaluator ev(prob);
    GpConfig bad;
    bad.epsilon = 0.0;
    CHECK_THROWS_AS(run_generalized_programming(ev, bad), std::invalid_argument);
    bad.epsilon = 1e-3;
    bad.max_iters = 0;
    CHECK_THROWS_AS(run_generalized_programming(ev, bad), std::invalid_argument);
}

TEST_CASE("evaluator memoization and common random numbers") {
    auto prob = small_problem(true, 1000);
    ScenarioEvaluator ev(prob);
    std::vector<double> bs = {0.6, 0.2}, br = {0.5, 0.25};
    double v1 = ev.objective(bs, br);
    std::size_t evals = ev.evaluations();
    double v2 = ev.objective(bs, br);
    CHECK(v1 == v2);
    CHECK(ev.evaluations() == evals);  // served from the memo
    CHECK(ev.objective_at(bs, br, prob.draws) == v1);

    // Detailed evaluation agrees with the scalar objective.
    auto detail = ev.evaluate(bs, br);
    CHECK(detail.objective == doctest::Approx(v1).epsilon(1e-12));
    REQUIRE(detail.per_user.size() == 1);
    REQUIRE(detail.per_user_se.size() == 1);
    CHECK(detail.per_user[0] == doctest::Approx(v1).epsilon(1e-12));
    CHECK(detail.std_error > 0.0);

    // Same seed, fresh evaluator: identical draws, identical value.
    ScenarioEvaluator ev2(prob);
    CHECK(ev2.objective(bs, br) == v1);

    // Prefix fidelity differs from the full value but not wildly.
    double coarse = ev.objective_at(bs, br, 100);
    CHECK(coarse != v1);
    CHECK(std::abs(coarse - v1) < 0.2);
}

TEST_CASE("disabled relay makes the relay side inert") {
    auto prob = small_problem(false, 500);
    ScenarioEvaluator ev(prob);
    std::vector<double> bs = {0.7, 0.3};
    double a = ev.objective(bs, {0.0, 0.0});
    double b = ev.objective(bs, {0.5, 0.5});
    CHECK(a == b);
}
