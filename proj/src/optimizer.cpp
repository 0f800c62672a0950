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

#include "spcm/optimizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spcm/rng.hpp"
#include "spcm/simplex.hpp"

namespace spcm::optimizer {

MasterSolution solve_master_lp(const std::vector<double>& objectives,
                               const std::vector<std::array<double, 2>>& constraint_rows)
{
    const std::size_t k = objectives.size();
    if (k == 0 || constraint_rows.size() != k)
        throw std::invalid_argument("solve_master_lp: need matching nonempty inputs");
    for (double v : objectives)
        if (!std::isfinite(v))
            throw std::invalid_argument("solve_master_lp: objectives must be finite");

    lp::Lp prog;
    prog.n_vars = k;
    prog.objective = objectives;
    lp::Lp::Row row_s, row_r, row_sum;
    row_s.a.resize(k);
    row_r.a.resize(k);
    row_sum.a.assign(k, 1.0);
    for (std::size_t l = 0; l < k; ++l) {
        row_s.a[l] = constraint_rows[l][0];
        row_r.a[l] = constraint_rows[l][1];
    }
    row_s.b = 0.0;
    row_r.b = 0.0;
    row_sum.b = 1.0;
    row_sum.equality = true;
    prog.rows = {row_s, row_r, row_sum};

    const lp::LpSolution sol = lp::solve(prog);
    MasterSolution m;
    if (sol.status != lp::LpStatus::optimal) return m;
    m.feasible = true;
    m.lambda = sol.x;
    m.z = sol.objective;
    return m;
}

DualSolution solve_master_dual(const std::vector<double>& objectives,
                               const std::vector<std::array<double, 2>>& constraint_rows)
{
    const std::size_t k = objectives.size();
    if (k == 0 || constraint_rows.size() != k)
        throw std::invalid_argument("solve_master_dual: need matching nonempty inputs");

    // Variables: nu_s, nu_r, theta+ and theta- (theta is free).
    lp::Lp prog;
    prog.n_vars = 4;
    prog.objective = {0.0, 0.0, -1.0, 1.0};
    prog.rows.reserve(k);
    for (std::size_t l = 0; l < k; ++l) {
        lp::Lp::Row r;
        r.a = {-constraint_rows[l][0], -constraint_rows[l][1], 1.0, -1.0};
        r.b = objectives[l];
        prog.rows.push_back(std::move(r));
    }

    const lp::LpSolution sol = lp::solve(prog);
    DualSolution d;
    if (sol.status != lp::LpStatus::optimal) return d;
    d.feasible = true;
    d.nu_s = sol.x[0];
    d.nu_r = sol.x[1];
    d.theta = sol.x[2] - sol.x[3];
    return d;
}

namespace {

std::vector<std::uint64_t> point_key(const std::vector<double>& x)
{
    std::vector<std::uint64_t> k;
    k.reserve(x.size());
    for (double v : x) k.push_back(std::bit_cast<std::uint64_t>(v));
    return k;
}

// Search-space packing: beta_s always, beta_r appended only when the relay
// participates (otherwise it stays pinned at zero).
struct Packing {
    std::size_t n_layers = 0;
    bool relay = true;

    std::size_t dim() const { return relay ? 2 * n_layers : n_layers; }

    PowerCandidate unpack(const std::vector<double>& x) const
    {
        PowerCandidate c;
        c.beta_s.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n_layers));
        if (relay)
            c.beta_r.assign(x.begin() + static_cast<std::ptrdiff_t>(n_layers), x.end());
        else
            c.beta_r.assign(n_layers, 0.0);
        return c;
    }

    std::vector<double> pack(const PowerCandidate& c) const
    {
        std::vector<double> x(c.beta_s);
        if (relay) x.insert(x.end(), c.beta_r.begin(), c.beta_r.end());
        return x;
    }
};

double penalty(const PowerCandidate& c, double nu_s, double nu_r)
{
    double sum_s = -1.0, sum_r = -1.0;
    for (double b : c.beta_s) sum_s += b;
    for (double b : c.beta_r) sum_r += b;
    return nu_s * sum_s + nu_r * sum_r;
}

} // namespace

std::pair<PowerCandidate, double> minimize_dual_function(
    evaluator::ScenarioEvaluator& ev, double nu_s, double nu_r,
    const std::vector<PowerCandidate>& warm_starts, const DualSearchConfig& cfg)
{
    if (nu_s < 0.0 || nu_r < 0.0)
        throw std::invalid_argument("minimize_dual_function: multipliers must be nonnegative");
    const auto& prob = ev.problem();
    Packing pk{prob.source_scheme.layers.size(), prob.relay_enabled};
    const std::size_t dim = pk.dim();
    const std::size_t nc = std::clamp<std::size_t>(cfg.coarse_draws, 2, prob.draws);

    auto full_value = [&](const std::vector<double>& x) {
        const PowerCandidate c = pk.unpack(x);
        return ev.objective(c.beta_s, c.beta_r) + penalty(c, nu_s, nu_r);
    };
    auto coarse_value = [&](const std::vector<double>& x) {
        const PowerCandidate c = pk.unpack(x);
        return ev.objective_at(c.beta_s, c.beta_r, nc) + penalty(c, nu_s, nu_r);
    };

    // Start set: warm starts, a few fixed interior points, and seeded lattice
    // points salted by the round counter; deduplicated bitwise.
    std::vector<std::vector<double>> starts;
    std::vector<std::vector<std::uint64_t>> seen;
    auto add_start = [&](std::vector<double> x) {
        for (double& v : x) v = std::clamp(v, 0.0, 1.0);
        auto key = point_key(x);
        for (const auto& s : seen)
            if (s == key) return;
        seen.push_back(std::move(key));
        starts.push_back(std::move(x));
    };

    for (const auto& w : warm_starts) {
        if (w.beta_s.size() != pk.n_layers || w.beta_r.size() != pk.n_layers)
            throw std::invalid_argument("minimize_dual_function: warm start layer mismatch");
        add_start(pk.pack(w));
    }
    const double interior = 1.0 / static_cast<double>(pk.n_layers + 1);
    add_start(std::vector<double>(dim, interior));
    add_start(std::vector<double>(dim, 0.5));
    {
        // Base-heavy split: most of the budget on the first layer of each node.
        std::vector<double> x(dim, 0.0);
        const double rest =
            pk.n_layers > 1 ? 0.1 / static_cast<double>(pk.n_layers - 1) : 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const std::size_t layer = d % pk.n_layers;
            x[d] = layer == 0 ? 0.9 : rest;
        }
        add_start(std::move(x));
    }
    for (std::size_t s = 0; s < cfg.random_starts; ++s) {
        std::vector<double> x(dim);
        double u[2];
        for (std::size_t d = 0; d < dim; ++d) {
            if (d % 2 == 0)
                rng::uniform2(cfg.seed, cfg.round * 8191 + s, d / 2, u);
            // Snap to the 1/16 lattice so the memo cache can reuse probes.
            x[d] = std::floor(u[d % 2] * 17.0) / 16.0;
        }
        add_start(std::move(x));
    }

    // Warm starts are ranked at full fidelity before any search: the returned
    // value can only improve on the best of them.
    PowerCandidate best_cand;
    double best_full = std::numeric_limits<double>::infinity();
    for (const auto& w : warm_starts) {
        const double v = full_value(pk.pack(w));
        if (v < best_full) {
            best_full = v;
            best_cand = w;
        }
    }

    for (const auto& st : starts) {
        const search::PatternResult r = search::minimize_box(coarse_value, st, cfg.pattern);
        const double v = full_value(r.x);
        if (v < best_full) {
            best_full = v;
            best_cand = pk.unpack(r.x);
        }
    }
    return {best_cand, best_full};
}

GpResult run_generalized_programming(evaluator::ScenarioEvaluator& ev, const GpConfig& cfg)
{
    if (!(cfg.epsilon > 0.0))
        throw std::invalid_argument("run_generalized_programming: epsilon must be positive");
    if (cfg.max_iters < 1)
        throw std::invalid_argument("run_generalized_programming: need at least one iteration");

    const auto& prob = ev.problem();
    const std::size_t nl = prob.source_scheme.layers.size();
    const bool relay = prob.relay_enabled;

    GpResult res;

    // Initial columns: one strictly interior point (keeps the master feasible
    // and the multiplier bound finite) plus scaled one-hot splits.
    auto add_candidate = [&](PowerCandidate c) {
        res.candidates.push_back(std::move(c));
        const PowerCandidate& cc = res.candidates.back();
        res.candidate_objectives.push_back(ev.objective(cc.beta_s, cc.beta_r));
    };
    {
        PowerCandidate c;
        c.beta_s.assign(nl, 1.0 / static_cast<double>(nl + 1));
        c.beta_r = relay ? c.beta_s : std::vector<double>(nl, 0.0);
        add_candidate(std::move(c));
    }
    for (std::size_t d = 0; d < nl; ++d) {
        PowerCandidate c;
        c.beta_s.assign(nl, 0.0);
        c.beta_s[d] = 0.9;
        c.beta_r = relay ? c.beta_s : std::vector<double>(nl, 0.0);
        add_candidate(std::move(c));
    }

    auto row_of = [](const PowerCandidate& c) {
        double sum_s = -1.0, sum_r = -1.0;
        for (double b : c.beta_s) sum_s += b;
        for (double b : c.beta_r) sum_r += b;
        return std::array<double, 2>{sum_s, sum_r};
    };
    auto same_candidate = [](const PowerCandidate& a, const PowerCandidate& b) {
        return a.beta_s == b.beta_s && a.beta_r == b.beta_r;
    };

    double d_min = -std::numeric_limits<double>::infinity();
    double d_max = std::numeric_limits<double>::infinity();
    PowerCandidate incumbent;
    bool have_incumbent = false;
    std::size_t stalls = 0;

    for (std::size_t iter = 1; iter <= cfg.max_iters; ++iter) {
        std::vector<std::array<double, 2>> rows;
        rows.reserve(res.candidates.size());
        for (const auto& c : res.candidates) rows.push_back(row_of(c));

        const MasterSolution master = solve_master_lp(res.candidate_objectives, rows);
        if (!master.feasible)
            throw std::runtime_error(
                "run_generalized_programming: master infeasible despite interior column");
        const DualSolution dual = solve_master_dual(res.candidate_objectives, rows);
        if (!dual.feasible)
            throw std::runtime_error("run_generalized_programming: dual solve failed");

        // Warm starts: the column minimizing the penalized objective under
        // the fresh multipliers (which pins g at or below theta = z), plus
        // the previous inner minimizer.
        std::vector<PowerCandidate> warm;
        {
            std::size_t arg = 0;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t l = 0; l < res.candidates.size(); ++l) {
                const double v = res.candidate_objectives[l] +
                                 dual.nu_s * rows[l][0] + dual.nu_r * rows[l][1];
                if (v < best) {
                    best = v;
                    arg = l;
                }
            }
            warm.push_back(res.candidates[arg]);
        }
        if (have_incumbent) warm.push_back(incumbent);

        DualSearchConfig scfg = cfg.search;
        scfg.round = iter;
        auto [cand, g] = minimize_dual_function(ev, dual.nu_s, dual.nu_r, warm, scfg);

        d_min = std::max(d_min, g);
        d_max = std::min(d_max, master.z);
        res.trace.push_back({iter, master.z, dual.theta, dual.nu_s, dual.nu_r, g, d_min, d_max});
        res.iterations = iter;
        res.final = cand;
        res.final_g = g;
        res.final_lambda = master.lambda;
        incumbent = cand;
        have_incumbent = true;

        if (d_max - d_min <= cfg.epsilon) {
            res.converged = true;
            break;
        }

        bool duplicate = false;
        for (const auto& c : res.candidates) {
            if (same_candidate(c, cand)) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) {
            if (++stalls >= cfg.max_stalls) break;
        } else {
            stalls = 0;
            add_candidate(cand);
        }
    }

    res.d_min = d_min;
    res.d_max = d_max;

    // Reporting: best constraint-feasible point by full-fidelity objective,
    // drawn from the columns, the final inner minimizer, and the master's
    // mixture of columns.
    const double tol = 1e-12;
    auto feasible = [&](const PowerCandidate& c) {
        double sum_s = 0.0, sum_r = 0.0;
        for (double b : c.beta_s) sum_s += b;
        for (double b : c.beta_r) sum_r += b;
        return sum_s <= 1.0 + tol && sum_r <= 1.0 + tol;
    };
    bool have_best = false;
    auto consider = [&](const PowerCandidate& c, double obj) {
        if (!feasible(c)) return;
        if (!have_best || obj < res.best_objective) {
            have_best = true;
            res.best = c;
            res.best_objective = obj;
        }
    };
    for (std::size_t l = 0; l < res.candidates.size(); ++l)
        consider(res.candidates[l], res.candidate_objectives[l]);
    consider(res.final, ev.objective(res.final.beta_s, res.final.beta_r));
    if (!res.final_lambda.empty() && res.final_lambda.size() == res.candidates.size()) {
        PowerCandidate mix;
        mix.beta_s.assign(nl, 0.0);
        mix.beta_r.assign(nl, 0.0);
        for (std::size_t l = 0; l < res.candidates.size(); ++l) {
            for (std::size_t d = 0; d < nl; ++d) {
                mix.beta_s[d] += res.final_lambda[l] * res.candidates[l].beta_s[d];
                mix.beta_r[d] += res.final_lambda[l] * res.candidates[l].beta_r[d];
            }
        }
        for (std::size_t d = 0; d < nl; ++d) {
            mix.beta_s[d] = std::clamp(mix.beta_s[d], 0.0, 1.0);
            mix.beta_r[d] = std::clamp(mix.beta_r[d], 0.0, 1.0);
        }
        consider(mix, ev.objective(mix.beta_s, mix.beta_r));
    }
    if (!have_best)
        throw std::runtime_error("run_generalized_programming: no feasible point found");
    return res;
}

} // namespace spcm::optimizer
