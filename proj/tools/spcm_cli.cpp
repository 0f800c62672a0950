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

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "spcm/evaluator.hpp"
#include "spcm/kernels.hpp"
#include "spcm/scenario.hpp"
#include "spcm/simkit.hpp"
#include "spcm/sweep.hpp"

namespace {

std::vector<double> parse_snr_list(const std::string& text) {
    std::vector<double> out;
    std::string cur;
    auto flush = [&] {
        if (cur.empty())
            return;
        std::size_t pos = 0;
        const double v = std::stod(cur, &pos);
        if (pos != cur.size())
            throw std::invalid_argument("bad SNR value '" + cur + "'");
        out.push_back(v);
        cur.clear();
    };
    for (char c : text) {
        if (c == ',' || c == ' ' || c == '\t')
            flush();
        else
            cur.push_back(c);
    }
    flush();
    return out;
}

// Cross-check the analytic distortion pipeline against the symbol-level
// simulator at a uniform power split, per scheme / SNR / sampled user.
// Returns the number of comparisons outside tolerance.
int run_validation(const spcm::scenario::Scenario& scn, bool strict) {
    using namespace spcm;
    const scenario::Placement placement = scenario::make_placement(scn);
    const std::size_t check_users = std::min<std::size_t>(scn.n_users, 3);
    int failures = 0;
    std::printf("%-12s %8s %5s %12s %12s %10s %7s  %s\n", "scheme", "snr_db",
                "user", "analytic", "simulated", "|diff|", "sigma", "status");
    for (const std::string& name : scn.schemes) {
        const scenario::SchemeDef& scheme = scenario::scheme_by_name(name);
        const std::size_t nl = scheme.layers.size();
        const std::vector<double> beta(nl, 1.0 / static_cast<double>(nl));
        for (double snr : scn.snr_db) {
            evaluator::EvalProblem prob =
                scenario::make_problem(scn, placement, scheme, snr, scenario::Metric::p1);
            evaluator::ScenarioEvaluator ev(prob);
            const evaluator::EvalResult ana = ev.evaluate(beta, beta);
            const hiermod::HierScheme src = prob.source_scheme.with_beta(beta);
            const hiermod::HierScheme rly = prob.relay_scheme.with_beta(beta);
            for (std::size_t u = 0; u < check_users; ++u) {
                simkit::SimConfig cfg;
                cfg.symbols_per_slot = 50;
                cfg.slots = 2000;
                cfg.seed = scn.seed + 1000003 * (u + 1);
                cfg.relay_enabled = scheme.relay;
                const simkit::SimReport rep =
                    simkit::simulate(cfg, src, rly, prob.users[u].sd, prob.sr,
                                     prob.users[u].rd, prob.model);
                const double diff = std::abs(ana.per_user[u] - rep.eed);
                const double se = std::hypot(ana.per_user_se[u], rep.eed_se);
                // Three standard errors plus a small absolute floor for the
                // analytic cascade approximation of chained decisions.
                const double tol = 3.0 * se + 0.005 * scn.sigma2;
                const bool ok = diff <= tol;
                if (!ok)
                    ++failures;
                std::printf("%-12s %8.6g %5zu %12.6g %12.6g %10.3g %7.2f  %s\n",
                            name.c_str(), snr, u, ana.per_user[u], rep.eed, diff,
                            se > 0.0 ? diff / se : 0.0, ok ? "ok" : "DEVIATES");
            }
        }
    }
    if (failures == 0)
        std::printf("validation: all comparisons within tolerance\n");
    else
        std::printf("validation: %d comparison(s) outside tolerance\n", failures);
    return strict ? failures : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"end-to-end distortion of layered multicast over a relay "
                 "network: power allocation sweep and validation"};

    std::string config_path;
    std::string snr_text;
    std::string metric = "both";
    std::string out_dir = "out";
    std::string kernel = "auto";
    std::uint64_t seed = 0;
    std::size_t mc_draws = 0;
    bool do_validate = false;
    bool strict = false;

    app.add_option("--config", config_path, "scenario config file (INI)");
    app.add_option("--snr", snr_text,
                   "override SNR list, comma separated (e.g. \"-15,-5,5\")");
    app.add_option("--metric", metric, "objective: p1, p2, or both")
        ->check(CLI::IsMember({"p1", "p2", "both"}));
    app.add_option("--seed", seed, "override scenario seed");
    app.add_option("--mc-draws", mc_draws, "override optimizer Monte Carlo draws");
    app.add_option("--out", out_dir, "output directory (default: out)");
    app.add_flag("--validate", do_validate,
                 "check the analytic pipeline against the symbol-level "
                 "simulator instead of running the sweep");
    app.add_flag("--strict", strict,
                 "exit nonzero when any validation comparison deviates or any "
                 "sweep point fails to converge");
    app.add_option("--kernel", kernel, "batch math backend")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    CLI11_PARSE(app, argc, argv);

    try {
        spcm::kernels::set_backend(spcm::kernels::backend_from_name(kernel.c_str()));

        spcm::scenario::Scenario scn;
        if (!config_path.empty())
            scn = spcm::scenario::load_config(config_path);
        if (!snr_text.empty())
            scn.snr_db = parse_snr_list(snr_text);
        if (app.count("--seed"))
            scn.seed = seed;
        if (app.count("--mc-draws"))
            scn.optimizer_draws = mc_draws;
        if (metric == "p1")
            scn.metrics = {spcm::scenario::Metric::p1};
        else if (metric == "p2")
            scn.metrics = {spcm::scenario::Metric::p2};
        else
            scn.metrics = {spcm::scenario::Metric::p1, spcm::scenario::Metric::p2};
        scn.validate();

        if (do_validate) {
            const int bad = run_validation(scn, strict);
            return bad > 0 ? 2 : 0;
        }

        const spcm::sweep::SweepResult res = spcm::sweep::run_comparison(scn);
        spcm::sweep::write_outputs(res, out_dir);
        std::cout << spcm::sweep::summary_markdown(res);
        std::cout << "\nwrote results.csv, trace.csv, summary.md to " << out_dir
                  << "\n";
        if (strict) {
            std::size_t unconverged = 0;
            for (const spcm::sweep::PointResult& pt : res.points)
                if (!pt.converged) ++unconverged;
            if (unconverged > 0) {
                std::cerr << unconverged << " point(s) did not converge\n";
                return 2;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
