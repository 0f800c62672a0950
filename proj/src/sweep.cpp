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

#include "spcm/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "spcm/evaluator.hpp"

namespace spcm::sweep {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

PointResult run_point(const scenario::Scenario& scn, const scenario::Placement& p,
                      const scenario::SchemeDef& scheme, double snr_db,
                      scenario::Metric metric, std::uint64_t search_salt) {
    evaluator::EvalProblem prob = scenario::make_problem(scn, p, scheme, snr_db, metric);
    evaluator::ScenarioEvaluator ev(prob);

    optimizer::GpConfig cfg;
    cfg.epsilon = scn.epsilon * scn.sigma2;
    cfg.max_iters = scn.max_iterations;
    cfg.search.seed += search_salt;
    const optimizer::GpResult gp = optimizer::run_generalized_programming(ev, cfg);

    // Re-evaluate the chosen allocation on a longer draw sequence (the
    // optimizer's draws are its prefix) for the reported value.
    evaluator::EvalProblem report_prob = prob;
    report_prob.draws = scn.report_draws;
    evaluator::ScenarioEvaluator report_ev(report_prob);
    const evaluator::EvalResult fin = report_ev.evaluate(gp.best.beta_s, gp.best.beta_r);

    PointResult out;
    out.scheme = scheme.name;
    out.snr_db = snr_db;
    out.metric = metric;
    out.objective = fin.objective;
    out.std_error = fin.std_error;
    out.beta_s = gp.best.beta_s;
    if (scheme.relay)
        out.beta_r = gp.best.beta_r;
    out.iterations = gp.iterations;
    out.gap = gp.d_max - gp.d_min;
    out.converged = gp.converged;
    out.trace = gp.trace;
    return out;
}

SweepResult run_comparison(const scenario::Scenario& scn) {
    scn.validate();
    const scenario::Placement p = scenario::make_placement(scn);
    SweepResult res;
    res.scn = scn;
    std::uint64_t salt = 0;
    for (const std::string& name : scn.schemes) {
        const scenario::SchemeDef& scheme = scenario::scheme_by_name(name);
        for (double snr : scn.snr_db)
            for (scenario::Metric metric : scn.metrics)
                res.points.push_back(run_point(scn, p, scheme, snr, metric, salt++));
    }
    return res;
}

namespace {

std::size_t max_layers(const SweepResult& res) {
    std::size_t nl = 0;
    for (const PointResult& pt : res.points)
        nl = std::max(nl, pt.beta_s.size());
    for (const std::string& name : res.scn.schemes)
        nl = std::max(nl, scenario::scheme_by_name(name).layers.size());
    return nl;
}

} // namespace

std::string results_csv(const SweepResult& res) {
    if (res.points.empty())
        throw std::invalid_argument("results_csv: empty sweep");
    const std::size_t nl = max_layers(res);
    std::ostringstream out;
    out << "scheme,snr_db,metric,objective,stderr";
    for (std::size_t l = 1; l <= nl; ++l)
        out << ",beta_s" << l;
    for (std::size_t l = 1; l <= nl; ++l)
        out << ",beta_r" << l;
    out << ",iters,gap\n";
    for (const PointResult& pt : res.points) {
        out << pt.scheme << ',' << format_double(pt.snr_db) << ','
            << scenario::metric_name(pt.metric) << ',' << format_double(pt.objective)
            << ',' << format_double(pt.std_error);
        for (std::size_t l = 0; l < nl; ++l) {
            out << ',';
            if (l < pt.beta_s.size())
                out << format_double(pt.beta_s[l]);
        }
        for (std::size_t l = 0; l < nl; ++l) {
            out << ',';
            if (l < pt.beta_r.size())
                out << format_double(pt.beta_r[l]);
        }
        out << ',' << pt.iterations << ',' << format_double(pt.gap) << '\n';
    }
    return out.str();
}

std::string trace_csv(const SweepResult& res) {
    std::ostringstream out;
    out << "scheme,snr_db,metric,iter,z,theta,nu_s,nu_r,g,d_min,d_max\n";
    for (const PointResult& pt : res.points)
        for (const optimizer::IterationRecord& r : pt.trace)
            out << pt.scheme << ',' << format_double(pt.snr_db) << ','
                << scenario::metric_name(pt.metric) << ',' << r.iter << ','
                << format_double(r.z) << ',' << format_double(r.theta) << ','
                << format_double(r.nu_s) << ',' << format_double(r.nu_r) << ','
                << format_double(r.g) << ',' << format_double(r.d_min) << ','
                << format_double(r.d_max) << '\n';
    return out.str();
}

std::string summary_markdown(const SweepResult& res) {
    std::ostringstream out;
    out << "# Distortion comparison\n\n";
    out << "Square side " << format_double(res.scn.extent) << ", "
        << res.scn.n_users << " users, path-loss exponent "
        << format_double(res.scn.path_loss_exp) << ", fading shape "
        << format_double(res.scn.fading_shape) << ", seed " << res.scn.seed
        << ".\n";
    for (scenario::Metric metric : res.scn.metrics) {
        out << "\n## Objective " << scenario::metric_name(metric)
            << (metric == scenario::Metric::p1 ? " (mean distortion)"
                                               : " (worst user)")
            << "\n\n";
        out << "| scheme \\ SNR (dB) |";
        for (double snr : res.scn.snr_db)
            out << ' ' << format_double(snr) << " |";
        out << "\n|---|";
        for (std::size_t i = 0; i < res.scn.snr_db.size(); ++i)
            out << "---|";
        out << '\n';
        for (const std::string& scheme : res.scn.schemes) {
            out << "| " << scheme << " |";
            for (double snr : res.scn.snr_db) {
                const PointResult* hit = nullptr;
                for (const PointResult& pt : res.points)
                    if (pt.scheme == scheme && pt.snr_db == snr && pt.metric == metric)
                        hit = &pt;
                if (hit)
                    out << ' ' << format_double(hit->objective) << " |";
                else
                    out << " - |";
            }
            out << '\n';
        }
    }
    std::size_t unconverged = 0;
    for (const PointResult& pt : res.points)
        if (!pt.converged)
            ++unconverged;
    out << '\n' << res.points.size() << " points; " << unconverged
        << " did not reach the gap threshold.\n";
    return out.str();
}

void write_outputs(const SweepResult& res, const std::string& out_dir) {
    namespace fs = std::filesystem;
    const std::string results = results_csv(res);
    const std::string trace = trace_csv(res);
    const std::string summary = summary_markdown(res);
    fs::create_directories(out_dir);
    auto put = [&](const char* name, const std::string& body) {
        const fs::path path = fs::path(out_dir) / name;
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot write " + path.string());
        f << body;
    };
    put("results.csv", results);
    put("trace.csv", trace);
    put("summary.md", summary);
}

} // namespace spcm::sweep
