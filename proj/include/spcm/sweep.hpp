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

#ifndef SPCM_SWEEP_HPP
#define SPCM_SWEEP_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "spcm/optimizer.hpp"
#include "spcm/scenario.hpp"

namespace spcm::sweep {

// One optimized operating point. objective/std_error come from a final
// re-evaluation of the best allocation at the scenario's report_draws count;
// the remaining fields summarize the optimizer run that produced it.
struct PointResult {
    std::string scheme;
    double snr_db = 0.0;
    scenario::Metric metric = scenario::Metric::p1;
    double objective = 0.0;
    double std_error = 0.0;
    std::vector<double> beta_s;
    std::vector<double> beta_r; // empty for direct-only schemes
    std::size_t iterations = 0;
    double gap = 0.0;
    bool converged = false;
    std::vector<optimizer::IterationRecord> trace;
};

struct SweepResult {
    scenario::Scenario scn;
    std::vector<PointResult> points;
};

// Optimize one (scheme, snr, metric) point.
PointResult run_point(const scenario::Scenario& scn, const scenario::Placement& p,
                      const scenario::SchemeDef& scheme, double snr_db,
                      scenario::Metric metric, std::uint64_t search_salt);

// The full grid: every scheme at every reference SNR under every metric,
// in the order the scenario lists them.
SweepResult run_comparison(const scenario::Scenario& scn);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

// results.csv: one row per point. Power-fraction columns are padded to the
// widest scheme in the sweep; absent layers (and the relay side of
// direct-only schemes) render as empty cells.
std::string results_csv(const SweepResult& res);

// trace.csv: one row per optimizer iteration per point.
std::string trace_csv(const SweepResult& res);

// summary.md: per-metric objective tables plus convergence notes.
std::string summary_markdown(const SweepResult& res);

// Writes results.csv, trace.csv, and summary.md into out_dir (created if
// missing).
void write_outputs(const SweepResult& res, const std::string& out_dir);

} // namespace spcm::sweep

#endif
