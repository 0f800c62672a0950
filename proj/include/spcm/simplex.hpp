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

#ifndef SPCM_SIMPLEX_HPP
#define SPCM_SIMPLEX_HPP

#include <cstddef>
#include <vector>

namespace spcm::lp {

// min objective . x  subject to the rows and x >= 0. Free variables must be
// split into positive parts by the caller.
struct Lp {
    struct Row {
        std::vector<double> a;
        double b = 0.0;
        bool equality = false; // false: a.x <= b, true: a.x == b
    };

    std::size_t n_vars = 0;
    std::vector<double> objective;
    std::vector<Row> rows;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    std::vector<double> x;
    double objective = 0.0;
};

// Dense two-phase simplex with Bland's anti-cycling rule. Intended for the
// small master programs of this project (a few rows, up to a few hundred
// columns); deterministic for identical inputs.
LpSolution solve(const Lp& lp);

} // namespace spcm::lp

#endif
