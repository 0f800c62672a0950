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

#include "spcm/pattern_search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spcm::search {

PatternResult minimize_box(const std::function<double(const std::vector<double>&)>& f,
                           std::vector<double> start, const PatternConfig& cfg)
{
    if (start.empty())
        throw std::invalid_argument("minimize_box: empty start point");
    if (!(cfg.initial_step > 0.0) || !(cfg.shrink > 0.0) || cfg.shrink >= 1.0 ||
        !(cfg.min_step > 0.0) || cfg.max_evals < 1)
        throw std::invalid_argument("minimize_box: invalid search configuration");

    const std::size_t dim = start.size();
    for (double& v : start) v = std::clamp(v, 0.0, 1.0);

    PatternResult res;
    res.x = std::move(start);
    res.value = f(res.x);
    res.evals = 1;

    double step = cfg.initial_step;
    std::vector<double> probe = res.x;
    while (step >= cfg.min_step) {
        bool improved = false;
        for (std::size_t d = 0; d < dim && !improved; ++d) {
            for (int sgn = 0; sgn < 2 && !improved; ++sgn) {
                if (res.evals >= cfg.max_evals) {
                    res.budget_exhausted = true;
                    return res;
                }
                const double delta = sgn == 0 ? step : -step;
                const double moved = std::clamp(res.x[d] + delta, 0.0, 1.0);
                if (moved == res.x[d]) continue;
                probe = res.x;
                probe[d] = moved;
                const double v = f(probe);
                ++res.evals;
                if (v < res.value) {
                    res.x = probe;
                    res.value = v;
                    improved = true;
                }
            }
        }
        if (!improved) step *= cfg.shrink;
    }
    return res;
}

} // namespace spcm::search
