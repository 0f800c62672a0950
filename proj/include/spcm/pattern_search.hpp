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

#ifndef SPCM_PATTERN_SEARCH_HPP
#define SPCM_PATTERN_SEARCH_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace spcm::search {

struct PatternConfig {
    double initial_step = 0.25;
    double shrink = 0.5;
    double min_step = 1.0 / 1024.0;
    std::size_t max_evals = 2000;
};

struct PatternResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evals = 0;
    bool budget_exhausted = false;
};

// Compass pattern search over the unit box [0,1]^dim: probe +/- step along
// each coordinate, move on first improvement, halve the step when a full
// sweep fails. Deterministic; probes stay on a dyadic lattice relative to the
// start, which makes memoized objectives cheap to reuse.
PatternResult minimize_box(const std::function<double(const std::vector<double>&)>& f,
                           std::vector<double> start, const PatternConfig& cfg);

} // namespace spcm::search

#endif
