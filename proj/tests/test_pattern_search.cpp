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

#include "spcm/pattern_search.hpp"

#include <cmath>
#include <vector>

using namespace spcm::search;

TEST_CASE("quadratic bowl") {
    auto f = [](const std::vector<double>& x) {
        double a = x[0] - 0.37, b = x[1] - 0.61;
        return a * a + 2.0 * b * b;
    };
    PatternConfig cfg;
    auto res = minimize_box(f, {0.5, 0.5}, cfg);
    CHECK(std::abs(res.x[0] - 0.37) < 2.0 * cfg.min_step);
    CHECK(std::abs(res.x[1] - 0.61) < 2.0 * cfg.min_step);
    CHECK(res.value < 1e-4);
    CHECK(!res.budget_exhausted);
    CHECK(res.evals > 0);
}

TEST_CASE("monotone objective rides to the corner") {
    auto f = [](const std::vector<double>& x) { return x[0] + x[1] + x[2]; };
    auto res = minimize_box(f, {0.75, 0.5, 0.25}, PatternConfig{});
    for (double v : res.x) CHECK(v < 2.0 / 1024.0);
    auto res2 = minimize_box(
        [](const std::vector<double>& x) { return -(x[0] + x[1]); },
        {0.25, 0.25}, PatternConfig{});
    for (double v : res2.x) CHECK(v > 1.0 - 2.0 / 1024.0);
}

TEST_CASE("iterates stay inside the box") {
    // An objective that rewards leaving the box would expose missing clamps.
    auto f = [](const std::vector<double>& x) {
        return -(x[0] * x[0]) - (1.0 - x[1]) * (1.0 - x[1]);
    };
    auto res = minimize_box(f, {0.9, 0.1}, PatternConfig{});
    CHECK(res.x[0] <= 1.0);
    CHECK(res.x[0] >= 0.0);
    CHECK(res.x[1] <= 1.0);
    CHECK(res.x[1] >= 0.0);
    CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(res.x[1] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("evaluation budget is respected") {
    std::size_t calls = 0;
    auto f = [&calls](const std::vector<double>& x) {
        ++calls;
        // Rough landscape so the search keeps probing.
        return std::sin(40.0 * x[0]) + std::cos(33.0 * x[1]) + x[0];
    };
    PatternConfig cfg;
    cfg.max_evals = 37;
    auto res = minimize_box(f, {0.5, 0.5}, cfg);
    CHECK(calls <= cfg.max_evals);
    CHECK(res.evals == calls);
    CHECK(res.budget_exhausted);
}

TEST_CASE("result is never worse than the start") {
    auto f = [](const std::vector<double>& x) {
        return std::abs(x[0] - 0.2) + std::abs(x[1] - 0.9) +
               0.3 * std::sin(25.0 * x[0] * x[1]);
    };
    std::vector<double> start = {0.6, 0.3};
    auto res = minimize_box(f, start, PatternConfig{});
    CHECK(res.value <= f(start) + 1e-15);
}

TEST_CASE("search beats a coarse grid scan") {
    // Smooth unimodal objective: the search should land at least as low as
    // a 17x17 grid scan (up to the final step tolerance).
    auto f = [](const std::vector<double>& x) {
        double a = x[0] - 0.43, b = x[1] - 0.17;
        return std::exp(a * a + 0.5 * b * b) + 0.1 * x[0];
    };
    double grid_best = 1e300;
    for (int i = 0; i <= 16; ++i) {
        for (int j = 0; j <= 16; ++j) {
            std::vector<double> x = {i / 16.0, j / 16.0};
            grid_best = std::min(grid_best, f(x));
        }
    }
    auto res = minimize_box(f, {0.5, 0.5}, PatternConfig{});
    CHECK(res.value <= grid_best + 1e-6);
}

TEST_CASE("one-dimensional search") {
    auto f = [](const std::vector<double>& x) {
        return (x[0] - 0.77) * (x[0] - 0.77);
    };
    auto res = minimize_box(f, {0.0}, PatternConfig{});
    CHECK(std::abs(res.x[0] - 0.77) < 2.0 / 1024.0);
}
