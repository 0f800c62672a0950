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

#include "spcm/link.hpp"
#include "spcm/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace spcm::link;
using spcm::channel::FadingSpec;
using spcm::hiermod::HierScheme;
using spcm::hiermod::LayerSerProfile;
using spcm::hiermod::Modulation;

TEST_CASE("cumulative link failure cascades") {
    LayerSerProfile p;
    p.cond_ser = {0.1, 0.2};
    auto prof = cumulative_link_ser(p);
    REQUIRE(prof.cum_ser.size() == 2);
    CHECK(prof.cum_ser[0] == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(prof.cum_ser[1] == doctest::Approx(0.28).epsilon(1e-14));

    p.cond_ser = {0.0, 0.0, 0.0};
    prof = cumulative_link_ser(p);
    for (double v : prof.cum_ser) CHECK(v == 0.0);

    // Random profiles against the direct product formula.
    double u[2];
    for (std::uint64_t i = 0; i < 50; ++i) {
        LayerSerProfile r;
        std::size_t n = 1 + i % 5;
        for (std::size_t l = 0; l < n; ++l) {
            spcm::rng::uniform2(31, i, l, u);
            r.cond_ser.push_back(u[0]);
        }
        auto got = cumulative_link_ser(r);
        double ok = 1.0;
        for (std::size_t l = 0; l < n; ++l) {
            ok *= 1.0 - r.cond_ser[l];
            CHECK(std::abs(got.cum_ser[l] - (1.0 - ok)) < 1e-14);
        }
    }
}

TEST_CASE("end-to-end failure composition") {
    LinkErrorProfile direct{{0.5}}, sr{{0.2}}, rd{{0.3}};
    auto e2e = e2e_ser(direct, sr, rd);
    REQUIRE(e2e.size() == 1);
    // 0.5 * (1 - 0.8 * 0.7) = 0.5 * 0.44 = 0.22.
    CHECK(e2e[0] == doctest::Approx(0.22).epsilon(1e-14));

    // Either path alone delivering perfectly drives the failure to zero.
    LinkErrorProfile perfect{{0.0}};
    CHECK(e2e_ser(perfect, sr, rd)[0] == 0.0);
    CHECK(e2e_ser(direct, perfect, perfect)[0] == 0.0);
    // Broken relayed path: the direct link alone decides.
    LinkErrorProfile broken{{1.0}};
    CHECK(e2e_ser(direct, broken, rd)[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("relaying never hurts") {
    double u[2];
    for (std::uint64_t i = 0; i < 200; ++i) {
        spcm::rng::uniform2(77, 2, i, u);
        double d = u[0];
        spcm::rng::uniform2(77, 3, i, u);
        LinkErrorProfile direct{{d}}, sr{{u[0]}}, rd{{u[1]}};
        auto e2e = e2e_ser(direct, sr, rd);
        CHECK(e2e[0] <= d + 1e-15);
        CHECK(e2e[0] >= 0.0);
    }
}

TEST_CASE("event distribution differences the cumulative vector") {
    auto ev = event_distribution({0.3, 0.5});
    REQUIRE(ev.probs.size() == 3);
    CHECK(ev.probs[0] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(ev.probs[1] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(ev.probs[2] == doctest::Approx(0.5).epsilon(1e-14));

    auto all_ok = event_distribution({0.0, 0.0, 0.0});
    CHECK(all_ok.probs[0] == 0.0);
    CHECK(all_ok.probs[1] == 0.0);
    CHECK(all_ok.probs[2] == 0.0);
    CHECK(all_ok.probs[3] == 1.0);

    auto all_bad = event_distribution({1.0, 1.0});
    CHECK(all_bad.probs[0] == 1.0);
    CHECK(all_bad.probs[1] == 0.0);
    CHECK(all_bad.probs[2] == 0.0);

    // Cumulative failure cannot decrease with depth.
    CHECK_THROWS_AS(event_distribution({0.4, 0.3}), std::domain_error);
}

TEST_CASE("expected failure with point-mass gains equals the composition") {
    HierScheme src;
    src.layers = {Modulation::qpsk, Modulation::qam16};
    src.beta = {0.75, 0.25};
    HierScheme rly = src;

    Integrator integ;
    integ.draws = 64;
    integ.fixed_gains = {{2.0, 5.0, 3.0}};

    auto p_sd = cumulative_link_ser(spcm::hiermod::layer_ser_profile(2.0, src));
    auto p_sr = cumulative_link_ser(spcm::hiermod::layer_ser_profile(5.0, src));
    auto p_rd = cumulative_link_ser(spcm::hiermod::layer_ser_profile(3.0, rly));
    auto want = e2e_ser(p_sd, p_sr, p_rd);

    for (std::size_t layer = 1; layer <= 2; ++layer) {
        auto est = expected_e2e_ser(src, rly, FadingSpec{1.0, 1.0},
                                    FadingSpec{1.0, 1.0}, FadingSpec{1.0, 1.0},
                                    layer, integ);
        CHECK(est.value == doctest::Approx(want[layer - 1]).epsilon(1e-12));
        // Identical per-draw values leave only rounding residue in the
        // variance accumulator, so the error bar is tiny but not exactly zero.
        CHECK(est.std_error <= 1e-8);
        CHECK(est.draws == 64);
    }
}

TEST_CASE("expected failure under fading matches an independent average") {
    HierScheme src;
    src.layers = {Modulation::qpsk, Modulation::qam16};
    src.beta = {0.8, 0.2};
    HierScheme rly = src;

    FadingSpec sd{1.0, 0.6};
    FadingSpec sr{2.0, 2.0};
    FadingSpec rd{2.0, 1.5};

    Integrator integ;
    integ.draws = 20000;
    integ.seed = 5;

    // Independent oracle: average the deterministic composition over fresh
    // fading draws from the channel sampler.
    const std::size_t n = 200000;
    std::vector<double> h_sd(n), h_sr(n), h_rd(n);
    spcm::channel::sample_gain_array(sd, 999, 0, n, h_sd.data());
    spcm::channel::sample_gain_array(sr, 999, 1, n, h_sr.data());
    spcm::channel::sample_gain_array(rd, 999, 2, n, h_rd.data());

    double acc[2] = {0.0, 0.0}, acc2[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        auto a = cumulative_link_ser(
            spcm::hiermod::layer_ser_profile(h_sd[i], src));
        auto b = cumulative_link_ser(
            spcm::hiermod::layer_ser_profile(h_sr[i], src));
        auto c = cumulative_link_ser(
            spcm::hiermod::layer_ser_profile(h_rd[i], rly));
        auto v = e2e_ser(a, b, c);
        for (int l = 0; l < 2; ++l) {
            acc[l] += v[l];
            acc2[l] += v[l] * v[l];
        }
    }
    for (std::size_t layer = 1; layer <= 2; ++layer) {
        double mean = acc[layer - 1] / static_cast<double>(n);
        double var = acc2[layer - 1] / static_cast<double>(n) - mean * mean;
        double se_oracle = std::sqrt(var / static_cast<double>(n));

        auto est = expected_e2e_ser(src, rly, sd, sr, rd, layer, integ);
        double tol = 3.0 * std::hypot(est.std_error, se_oracle);
        CHECK(std::abs(est.value - mean) < tol);
        CHECK(est.std_error > 0.0);
        CHECK(est.std_error < 0.01);
    }
}

TEST_CASE("standard error shrinks with the draw count") {
    HierScheme src;
    src.layers = {Modulation::qpsk};
    src.beta = {1.0};
    FadingSpec f{1.0, 1.0};
    Integrator small{4000, 17, std::nullopt};
    Integrator big{64000, 17, std::nullopt};
    auto a = expected_e2e_ser(src, src, f, f, f, 1, small);
    auto b = expected_e2e_ser(src, src, f, f, f, 1, big);
    // 16x draws: standard error should shrink by about 4, allow wide margin.
    CHECK(b.std_error < 0.5 * a.std_error);
    CHECK(b.std_error > 0.0);
}
