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

#include "spcm/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#ifndef SPCM_TEST_DATA_DIR
#error "SPCM_TEST_DATA_DIR must be defined by the build"
#endif

using namespace spcm::scenario;

namespace {

bool mentions_line(const ConfigError& e, int line) {
    return std::string(e.what()).find("line " + std::to_string(line)) !=
           std::string::npos;
}

}  // namespace

TEST_CASE("builtin scheme catalog") {
    const auto& defs = builtin_schemes();
    CHECK(defs.size() == 6);
    for (const auto& d : defs) {
        int bits = 0;
        for (auto m : d.layers) bits += spcm::hiermod::bits_per_symbol(m);
        // Every catalog entry carries the same spectral efficiency.
        CHECK(bits == 6);
    }
    CHECK(scheme_by_name("relay-3l").relay);
    CHECK(scheme_by_name("relay-3l").layers.size() == 3);
    CHECK(!scheme_by_name("direct-3l").relay);
    CHECK(scheme_by_name("relay-2l").layers.size() == 2);
    CHECK(scheme_by_name("relay-mono").layers.size() == 1);
    CHECK(find_scheme("no-such-scheme") == nullptr);
    CHECK_THROWS_AS(scheme_by_name("no-such-scheme"), std::invalid_argument);
}

TEST_CASE("metric names") {
    CHECK(std::string(metric_name(Metric::p1)) == "p1");
    CHECK(std::string(metric_name(Metric::p2)) == "p2");
    CHECK(metric_from_name("p1") == Metric::p1);
    CHECK(metric_from_name("P2") == Metric::p2);
    CHECK_THROWS_AS(metric_from_name("p3"), std::invalid_argument);
}

TEST_CASE("config parsing happy path") {
    Scenario s = parse_config(
        "# comment\n"
        "[scenario]\n"
        "extent = 12\n"
        "users = 3\n"
        "seed = 5\n"
        "\n"
        "[run]\n"
        "snr_db = 0 10\n"
        "schemes = relay-mono\n"
        "metrics = p1, p2\n"
        "optimizer_draws = 50\n");
    CHECK(s.extent == 12.0);
    CHECK(s.n_users == 3);
    CHECK(s.seed == 5);
    CHECK(s.snr_db == std::vector<double>{0.0, 10.0});
    CHECK(s.schemes == std::vector<std::string>{"relay-mono"});
    REQUIRE(s.metrics.size() == 2);
    CHECK(s.metrics[0] == Metric::p1);
    CHECK(s.metrics[1] == Metric::p2);
    CHECK(s.optimizer_draws == 50);
    // Untouched keys keep their defaults.
    CHECK(s.path_loss_exp == 3.0);
    CHECK(s.fading_shape == 2.0);
    CHECK(s.report_draws == 200000);
    CHECK(s.max_iterations == 100);
}

TEST_CASE("empty config gives the default scenario") {
    Scenario s = parse_config("");
    Scenario d;
    CHECK(s.extent == d.extent);
    CHECK(s.n_users == d.n_users);
    CHECK(s.snr_db == d.snr_db);
    CHECK(s.schemes == d.schemes);
    CHECK(s.optimizer_draws == d.optimizer_draws);
}

TEST_CASE("config errors carry line numbers") {
    try {
        parse_config("[scenario]\nextent = 5\nwhat = 3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions_line(e, 3));
        CHECK(std::string(e.what()).find("unknown key") != std::string::npos);
    }

    try {
        parse_config("[nope]\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions_line(e, 1));
        CHECK(std::string(e.what()).find("unknown section") != std::string::npos);
    }

    try {
        parse_config("extent = 5\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions_line(e, 1));
        CHECK(std::string(e.what()).find("outside any section") !=
              std::string::npos);
    }

    try {
        parse_config("[scenario]\nextent = 5\nextent = 6\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions_line(e, 3));
        CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
    }

    try {
        parse_config("[scenario]\nextent =\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions_line(e, 2));
        CHECK(std::string(e.what()).find("empty value") != std::string::npos);
    }

    try {
        parse_config("[scenario]\nextent = abc\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions_line(e, 2));
    }

    try {
        parse_config("[scenario]\nusers = -3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions_line(e, 2));
    }

    try {
        parse_config("[run]\nschemes = relay-9l\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions_line(e, 2));
    }

    try {
        parse_config("[run]\nmetrics = p7\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions_line(e, 2));
    }

    try {
        parse_config("[scenario\nextent = 5\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions_line(e, 1));
    }

    try {
        parse_config("[scenario]\njust some words\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions_line(e, 2));
        CHECK(std::string(e.what()).find("key = value") != std::string::npos);
    }
}

TEST_CASE("config file loading") {
    Scenario s = load_config(std::string(SPCM_TEST_DATA_DIR) +
                             "/sample_config.ini");
    CHECK(s.extent == 8.0);
    CHECK(s.n_users == 4);
    CHECK(s.seed == 99);
    CHECK(s.snr_db == std::vector<double>{-5.0, 5.0, 15.0});
    CHECK(s.schemes == std::vector<std::string>{"relay-2l", "direct-2l"});
    REQUIRE(s.metrics.size() == 1);
    CHECK(s.metrics[0] == Metric::p1);
    CHECK(s.optimizer_draws == 800);
    CHECK(s.report_draws == 2000);
    CHECK(s.epsilon == 0.01);
    CHECK(s.max_iterations == 20);

    CHECK_THROWS_AS(load_config("/no/such/file.ini"), ConfigError);
}

TEST_CASE("scenario validation") {
    Scenario s;
    CHECK_NOTHROW(s.validate());
    s.extent = 0.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = Scenario{};
    s.n_users = 0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = Scenario{};
    s.schemes = {"bogus"};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = Scenario{};
    s.snr_db = {};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = Scenario{};
    s.epsilon = 0.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("placement geometry") {
    Scenario s;
    s.extent = 10.0;
    s.n_users = 10;
    Placement p = make_placement(s);
    REQUIRE(p.geom.nodes.count("src") == 1);
    REQUIRE(p.geom.nodes.count("rly") == 1);
    CHECK(p.geom.nodes.at("src").x == 0.0);
    CHECK(p.geom.nodes.at("src").y == 0.0);
    CHECK(p.geom.nodes.at("rly").x == 5.0);
    CHECK(p.geom.nodes.at("rly").y == 5.0);
    CHECK(p.geom.alpha == s.path_loss_exp);
    for (std::size_t u = 0; u < 10; ++u) {
        const auto& v = p.geom.nodes.at("u" + std::to_string(u));
        CHECK(v.x >= 0.0);
        CHECK(v.x <= 10.0);
        CHECK(v.y >= 0.0);
        CHECK(v.y <= 10.0);
    }
    CHECK(p.geom.nodes.size() == 12);

    // Same seed, same layout; different seed, different layout.
    Placement q = make_placement(s);
    CHECK(q.geom.nodes.at("u3").x == p.geom.nodes.at("u3").x);
    s.seed += 1;
    Placement r = make_placement(s);
    bool any_moved = false;
    for (std::size_t u = 0; u < 10; ++u) {
        if (r.geom.nodes.at("u" + std::to_string(u)).x !=
            p.geom.nodes.at("u" + std::to_string(u)).x)
            any_moved = true;
    }
    CHECK(any_moved);
}

TEST_CASE("reference power") {
    Scenario s;  // extent 10, path loss 3, noise 1
    // At 0 dB the received power over the source-relay distance equals the
    // noise level: P * (10/sqrt(2))^-3 = 1.
    double p0 = reference_power(s, 0.0);
    CHECK(p0 == doctest::Approx(std::pow(10.0 / std::sqrt(2.0), 3.0))
                    .epsilon(1e-12));
    CHECK(p0 * std::pow(10.0 / std::sqrt(2.0), -3.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(reference_power(s, 10.0) == doctest::Approx(10.0 * p0).epsilon(1e-12));
    CHECK(reference_power(s, -10.0) == doctest::Approx(0.1 * p0).epsilon(1e-12));
}

TEST_CASE("problem assembly") {
    Scenario s;
    s.n_users = 4;
    s.optimizer_draws = 500;
    Placement p = make_placement(s);
    const SchemeDef& def = scheme_by_name("relay-3l");
    auto prob = make_problem(s, p, def, 5.0, Metric::p1);

    CHECK(prob.relay_enabled);
    REQUIRE(prob.source_scheme.layers.size() == 3);
    CHECK(prob.source_scheme.symbol_energy ==
          doctest::Approx(reference_power(s, 5.0)).epsilon(1e-12));
    CHECK(prob.source_scheme.noise_psd == s.noise_psd);
    CHECK(prob.relay_scheme.layers == prob.source_scheme.layers);
    CHECK(prob.draws == 500);
    CHECK(prob.seed == s.seed);
    CHECK(prob.model.rates == std::vector<int>{1, 1, 4});
    CHECK(prob.model.sigma2 == s.sigma2);
    REQUIRE(prob.users.size() == 4);

    // Mean gains follow the placement distances.
    double d_sr = std::hypot(5.0, 5.0);
    CHECK(prob.sr.mean_gain ==
          doctest::Approx(std::pow(d_sr, -3.0)).epsilon(1e-12));
    CHECK(prob.sr.rho == s.fading_shape);
    const auto& u0 = p.geom.nodes.at("u0");
    double d_u0 = std::hypot(u0.x, u0.y);
    CHECK(prob.users[0].sd.mean_gain ==
          doctest::Approx(std::pow(d_u0, -3.0)).epsilon(1e-12));
    double d_r0 = std::hypot(u0.x - 5.0, u0.y - 5.0);
    CHECK(prob.users[0].rd.mean_gain ==
          doctest::Approx(std::pow(d_r0, -3.0)).epsilon(1e-12));

    // Uniform weights for p1, worst-user flag for p2.
    CHECK(!prob.weights.worst);
    REQUIRE(prob.weights.c.size() == 4);
    CHECK(prob.weights.c[0] == doctest::Approx(0.25).epsilon(1e-12));
    auto prob2 = make_problem(s, p, scheme_by_name("direct-2l"), 5.0, Metric::p2);
    CHECK(prob2.weights.worst);
    CHECK(!prob2.relay_enabled);
    CHECK(prob2.model.rates == std::vector<int>{2, 4});
}
