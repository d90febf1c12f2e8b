// SPDX-License-Identifier: Apache-2.0
//
// lensarray: simulator for mmWave lens-embedded antenna arrays
// Copyright (C) 2026 The lensarray authors
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

#include "lensarray/syssim.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

using namespace lensarray;

namespace
{
    const CodebookSources &sources()
    {
        static const CodebookSources s = codebook_sources({}, 0.5, 0);
        return s;
    }

    Scenario small_outdoor()
    {
        auto s = default_scenario(ScenarioKind::outdoor_mu);
        s.trials = 12;
        return s;
    }
}

TEST_CASE("shannon capacity")
{
    CHECK(shannon(0.0, 1e9) == 0.0);
    CHECK(shannon(1.0, 1e9) == doctest::Approx(1e9));
    CHECK(shannon(3.0, 2e9) == doctest::Approx(4e9));
    CHECK_THROWS_AS(shannon(-0.1, 1e9), domain_error);
    CHECK_THROWS_AS(shannon(1.0, 0.0), domain_error);
    CHECK(sinr_for_efficiency(6.0) == doctest::Approx(63.0));
    CHECK_THROWS_AS(sinr_for_efficiency(-1.0), domain_error);
}

TEST_CASE("backhaul oracle")
{
    auto s = default_scenario(ScenarioKind::backhaul_2);
    const double lambda = speed_of_light / s.frequency;
    const double pl = 20.0 * std::log10(4.0 * pi * s.link_distance / lambda);
    const double snr = s.tx_power_dbm + 50.0 - pl - (-174.0 + 10.0 * std::log10(s.bandwidth) + s.noise_figure_db);
    const double oracle = s.bandwidth * std::log2(1.0 + std::pow(10.0, snr / 10.0));
    auto r = backhaul_link(s, 25.0);
    CHECK(r.snr_db == doctest::Approx(snr));
    CHECK(r.throughput_bps == doctest::Approx(oracle).epsilon(1e-9));

    BackhaulGains g;
    CHECK(backhaul_throughput(s, true, g) > backhaul_throughput(s, false, g));
}

TEST_CASE("excess loss calibration is exact")
{
    auto s = default_scenario(ScenarioKind::backhaul_1);
    const double x = calibrate_excess_loss(s, 25.0, 16.9e9);
    s.excess_loss_db = x;
    s.los = false;
    CHECK(backhaul_link(s, 25.0).throughput_bps == doctest::Approx(16.9e9).epsilon(1e-9));
    CHECK(x == doctest::Approx(s.excess_loss_db));
    CHECK_THROWS_AS(calibrate_excess_loss(s, 25.0, 1e15), domain_error);
}

TEST_CASE("multi-user SINR")
{
    // Two users each receiving S from both beams: SINR = S / (S + N)
    const double S = 2.0e-6, N = 1.0e-6;
    auto r = mu_sinr({{S, S}, {S, S}}, N);
    CHECK(r[0] == doctest::Approx(S / (S + N)));
    CHECK(r[1] == doctest::Approx(S / (S + N)));
    auto one = mu_sinr({{S}}, N);
    CHECK(one[0] == doctest::Approx(S / N));
    auto asym = mu_sinr({{4.0, 1.0}, {0.5, 3.0}}, 0.5);
    CHECK(asym[0] == doctest::Approx(4.0 / 1.5));
    CHECK(asym[1] == doctest::Approx(3.0 / 1.0));
}

TEST_CASE("trial seeds")
{
    CHECK(trial_seed(7, 0) != trial_seed(7, 1));
    CHECK(trial_seed(7, 3) == trial_seed(7, 3));
    CHECK(trial_seed(7, 3) != trial_seed(8, 3));
}

TEST_CASE("outdoor runs are deterministic")
{
    auto s = small_outdoor();
    auto cb = make_system_codebook(16, true, sources());
    auto a = run_outdoor_mu(s, cb, 1);
    auto b = run_outdoor_mu(s, cb, 4);
    std::ostringstream ja, jb;
    write_report_json(ja, a);
    write_report_json(jb, b);
    CHECK(ja.str() == jb.str());

    REQUIRE(a.trials.size() == 12);
    for (const auto &t : a.trials)
    {
        CHECK(t.users.size() == 5);
        std::vector<std::size_t> ids;
        for (const auto &u : t.users)
        {
            ids.push_back(u.user);
            CHECK(u.throughput_bps >= 0.0);
            CHECK(u.beam >= 0);
            CHECK(u.beam < 16);
        }
        std::sort(ids.begin(), ids.end());
        CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
    }

    s.seed = 8;
    auto c = run_outdoor_mu(s, cb, 2);
    CHECK(c.samples() != a.samples());
}

TEST_CASE("report statistics and CSV")
{
    auto s = small_outdoor();
    auto rep = run_outdoor_mu(s, make_system_codebook(8, false, sources()), 0);
    auto c = rep.cdf();
    REQUIRE(c.size() == 60);
    for (std::size_t i = 1; i < c.size(); ++i)
    {
        CHECK(c[i].first >= c[i - 1].first);
        CHECK(c[i].second > c[i - 1].second);
    }
    CHECK(c.back().second == 1.0);
    CHECK(rep.max() == c.back().first);
    CHECK(rep.median() <= rep.max());
    CHECK(rep.cdf_trial_means().size() == 12);
    CHECK_FALSE(rep.lens);

    std::ostringstream os;
    write_report_csv(os, rep);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line.rfind("# scenario_hash=" + scenario_hash(s), 0) == 0);
    std::getline(is, line);
    CHECK(line == "throughput_bps,cdf");
    std::size_t n = 0;
    while (std::getline(is, line))
        ++n;
    CHECK(n == 60);

    std::ostringstream js;
    write_report_json(js, rep);
    auto j = nlohmann::json::parse(js.str());
    CHECK(j["seed"] == 7);
    CHECK(j["mean_bps"].get<double>() == doctest::Approx(rep.mean()));
}

TEST_CASE("too few users is an error")
{
    auto s = small_outdoor();
    s.area.spacing = 60.0;
    s.users_per_trial = 50;
    CHECK_THROWS_AS(run_outdoor_mu(s, make_system_codebook(8, true, sources())), domain_error);
}

TEST_CASE("indoor fixed streams")
{
    auto s = default_scenario(ScenarioKind::indoor_mu);
    auto cb = make_system_codebook(s.indoor_codebook, true, sources());
    auto rep = run_indoor_mu(s, cb);
    REQUIRE(rep.trials.size() == 1);
    REQUIRE(rep.trials[0].users.size() == 300);
    auto users = drop_users(s);
    for (std::size_t i = 0; i < users.size(); ++i)
    {
        double az, el;
        tx_angles(s, users[i], az, el);
        const auto &u = rep.trials[0].users[i];
        // Inside a stream's main lobe that stream serves
        for (int m = 0; m < 2; ++m)
            if (std::abs(az - s.stream_directions_deg[std::size_t(m)]) < cb.half_width_deg)
                CHECK(u.beam == m);
    }

    // A lone stream sees no interference: SINR equals the hand-computed SNR
    auto one = s;
    one.stream_directions_deg = {0.0};
    auto r1 = run_indoor_mu(one, cb);
    const auto &u = r1.trials[0].users[0];
    const Vec3 rx = users[0];
    double az, el;
    tx_angles(one, rx, az, el);
    const double d = std::sqrt(std::pow(rx[0] - one.tx_position[0], 2) + std::pow(rx[1] - one.tx_position[1], 2) +
                               std::pow(rx[2] - one.tx_position[2], 2));
    const double rxp = one.tx_power_dbm + cb.gain_dbi_dir(0.0, az, el + one.downtilt_deg) -
                       20.0 * std::log10(4.0 * pi * d * one.frequency / speed_of_light);
    CHECK(u.sinr_db == doctest::Approx(rxp - noise_power_dbm(one.bandwidth, one.noise_figure_db)).epsilon(1e-9));
}

TEST_CASE("link-level budget")
{
    LinkBudgetParams p;
    auto r = link_level_budget(p);
    CHECK(r.fspl_db == doctest::Approx(58.3).epsilon(1e-3));
    CHECK(r.ceiling_bps == doctest::Approx(4.8e9));
    CHECK(r.measured_min_snr_db == doctest::Approx(10.0 * std::log10(std::exp2(2474e6 / 800e6) - 1.0)));
    CHECK(std::abs(r.measured_min_snr_db - 9.0) < 0.25);
    for (double horn = 10.0; horn <= 30.0; horn += 1.0)
    {
        p.horn_gain_dbi = horn;
        CHECK(link_level_budget(p).shannon_bps >= 2474e6);
    }
}
