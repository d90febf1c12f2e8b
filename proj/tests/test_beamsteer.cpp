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

#include "lensarray/beamsteer.hpp"

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

    const SteeringMap &mula_map()
    {
        static const SteeringMap m = build_steering_map(make_mula(Variant::MULA_4x4, 3), AngularGrid(1.0), 0);
        return m;
    }
}

TEST_CASE("steering map of the 4x4 MULA")
{
    const auto &m = mula_map();
    REQUIRE(m.entries.size() == 16);
    CHECK(m.plane == SteeringPlane::vertical);
    CHECK_FALSE(m.degenerate);
    CHECK(m.config_hash.size() == 16);
    CHECK(m.config_hash == config_hash(make_mula(Variant::MULA_4x4, 3)));
    CHECK(m.config_hash != config_hash(make_mula(Variant::MULA_4x4, 2)));
    for (int p = 1; p <= 16; ++p)
    {
        CHECK(m.entry(p).port == p);
        CHECK(std::isfinite(m.entry(p).hpbw_deg));
    }
    CHECK(m.entry(1).scan_deg > 0.0);
    CHECK(m.entry(16).scan_deg < 0.0);
    CHECK_THROWS(m.entry(17));

    std::ostringstream os;
    write_steering_json(os, m);
    auto j = nlohmann::json::parse(os.str());
    REQUIRE(j.size() == 16);
    CHECK(j[0]["port"] == 1);
    CHECK(j[0].contains("theta_deg"));
    CHECK(j[0].contains("gain_dbi"));
}

TEST_CASE("no-lens steering map is degenerate")
{
    auto m = build_steering_map(make_mula(Variant::NO_LENS_4x4, 0), AngularGrid(2.0));
    CHECK(m.degenerate);
    CHECK_THROWS_AS(select_port(m, 0.0), no_steering);
    std::ostringstream os;
    write_steering_json(os, m);
    CHECK(nlohmann::json::parse(os.str()).size() == 16);
}

TEST_CASE("port selection")
{
    const auto &m = mula_map();
    SUBCASE("each port's own angle selects a port with that angle")
    {
        for (const auto &e : m.entries)
        {
            int p = select_port(m, e.scan_deg);
            CHECK(m.entry(p).scan_deg == doctest::Approx(e.scan_deg));
            CHECK(p <= e.port);
            CHECK(select_port(m, m.entry(p).scan_deg) == p);
        }
    }
    SUBCASE("exhaustive scan agrees with brute force")
    {
        for (double t = -40.0; t <= 40.0; t += 0.25)
        {
            int p = select_port(m, t);
            for (const auto &e : m.entries)
                CHECK(std::abs(m.entry(p).scan_deg - t) <= std::abs(e.scan_deg - t) + 1e-9);
        }
    }
    SUBCASE("targets beyond the extremes clamp")
    {
        double lo = 1e9, hi = -1e9;
        for (const auto &e : m.entries)
        {
            lo = std::min(lo, e.scan_deg);
            hi = std::max(hi, e.scan_deg);
        }
        CHECK(m.entry(select_port(m, 89.0)).scan_deg == doctest::Approx(hi));
        CHECK(m.entry(select_port(m, -89.0)).scan_deg == doctest::Approx(lo));
    }
    SUBCASE("1x4 steers in the horizontal plane")
    {
        auto r = build_steering_map(make_mula(Variant::MULA_1x4, 3), AngularGrid(1.0));
        CHECK(r.plane == SteeringPlane::horizontal);
        CHECK(select_port(r, 90.0) == 1);
        CHECK(select_port(r, -90.0) == 4);
    }
}

TEST_CASE("switch model")
{
    SwitchModel s;
    CHECK(s.net_loss_db() == 0.0);
    CHECK_NOTHROW(s.validate());
    s.raw_loss_db = 9.0;
    CHECK_THROWS_AS(s.validate(), domain_error);
    s.raw_loss_db = 20.0;
    s.compensation_db = 12.0;
    CHECK(s.net_loss_db() == doctest::Approx(8.0));
    auto a = make_system_codebook(16, true, sources());
    auto b = make_system_codebook(16, true, sources(), codebook_span_deg, s);
    CHECK(a.peak_gain_dbi - b.peak_gain_dbi == doctest::Approx(8.0));
}

TEST_CASE("cut shapes")
{
    auto c = recentre_cut({-2, -1, 0, 1, 2}, {-7, -1, -4, -9, -20});
    CHECK(c.offset_deg.front() == -1.0);
    CHECK(c.rel_db[1] == 0.0);
    CHECK(c.at(0.5) == doctest::Approx(-1.5));
    CHECK(c.at(5.0) == -300.0);
    CHECK_THROWS_AS(recentre_cut({0.0}, {}), domain_error);
}

TEST_CASE("codebook properties")
{
    CHECK_THROWS_AS(codebook_half_width(12), domain_error);
    double last_peak = -1e9;
    for (int nb : {8, 16, 32, 64})
    {
        CAPTURE(nb);
        for (bool lens : {true, false})
        {
            auto cb = make_system_codebook(nb, lens, sources());
            REQUIRE(cb.directions_deg.size() == std::size_t(nb));
            CHECK(cb.directions_deg.front() == doctest::Approx(-codebook_span_deg));
            CHECK(cb.directions_deg.back() == doctest::Approx(codebook_span_deg));
            for (int b = 0; b < nb; ++b)
                CHECK(cb.directions_deg[std::size_t(b)] == -cb.directions_deg[std::size_t(nb - 1 - b)]);

            // Measured width matches the nominal within 10%
            CHECK(std::abs(cb.measured_hpbw_deg() / (2.0 * cb.half_width_deg) - 1.0) < 0.1);

            // Symmetric pairs share gain at mirrored angles
            for (int b = 0; b < nb / 2; ++b)
                CHECK(cb.gain_dbi(b, cb.directions_deg[std::size_t(b)] + 3.0, 4.0) ==
                      doctest::Approx(cb.gain_dbi(nb - 1 - b, cb.directions_deg[std::size_t(nb - 1 - b)] + 3.0, 4.0)));

            CHECK(cb.power_fraction(0) <= 1.0);
            CHECK(cb.gain_dbi(nb / 2, cb.directions_deg[std::size_t(nb / 2)], 0.0) ==
                  doctest::Approx(cb.peak_gain_dbi));

            // The sector is covered: best beam within 3.5 dB of peak everywhere in the span
            double worst = 1e9;
            for (double az = -codebook_span_deg; az <= codebook_span_deg; az += 0.1)
            {
                double best = -1e9;
                for (int b = 0; b < nb; ++b)
                    best = std::max(best, cb.gain_dbi(b, az, 0.0));
                worst = std::min(worst, best);
            }
            CHECK(worst >= cb.peak_gain_dbi - 3.5);
        }
        auto cb = make_system_codebook(nb, true, sources());
        CHECK(cb.peak_gain_dbi > last_peak);
        last_peak = cb.peak_gain_dbi;
        CHECK(cb.peak_gain_dbi > make_system_codebook(nb, false, sources()).peak_gain_dbi);
    }
}

TEST_CASE("beam gain follows the beam solid angle")
{
    // Kraus estimate 4 pi / (theta_az theta_el). The source pattern sits some fixed margin below
    // it (losses, sidelobes); narrowing the beam must keep that margin.
    auto width = [](const CutShape &c)
    {
        std::vector<double> x, g;
        for (double e = -60.0; e <= 60.0; e += 0.01)
        {
            x.push_back(e);
            g.push_back(c.at(e));
        }
        return hpbw_of_cut(x, g);
    };
    auto kraus = [](double az, double el) { return db_from_linear(4.0 * pi / (deg2rad(az) * deg2rad(el))); };
    auto cb = make_system_codebook(64, true, sources());
    const double el_w = width(cb.elevation);
    const double src_margin = cb.source_peak_dbi - kraus(width(cb.scan), el_w);
    const double cb_margin = cb.peak_gain_dbi - kraus(cb.measured_hpbw_deg(), el_w);
    MESSAGE("source margin " << src_margin << " dB, codebook margin " << cb_margin << " dB");
    CHECK(std::abs(cb_margin - src_margin) < 0.5);
}
