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

#include "lensarray/array.hpp"

#include <cmath>
#include <set>

using namespace lensarray;

namespace
{
    const double PI = std::acos(-1.0);
}

TEST_CASE("port map")
{
    auto c = make_mula(Variant::MULA_4x4, 3);
    CHECK(c.port_count() == 16);
    auto p1 = port_position(c, 1);
    CHECK(p1.first == doctest::Approx(-0.015));
    CHECK(p1.second == doctest::Approx(-0.015));
    auto p6 = port_position(c, 6), p11 = port_position(c, 11), p16 = port_position(c, 16);
    CHECK(p6.first == doctest::Approx(-0.005));
    CHECK(p11.second == doctest::Approx(0.005));
    CHECK(p16.first == doctest::Approx(0.015));
    // {1, 6, 11, 16} on the diagonal x = y
    for (int p : {1, 6, 11, 16})
        CHECK(port_position(c, p).first == doctest::Approx(port_position(c, p).second));

    std::set<std::pair<long, long>> seen;
    double sx = 0.0, sy = 0.0;
    for (int p = 1; p <= 16; ++p)
    {
        auto [x, y] = port_position(c, p);
        CHECK((std::abs(x) == doctest::Approx(0.005) || std::abs(x) == doctest::Approx(0.015)));
        seen.insert({std::lround(x * 1e4), std::lround(y * 1e4)});
        sx += x;
        sy += y;
    }
    CHECK(seen.size() == 16);
    CHECK(std::abs(sx) < 1e-12);
    CHECK(std::abs(sy) < 1e-12);
    CHECK_THROWS_AS(port_position(c, 0), domain_error);
    CHECK_THROWS_AS(port_position(c, 17), domain_error);

    auto row = make_mula(Variant::MULA_1x4, 3);
    CHECK(row.port_count() == 4);
    CHECK(port_position(row, 2).first == doctest::Approx(-0.005));
    CHECK(port_position(row, 2).second == 0.0);
    CHECK_THROWS_AS(port_position(row, 5), domain_error);

    c.numbering = PortNumbering::column_major;
    CHECK(port_position(c, 2).first == doctest::Approx(-0.015));
    CHECK(port_position(c, 2).second == doctest::Approx(-0.005));
}

TEST_CASE("patch element")
{
    PatchElement e;
    e.q = 2.0;
    CHECK(element_pattern(e, 0.0, 0.0) == doctest::Approx(6.0));
    CHECK(e.peak_gain_dbi() == doctest::Approx(7.78).epsilon(1e-3));
    CHECK(element_pattern(e, 90.0, 0.0) < 1e-30);
    CHECK(element_pattern(e, 120.0, 0.0) == 0.0);
    for (double t = 1.0; t < 90.0; t += 1.0)
        CHECK(element_pattern(e, t, 0.0) < element_pattern(e, t - 1.0, 0.0));

    // (1/4pi) integral of G over the sphere is 1; closed form of the cos^q integral is 2pi/(q+1)
    for (double q : {2.0, PatchElement{}.q, 5.0})
    {
        e.q = q;
        AngularGrid g(0.5);
        double s = 0.0;
        for (std::size_t i = 0; i < g.n_theta(); ++i)
            for (std::size_t j = 0; j < g.n_phi(); ++j)
                s += element_pattern(e, g.theta_deg()[i], g.phi_deg()[j]) * g.weight(i);
        CHECK(s / (4.0 * PI) == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(db_from_linear(4.0 * PI / (2.0 * PI / (q + 1.0))) == doctest::Approx(e.peak_gain_dbi()).epsilon(1e-12));
    }
}

TEST_CASE("calibrated patch gain")
{
    CHECK(PatchElement{}.peak_gain_dbi() == doctest::Approx(4.5).epsilon(1e-9));
}

TEST_CASE("SULA concatenation factor")
{
    const double k = make_constants().wavenumber, lambda = make_constants().wavelength;
    auto one = sula_concatenation_factor(SulaLayout::line, 1, 0.05, k);
    CHECK(one(0.3, -0.2) == doctest::Approx(1.0));
    auto line = sula_concatenation_factor(SulaLayout::line, 4, 0.05, k);
    auto sq = sula_concatenation_factor(SulaLayout::square, 4, 0.05, k);
    CHECK(line(0.0, 0.0) == doctest::Approx(16.0));
    CHECK(sq(0.0, 0.0) == doctest::Approx(16.0));
    // Independent sum over elements
    const double v = 0.07;
    std::complex<double> s = 0.0;
    for (int m = 0; m < 4; ++m)
        s += std::polar(1.0, k * 0.05 * v * m);
    CHECK(line(0.0, v) == doctest::Approx(std::norm(s)).epsilon(1e-9));

    auto gl = grating_lobe_deg(0.05, lambda);
    REQUIRE(gl.has_value());
    CHECK(*gl == doctest::Approx(std::asin(lambda / 0.05) * 180.0 / PI));
    CHECK(*gl == doctest::Approx(12.4).epsilon(5e-3));
    // Grating lobe is a full-height replica
    CHECK(sq(std::sin(*gl * PI / 180.0), 0.0) == doctest::Approx(16.0).epsilon(1e-6));
    CHECK_FALSE(grating_lobe_deg(0.005, lambda).has_value());

    CHECK_THROWS_AS(sula_concatenation_factor(SulaLayout::line, 3, 0.05, k), domain_error);
    CHECK_THROWS_AS(sula_concatenation_factor(SulaLayout::square, 2, 0.05, k), domain_error);
}

TEST_CASE("SULA subarray feed carries unit power")
{
    const double k = make_constants().wavenumber;
    auto f = sula_subarray_pattern(PatchElement{}, 0.010, k);
    AngularGrid g(0.5);
    double s = 0.0;
    for (std::size_t i = 0; i < g.n_theta(); ++i)
        for (std::size_t j = 0; j < g.n_phi(); ++j)
        {
            auto d = g.direction(i, j);
            s += f(d.u(), d.v(), d.w()) * g.weight(i);
        }
    CHECK(s / (4.0 * PI) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(f(0.0, 0.0, -1.0) == 0.0);
}

TEST_CASE("array config validation")
{
    CHECK_THROWS_AS(make_sula(Variant::SULA_1x1, 4), domain_error);
    CHECK_THROWS_AS(make_sula(Variant::SULA_NxN, 2), domain_error);
    CHECK_THROWS_AS(make_sula(Variant::MULA_4x4, 1), domain_error);
    CHECK_THROWS_AS(make_mula(Variant::SULA_1x1, 1), domain_error);
    auto c = make_mula(Variant::MULA_4x4, 2);
    c.lens.reset();
    CHECK_THROWS_AS(c.validate(), domain_error);
    CHECK(variant_from_string("NO_LENS_4x4") == Variant::NO_LENS_4x4);
    CHECK_THROWS_AS(variant_from_string("MULA_8x8"), domain_error);
    CHECK(without_lens(Variant::SULA_NxN) == Variant::NO_LENS_SULA_NxN);
    CHECK(make_sula(Variant::SULA_NxN, 4).port_count() == 1);
}
