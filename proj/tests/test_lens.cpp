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

#include "lensarray/lens.hpp"

#include <cmath>
#include <random>

using namespace lensarray;

namespace
{
    const double PI = std::acos(-1.0);
    const double K28 = 2.0 * PI * 28e9 / 299792458.0;

    double wrap(double a)
    {
        return std::remainder(a, 2.0 * PI);
    }
}

TEST_CASE("lens sizing rule")
{
    const double want[] = {0.075, 0.115, 0.155};
    for (int i = 1; i <= 3; ++i)
    {
        auto l = make_lens(i);
        CHECK(l.diameter == doctest::Approx(want[i - 1]).epsilon(1e-12));
        CHECK(l.focal_length / l.diameter == doctest::Approx(1.2).epsilon(1e-9));
        CHECK(l.size_index.value() == i);
        CHECK(l.permittivity == 2.40);
        CHECK(l.refractive_index() == doctest::Approx(1.549).epsilon(1e-3));
    }
    CHECK(make_lens(3).focal_length == doctest::Approx(0.186).epsilon(1e-12));
    // D_2 = 55 + 2 * (10 * 3) mm
    CHECK(LensSizingRule{}.margin(2) == doctest::Approx(0.030));
    CHECK_THROWS_AS(make_lens(0), domain_error);
    CHECK_THROWS_AS(make_lens(4), domain_error);

    auto s = make_sula_lens();
    CHECK(s.diameter == doctest::Approx(0.050));
    CHECK(s.focal_length == doctest::Approx(0.060));
}

TEST_CASE("collimating phase")
{
    auto l = make_lens(3);
    CHECK(collimating_phase(0.0, l, K28) == 0.0);
    const double f = 0.186, rho = 0.0775;
    const double oracle = K28 * (f - std::sqrt(f * f + rho * rho));
    CHECK(collimating_phase(rho, l, K28) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(collimating_phase(rho, l, K28) == doctest::Approx(-9.09).epsilon(2e-3));

    double prev = 0.0;
    for (int i = 1; i <= 1000; ++i)
    {
        double p = collimating_phase(rho * i / 1000.0, l, K28);
        CHECK(p < prev);
        prev = p;
    }

    // Spherical wave from the focus plus the screen phase is flat across the aperture
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> u(0.0, rho);
    for (int i = 0; i < 100; ++i)
    {
        double r = u(g);
        double total = K28 * std::sqrt(f * f + r * r) + collimating_phase(r, l, K28);
        CHECK(std::abs(total - K28 * f) < 1e-9);
    }
    CHECK_THROWS_AS(collimating_phase(0.08, l, K28), domain_error);
    CHECK_THROWS_AS(collimating_phase(-0.001, l, K28), domain_error);
}

TEST_CASE("hyperbolic surface")
{
    auto l = make_lens(3);
    const double n = std::sqrt(2.40);
    CHECK(hyperbola_surface(0.0, l) == doctest::Approx(l.focal_length).epsilon(1e-12));
    const double t10 = 10.0 * PI / 180.0;
    CHECK(hyperbola_surface(t10, l) == doctest::Approx((n - 1.0) * 0.186 / (n * std::cos(t10) - 1.0)).epsilon(1e-12));
    CHECK(hyperbola_surface(t10, l) * 1e3 == doctest::Approx(194.33).epsilon(5e-4));
    CHECK(hyperbola_asymptote(l) * 180.0 / PI == doctest::Approx(49.8).epsilon(1e-3));
    CHECK(hyperbola_surface(hyperbola_asymptote(l) - 1e-6, l) > 100.0);
    CHECK_THROWS_AS(hyperbola_surface(hyperbola_asymptote(l) + 1e-3, l), domain_error);

    // Every ray from the focus has the same optical path to a plane inside the dielectric
    const double z_ref = 0.3;
    const double ref = K28 * (l.focal_length + n * (z_ref - l.focal_length));
    for (double deg = 1.0; deg <= 40.0; deg += 1.0)
    {
        double t = deg * PI / 180.0;
        double r = hyperbola_surface(t, l);
        double opl = K28 * (r + n * (z_ref - r * std::cos(t)));
        CHECK(std::abs(opl - ref) < 1e-6);
    }
}

TEST_CASE("feed field through the lens")
{
    auto l = make_lens(3);
    const double q = 0.409191465632;
    FeedPattern cosq = [q](double, double, double w) { return w > 0.0 ? 2.0 * (q + 1.0) * std::pow(w, q) : 0.0; };

    SUBCASE("centred feed is collimated")
    {
        auto ex = transform_feed_field({}, l, cosq, K28);
        CHECK_FALSE(ex.degraded);
        const double ref = std::arg(ex.field.at(ex.field.nx / 2, ex.field.ny / 2));
        for (std::size_t i = 0; i < ex.field.nx; ++i)
            for (std::size_t j = 0; j < ex.field.ny; ++j)
                if (std::abs(ex.field.at(i, j)) > 0.0)
                    CHECK(std::abs(wrap(std::arg(ex.field.at(i, j)) - ref)) < 1e-9);
    }

    SUBCASE("intercepted power matches the cap integral")
    {
        // Fraction of a cos^q feed inside half-angle a: 1 - cos(a)^(q+1)
        auto ex = transform_feed_field({}, l, cosq, K28, make_constants().wavelength / 10.0);
        const double a = std::atan(0.0775 / 0.186);
        CHECK(ex.intercepted == doctest::Approx(1.0 - std::pow(std::cos(a), q + 1.0)).epsilon(3e-3));
    }

    SUBCASE("offset feed tilts the exit phase")
    {
        const double d = 0.005;
        auto ex = transform_feed_field({d, 0.0, 0.0}, l, cosq, K28);
        auto &F = ex.field;
        const std::size_t c = F.nx / 2;
        const double ref = std::arg(F.at(c, c));
        for (std::size_t i = c - 10; i <= c + 10; ++i)
        {
            double x = F.x(i), y = F.y(c);
            double oracle = -K28 * d * x / std::sqrt(0.186 * 0.186 + x * x + y * y);
            CHECK(std::abs(wrap(std::arg(F.at(i, c)) - ref - oracle)) < 0.05);
        }
    }

    SUBCASE("passive for random offsets")
    {
        std::mt19937_64 g(5);
        std::uniform_real_distribution<double> u(-0.03, 0.03);
        for (int i = 0; i < 20; ++i)
        {
            auto ex = transform_feed_field({u(g), u(g), 0.0}, l, cosq, K28);
            CHECK(ex.intercepted > 0.0);
            CHECK(ex.intercepted <= 1.0);
            CHECK(ex.field.power() == doctest::Approx(ex.intercepted));
        }
    }

    SUBCASE("feed outside the focal region carries a warning")
    {
        auto ex = transform_feed_field({0.09, 0.0, 0.0}, l, cosq, K28);
        CHECK(ex.degraded);
        CHECK_FALSE(ex.warning.empty());
        auto off = transform_feed_field({0.0, 0.0, 0.01}, l, cosq, K28);
        CHECK(off.degraded);
    }

    SUBCASE("effective aperture keeps power inside the disc")
    {
        auto ex = transform_feed_field({0.005, 0.005, 0.0}, l, cosq, K28);
        auto e = effective_aperture(ex.field, 0.024);
        CHECK(e.power() == doctest::Approx(ex.field.power()).epsilon(1e-12));
        CHECK(e.nx < ex.field.nx);
        for (std::size_t i = 0; i < e.nx; ++i)
            for (std::size_t j = 0; j < e.ny; ++j)
                if (std::hypot(e.x(i), e.y(j)) > 0.024)
                    CHECK(std::abs(e.at(i, j)) == 0.0);
        CHECK_THROWS_AS(effective_aperture(ex.field, 0.0), domain_error);
    }
}
