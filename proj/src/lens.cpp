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

#include "lensarray/lens.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lensarray
{
    double LensSpec::refractive_index() const
    {
        return std::sqrt(permittivity);
    }

    void LensSpec::validate() const
    {
        if (!(diameter > 0.0) || !(focal_length > 0.0))
            throw domain_error("LensSpec: diameter and focal length must be positive");
        if (!(permittivity > 1.0))
            throw domain_error("LensSpec: permittivity must exceed 1");
    }

    double LensSizingRule::margin(int i) const
    {
        return mech_wavelength * double(2 * i - 1);
    }

    double LensSizingRule::diameter(int i) const
    {
        return base_side + 2.0 * margin(i);
    }

    LensSpec make_lens(int i, double permittivity, const LensSizingRule &rule)
    {
        if (i < 1 || i > 3)
            throw domain_error("make_lens: size index must be 1, 2 or 3, got " + std::to_string(i));
        LensSpec l;
        l.diameter = rule.diameter(i);
        l.focal_length = rule.f_over_d * l.diameter;
        l.permittivity = permittivity;
        l.size_index = i;
        l.validate();
        return l;
    }

    LensSpec make_sula_lens(double permittivity)
    {
        LensSpec l;
        l.diameter = 0.050;
        l.focal_length = 0.060;
        l.permittivity = permittivity;
        l.validate();
        return l;
    }

    double collimating_phase(double rho, const LensSpec &lens, double k)
    {
        if (rho < 0.0 || rho > lens.radius() * (1.0 + 1e-12))
            throw domain_error("collimating_phase: radial coordinate outside the lens aperture");
        const double f = lens.focal_length;
        // f - sqrt(f^2 + rho^2) without cancellation
        return -k * rho * rho / (f + std::sqrt(f * f + rho * rho));
    }

    double hyperbola_asymptote(const LensSpec &lens)
    {
        return std::acos(1.0 / lens.refractive_index());
    }

    double hyperbola_surface(double theta_rad, const LensSpec &lens)
    {
        const double n = lens.refractive_index();
        const double den = n * std::cos(theta_rad) - 1.0;
        if (!(den > 0.0))
            throw domain_error("hyperbola_surface: angle beyond the hyperbola asymptote");
        return (n - 1.0) * lens.focal_length / den;
    }

    LensExit transform_feed_field(const FeedPosition &feed, const LensSpec &lens, const FeedPattern &pattern,
                                  double k, double pitch)
    {
        lens.validate();
        if (!(k > 0.0))
            throw domain_error("transform_feed_field: wavenumber must be positive");
        const double lambda = 2.0 * pi / k;
        if (pitch <= 0.0)
            pitch = lambda / 5.0;

        LensExit out;
        const double R = lens.radius();
        const double offset = std::hypot(feed.dx, feed.dy);
        if (offset > R)
        {
            out.degraded = true;
            out.warning = "feed lateral offset exceeds the lens radius";
        }
        if (std::abs(feed.dz) > 1e-9)
        {
            out.degraded = true;
            out.warning += std::string(out.warning.empty() ? "" : "; ") + "feed is not on the focal plane";
        }

        const auto n = (std::size_t)std::ceil(R / pitch);
        const std::size_t N = 2 * n + 1;
        const double x0 = -double(n) * pitch;
        out.field = ComplexField(N, N, pitch, x0, x0);

        // Feed sits at (dx, dy, -h) below the aperture plane, h = f - dz
        const double h = lens.focal_length - feed.dz;
        if (!(h > 0.0))
            throw domain_error("transform_feed_field: feed must lie below the aperture plane");

        double p = 0.0;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
            {
                const double x = out.field.x(i), y = out.field.y(j);
                const double rho = std::hypot(x, y);
                if (rho > R)
                    continue;
                const double rx = x - feed.dx, ry = y - feed.dy;
                const double r = std::sqrt(rx * rx + ry * ry + h * h);
                const double ct = h / r;
                const double g = std::max(pattern(rx / r, ry / r, ct), 0.0);
                // Power density of a unit-power feed projected on the aperture plane
                const double amp = std::sqrt(g * ct / (4.0 * pi * r * r));
                const double ph = k * r + collimating_phase(rho, lens, k);
                auto e = std::polar(amp, ph);
                out.field.at(i, j) = e;
                p += std::norm(e);
            }
        out.intercepted = p * pitch * pitch;
        return out;
    }

    ComplexField effective_aperture(const ComplexField &field, double r_eff)
    {
        if (!(r_eff > 0.0))
            throw domain_error("effective_aperture: radius must be positive");
        const double p_in = field.power();

        // Index range of samples with |x| <= r_eff, same for y
        auto range = [&](double o, std::size_t n, std::size_t &lo, std::size_t &hi)
        {
            lo = n;
            hi = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (std::abs(o + double(i) * field.pitch) <= r_eff)
                {
                    lo = std::min(lo, i);
                    hi = std::max(hi, i);
                }
        };
        std::size_t ilo, ihi, jlo, jhi;
        range(field.x0, field.nx, ilo, ihi);
        range(field.y0, field.ny, jlo, jhi);
        if (ilo > ihi || jlo > jhi)
            throw domain_error("effective_aperture: radius smaller than the lattice pitch");

        ComplexField out(ihi - ilo + 1, jhi - jlo + 1, field.pitch, field.x(ilo), field.y(jlo));
        for (std::size_t i = 0; i < out.nx; ++i)
            for (std::size_t j = 0; j < out.ny; ++j)
                if (std::hypot(out.x(i), out.y(j)) <= r_eff)
                    out.at(i, j) = field.at(i + ilo, j + jlo);

        const double p_out = out.power();
        if (!(p_out > 0.0))
            throw domain_error("effective_aperture: no illuminated samples inside the radius");
        const double s = std::sqrt(p_in / p_out);
        for (auto &e : out.data)
            e *= s;
        return out;
    }
}
