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

#ifndef LENSARRAY_LENS_HPP
#define LENSARRAY_LENS_HPP

#include "lensarray/em_core.hpp"

#include <functional>
#include <optional>
#include <string>

namespace lensarray
{
    constexpr double polyethylene_permittivity = 2.40;

    // Hyperbolic dielectric lens. Lengths in meters.
    struct LensSpec
    {
        double diameter = 0.0;
        double focal_length = 0.0;
        double permittivity = polyethylene_permittivity;
        std::optional<int> size_index; // 1..3 when built from the sizing rule

        double refractive_index() const;
        double radius() const { return diameter / 2.0; }
        void validate() const;
    };

    // D_i = base_side + 2 * margin_i, margin_i = mech_wavelength * (2i - 1), f = f_over_d * D_i
    struct LensSizingRule
    {
        double base_side = 0.055;
        double mech_wavelength = 0.010;
        double f_over_d = 1.2;

        double margin(int i) const;
        double diameter(int i) const;
    };

    // Lens i in {1, 2, 3} of the MULA family
    LensSpec make_lens(int i, double permittivity = polyethylene_permittivity, const LensSizingRule &rule = {});

    // Lens on top of one SULA cube (50 x 50 x 60 mm unit)
    LensSpec make_sula_lens(double permittivity = polyethylene_permittivity);

    // Ideal focal-point collimating phase k*(f - sqrt(f^2 + rho^2)). rho in [0, D/2].
    double collimating_phase(double rho, const LensSpec &lens, double k);

    // Canonical hyperbolic surface r(theta) = (n-1) f / (n cos(theta) - 1), distance from the focus
    double hyperbola_surface(double theta_rad, const LensSpec &lens);

    // Angle where the hyperbola runs off to infinity, arccos(1/n)
    double hyperbola_asymptote(const LensSpec &lens);

    // Feed power pattern in the feed frame. Arguments are direction cosines (u, v, w), w > 0 forward.
    using FeedPattern = std::function<double(double u, double v, double w)>;

    struct FeedPosition
    {
        double dx = 0.0, dy = 0.0; // lateral offset from the lens axis [m]
        double dz = 0.0;           // axial displacement from the focal plane [m], 0 = at focus
    };

    struct LensExit
    {
        ComplexField field;
        double intercepted = 0.0; // fraction of feed power reaching the aperture
        bool degraded = false;    // feed outside the focal region
        std::string warning;
    };

    // Thin phase-screen lens. The feed radiates unit power; the exit field is the spherical
    // wave from the feed sampled on the aperture, weighted by the feed pattern, multiplied
    // by exp(j * collimating_phase). Power missing the aperture is lost.
    // Default lattice pitch is lambda/5.
    LensExit transform_feed_field(const FeedPosition &feed, const LensSpec &lens, const FeedPattern &pattern,
                                  double k, double pitch = 0.0);

    // Restricts radiation to a centred disc of radius r_eff, conserving aperture power.
    // Models the effective radiating area of a real lens (illumination taper, internal
    // reflections). Trims the lattice to the disc bounding box.
    ComplexField effective_aperture(const ComplexField &field, double r_eff);
}

#endif
