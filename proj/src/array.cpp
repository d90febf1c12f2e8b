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

#include "lensarray/array.hpp"

#include <cmath>

namespace lensarray
{
    double element_pattern_cos(const PatchElement &patch, double cos_theta)
    {
        if (!(cos_theta > 0.0))
            return 0.0;
        return patch.peak_gain() * std::pow(cos_theta, patch.q);
    }

    double element_pattern(const PatchElement &patch, double theta_deg, double phi_deg)
    {
        (void)phi_deg; // rotationally symmetric
        return element_pattern_cos(patch, std::cos(deg2rad(theta_deg)));
    }

    std::string to_string(Variant v)
    {
        switch (v)
        {
        case Variant::SULA_1x1: return "SULA_1x1";
        case Variant::SULA_1xN: return "SULA_1xN";
        case Variant::SULA_NxN: return "SULA_NxN";
        case Variant::MULA_1x4: return "MULA_1x4";
        case Variant::MULA_4x4: return "MULA_4x4";
        case Variant::NO_LENS_SULA_1x1: return "NO_LENS_SULA_1x1";
        case Variant::NO_LENS_SULA_1xN: return "NO_LENS_SULA_1xN";
        case Variant::NO_LENS_SULA_NxN: return "NO_LENS_SULA_NxN";
        case Variant::NO_LENS_1x4: return "NO_LENS_1x4";
        case Variant::NO_LENS_4x4: return "NO_LENS_4x4";
        }
        return "?";
    }

    Variant variant_from_string(const std::string &s)
    {
        for (auto v : {Variant::SULA_1x1, Variant::SULA_1xN, Variant::SULA_NxN, Variant::MULA_1x4, Variant::MULA_4x4,
                       Variant::NO_LENS_SULA_1x1, Variant::NO_LENS_SULA_1xN, Variant::NO_LENS_SULA_NxN,
                       Variant::NO_LENS_1x4, Variant::NO_LENS_4x4})
            if (to_string(v) == s)
                return v;
        throw domain_error("unknown array variant '" + s + "'");
    }

    bool has_lens(Variant v)
    {
        return v == Variant::SULA_1x1 || v == Variant::SULA_1xN || v == Variant::SULA_NxN ||
               v == Variant::MULA_1x4 || v == Variant::MULA_4x4;
    }

    bool is_sula(Variant v)
    {
        return v == Variant::SULA_1x1 || v == Variant::SULA_1xN || v == Variant::SULA_NxN ||
               v == Variant::NO_LENS_SULA_1x1 || v == Variant::NO_LENS_SULA_1xN || v == Variant::NO_LENS_SULA_NxN;
    }

    Variant without_lens(Variant v)
    {
        switch (v)
        {
        case Variant::SULA_1x1: return Variant::NO_LENS_SULA_1x1;
        case Variant::SULA_1xN: return Variant::NO_LENS_SULA_1xN;
        case Variant::SULA_NxN: return Variant::NO_LENS_SULA_NxN;
        case Variant::MULA_1x4: return Variant::NO_LENS_1x4;
        case Variant::MULA_4x4: return Variant::NO_LENS_4x4;
        default: return v;
        }
    }

    int ArrayConfig::port_count() const
    {
        switch (variant)
        {
        case Variant::MULA_4x4:
        case Variant::NO_LENS_4x4: return 16;
        case Variant::MULA_1x4:
        case Variant::NO_LENS_1x4: return 4;
        default: return 1; // a SULA is fed as one port
        }
    }

    void ArrayConfig::validate() const
    {
        if (!(patch.q > 0.0))
            throw domain_error("ArrayConfig: element exponent q must be positive");
        if (!(pitch > 0.0) || !(unit_pitch > 0.0))
            throw domain_error("ArrayConfig: pitch must be positive");
        if (!(frequency > 0.0))
            throw domain_error("ArrayConfig: frequency must be positive");
        if (has_lens(variant) && !lens)
            throw domain_error("ArrayConfig: variant " + to_string(variant) + " needs a lens");
        if (!has_lens(variant) && lens)
            throw domain_error("ArrayConfig: variant " + to_string(variant) + " has no lens");
        if (lens)
            lens->validate();
        if (is_sula(variant))
        {
            if (sula_units != 1 && sula_units != 2 && sula_units != 4)
                throw domain_error("ArrayConfig: SULA unit count must be 1, 2 or 4");
            bool one = variant == Variant::SULA_1x1 || variant == Variant::NO_LENS_SULA_1x1;
            bool square = variant == Variant::SULA_NxN || variant == Variant::NO_LENS_SULA_NxN;
            if (one && sula_units != 1)
                throw domain_error("ArrayConfig: 1x1 SULA has exactly one unit");
            if (square && sula_units == 2)
                throw domain_error("ArrayConfig: square SULA layout needs 1 or 4 units");
        }
        if (!(model.mula_effective_radius > 0.0) || !(model.sula_effective_radius > 0.0))
            throw domain_error("ArrayConfig: effective radius must be positive");
        if (!(model.mula_efficiency > 0.0) || model.mula_efficiency > 1.0 || !(model.sula_wall_efficiency > 0.0) ||
            model.sula_wall_efficiency > 1.0)
            throw domain_error("ArrayConfig: efficiencies must lie in (0, 1]");
        if (!(model.aperture_pitch > 0.0) || model.aperture_pitch > 0.25)
            throw domain_error("ArrayConfig: aperture pitch must lie in (0, 0.25] wavelengths");
    }

    ArrayConfig make_mula(Variant v, int lens_index, const ModelParams &model)
    {
        if (v != Variant::MULA_1x4 && v != Variant::MULA_4x4 && v != Variant::NO_LENS_1x4 && v != Variant::NO_LENS_4x4)
            throw domain_error("make_mula: not a MULA variant");
        ArrayConfig c;
        c.variant = v;
        c.model = model;
        if (has_lens(v))
            c.lens = make_lens(lens_index);
        c.validate();
        return c;
    }

    ArrayConfig make_sula(Variant v, int units, const ModelParams &model)
    {
        if (!is_sula(v))
            throw domain_error("make_sula: not a SULA variant");
        ArrayConfig c;
        c.variant = v;
        c.model = model;
        c.sula_units = units;
        if (has_lens(v))
            c.lens = make_sula_lens();
        c.validate();
        return c;
    }

    std::pair<double, double> port_position(const ArrayConfig &config, int port)
    {
        const int n = config.port_count();
        if (port < 1 || port > n)
            throw domain_error("port_position: port " + std::to_string(port) + " not in 1.." + std::to_string(n));
        if (n == 1)
            return {0.0, 0.0};
        const double d = config.pitch;
        if (n == 4)
            return {(double(port - 1) - 1.5) * d, 0.0};
        int a = (port - 1) % 4, b = (port - 1) / 4;
        if (config.numbering == PortNumbering::column_major)
            std::swap(a, b);
        return {(double(a) - 1.5) * d, (double(b) - 1.5) * d};
    }

    FeedPattern sula_subarray_pattern(const PatchElement &patch, double pitch, double k)
    {
        auto shape = [q = patch.q, kd = k * pitch](double u, double v, double w)
        {
            if (!(w > 0.0))
                return 0.0;
            double cx = std::cos(kd * u / 2.0), cy = std::cos(kd * v / 2.0);
            return std::pow(w, q) * cx * cx * cy * cy;
        };

        // Unit radiated power by quadrature on a fine hemispheric grid
        AngularGrid g(0.25);
        double s = 0.0;
        for (std::size_t i = 0; i < g.n_theta(); ++i)
        {
            double row = 0.0;
            for (std::size_t j = 0; j < g.n_phi(); ++j)
            {
                auto d = g.direction(i, j);
                row += shape(d.u(), d.v(), d.w());
            }
            s += row * g.weight(i);
        }
        const double norm = 4.0 * pi / s;
        return [shape, norm](double u, double v, double w) { return norm * shape(u, v, w); };
    }

    std::function<double(double, double)> sula_concatenation_factor(SulaLayout layout, int n_units, double pitch,
                                                                    double k)
    {
        if (n_units != 1 && n_units != 2 && n_units != 4)
            throw domain_error("sula_concatenation_factor: unit count must be 1, 2 or 4");
        if (layout == SulaLayout::square && n_units == 2)
            throw domain_error("sula_concatenation_factor: square layout needs 1 or 4 units");
        int nx = 1, ny = n_units;
        if (layout == SulaLayout::square)
            nx = ny = (n_units == 4) ? 2 : 1;

        // |sum_m exp(j m psi)|^2 for a uniform line of n elements
        auto line = [](int n, double psi)
        {
            double s = std::sin(psi / 2.0);
            if (std::abs(s) < 1e-12)
                return double(n * n);
            double r = std::sin(double(n) * psi / 2.0) / s;
            return r * r;
        };
        return [=](double u, double v) { return line(nx, k * pitch * u) * line(ny, k * pitch * v); };
    }

    std::optional<double> grating_lobe_deg(double pitch, double wavelength)
    {
        if (!(pitch > 0.0) || !(wavelength > 0.0))
            throw domain_error("grating_lobe_deg: positive inputs required");
        if (pitch < wavelength)
            return std::nullopt;
        return rad2deg(std::asin(wavelength / pitch));
    }
}
