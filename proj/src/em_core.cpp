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

#include "lensarray/em_core.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>

namespace lensarray
{
    double db_from_linear(double x)
    {
        if (!(x > 0.0))
            throw domain_error("db_from_linear: input must be positive, got " + std::to_string(x));
        return 10.0 * std::log10(x);
    }

    double linear_from_db(double db)
    {
        return std::pow(10.0, db / 10.0);
    }

    std::uint64_t fnv1a64(const std::string &s)
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : s)
        {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    std::string digest_hex(const std::string &s)
    {
        std::ostringstream os;
        os << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(s);
        return os.str();
    }

    RadioConstants make_constants(double frequency)
    {
        if (!(frequency > 0.0) || !std::isfinite(frequency))
            throw domain_error("make_constants: frequency must be positive");
        RadioConstants rc;
        rc.frequency = frequency;
        rc.wavelength = speed_of_light / frequency;
        rc.wavenumber = 2.0 * pi / rc.wavelength;
        return rc;
    }

    double Direction::u() const { return std::sin(deg2rad(theta_deg)) * std::cos(deg2rad(phi_deg)); }
    double Direction::v() const { return std::sin(deg2rad(theta_deg)) * std::sin(deg2rad(phi_deg)); }
    double Direction::w() const { return std::cos(deg2rad(theta_deg)); }

    double Direction::vertical_angle_deg() const { return rad2deg(std::atan2(v(), w())); }
    double Direction::horizontal_angle_deg() const { return rad2deg(std::atan2(u(), w())); }

    // Integral of |sin t| from 0 to a, for a in [-pi/2, pi/2]
    static double abs_sin_primitive(double a)
    {
        return a < 0.0 ? std::cos(a) - 1.0 : 1.0 - std::cos(a);
    }

    static std::vector<double> theta_samples(double res)
    {
        if (!(res > 0.0) || !std::isfinite(res))
            throw domain_error("AngularGrid: resolution must be positive");
        double n = 180.0 / res;
        if (std::abs(n - std::round(n)) > 1e-9 || n < 2.0)
            throw domain_error("AngularGrid: 180 deg must be an integer multiple of the resolution");
        std::size_t N = (std::size_t)std::llround(n);
        std::vector<double> th(N + 1);
        for (std::size_t i = 0; i <= N; ++i)
            th[i] = -90.0 + double(i) * res;
        return th;
    }

    AngularGrid::AngularGrid(double resolution_deg) : resolution_(resolution_deg)
    {
        theta_ = theta_samples(resolution_deg);
        std::size_t N = theta_.size() - 1;
        phi_.resize(N);
        for (std::size_t i = 0; i < N; ++i)
            phi_[i] = double(i) * resolution_deg;

        const double h = deg2rad(resolution_deg) / 2.0;
        const double dphi = deg2rad(resolution_deg);
        theta_weight_.resize(theta_.size());
        for (std::size_t i = 0; i < theta_.size(); ++i)
        {
            double t = deg2rad(theta_[i]);
            double lo = std::clamp(t - h, -pi / 2.0, pi / 2.0);
            double hi = std::clamp(t + h, -pi / 2.0, pi / 2.0);
            theta_weight_[i] = (abs_sin_primitive(hi) - abs_sin_primitive(lo)) * dphi;
        }
    }

    AngularGrid AngularGrid::cut(double phi_deg, double resolution_deg)
    {
        AngularGrid g(resolution_deg);
        g.phi_ = {phi_deg};
        g.hemisphere_ = false;
        return g;
    }

    double AngularGrid::weight(std::size_t i_theta) const
    {
        if (!hemisphere_)
            throw domain_error("AngularGrid: quadrature weights need a full hemisphere grid");
        return theta_weight_.at(i_theta);
    }

    std::size_t AngularGrid::phi_index(double phi_deg) const
    {
        for (std::size_t i = 0; i < phi_.size(); ++i)
            if (std::abs(phi_[i] - phi_deg) < 1e-9)
                return i;
        return npos;
    }

    ComplexField::ComplexField(std::size_t nx_, std::size_t ny_, double pitch_, double x0_, double y0_)
        : nx(nx_), ny(ny_), pitch(pitch_), x0(x0_), y0(y0_), data(nx_ * ny_, {0.0, 0.0})
    {
    }

    double ComplexField::power() const
    {
        double s = 0.0;
        for (const auto &e : data)
            s += std::norm(e);
        return s * pitch * pitch;
    }

    void ComplexField::validate(double wavelength) const
    {
        if (!(pitch > 0.0))
            throw domain_error("ComplexField: pitch must be positive");
        if (pitch > wavelength / 4.0 * (1.0 + 1e-12))
            throw domain_error("ComplexField: lattice pitch exceeds lambda/4, aperture would alias");
        if (data.size() != nx * ny)
            throw domain_error("ComplexField: sample count does not match lattice");
        for (const auto &e : data)
            if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
                throw domain_error("ComplexField: non-finite sample");
    }
}
