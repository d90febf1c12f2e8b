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

#ifndef LENSARRAY_EM_CORE_HPP
#define LENSARRAY_EM_CORE_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace lensarray
{
    constexpr double speed_of_light = 299792458.0;  // [m/s]
    constexpr double pi = std::numbers::pi;
    constexpr double default_frequency = 28.0e9;    // [Hz]

    inline constexpr double deg2rad(double deg) { return deg * pi / 180.0; }
    inline constexpr double rad2deg(double rad) { return rad * 180.0 / pi; }

    // Thrown for inputs outside an operation's mathematical domain
    class domain_error : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    // 10*log10(x), x > 0
    double db_from_linear(double x);
    double linear_from_db(double db);

    // FNV-1a 64-bit digest, used for config and scenario hashes
    std::uint64_t fnv1a64(const std::string &s);
    std::string digest_hex(const std::string &s); // 16 hex digits

    // Frequency-derived constants. All values SI.
    struct RadioConstants
    {
        double frequency = default_frequency; // [Hz]
        double wavelength = 0.0;              // [m]
        double wavenumber = 0.0;              // [rad/m]
    };

    RadioConstants make_constants(double frequency = default_frequency);

    // A direction in the antenna frame. Boresight is +z, theta is the polar
    // angle from boresight (signed, see AngularGrid), phi is the azimuth in the x-y plane.
    struct Direction
    {
        double theta_deg = 0.0;
        double phi_deg = 0.0;

        // Unit vector components
        double u() const; // sin(theta) cos(phi)
        double v() const; // sin(theta) sin(phi)
        double w() const; // cos(theta)

        // Angle of the direction projected into the y-z plane (the "vertical plane")
        // and into the x-z plane, both signed from boresight, in degrees.
        double vertical_angle_deg() const;
        double horizontal_angle_deg() const;
    };

    // Sampling of the forward hemisphere.
    //
    // theta runs over [-90, 90] degrees (signed polar angle), phi over [0, 180).
    // A sample (-theta, phi) is the direction (theta, phi + 180), so each forward
    // direction is visited exactly once. The phi = 90 row is the vertical-plane cut.
    // Antenna patterns in this library carry no backlobe, so hemispheric quadrature
    // is the full-sphere integral.
    class AngularGrid
    {
    public:
        // Uniform grid with the given step in degrees. 180 must be a multiple of the step.
        explicit AngularGrid(double resolution_deg = 1.0);

        // Single-plane cut at fixed phi, theta sampled over [-90, 90]
        static AngularGrid cut(double phi_deg, double resolution_deg = 1.0);

        const std::vector<double> &theta_deg() const { return theta_; }
        const std::vector<double> &phi_deg() const { return phi_; }
        double resolution_deg() const { return resolution_; }
        std::size_t n_theta() const { return theta_.size(); }
        std::size_t n_phi() const { return phi_.size(); }
        std::size_t size() const { return theta_.size() * phi_.size(); }
        std::size_t index(std::size_t i_theta, std::size_t i_phi) const { return i_theta * phi_.size() + i_phi; }
        Direction direction(std::size_t i_theta, std::size_t i_phi) const { return {theta_[i_theta], phi_[i_phi]}; }

        // True when the grid spans all azimuths (usable for solid-angle integration)
        bool is_hemisphere() const { return hemisphere_; }

        // Solid-angle quadrature weight [sr] of a sample. Exact cell integral of
        // |sin(theta)| in theta times the phi step. Weights sum to 2*pi.
        double weight(std::size_t i_theta) const;

        // Index of phi in the grid, or npos
        std::size_t phi_index(double phi_deg) const;
        static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    private:
        std::vector<double> theta_;
        std::vector<double> phi_;
        std::vector<double> theta_weight_;
        double resolution_ = 1.0;
        bool hemisphere_ = true;
    };

    // Complex aperture field sampled on a square lattice centred on the origin.
    // Sample (i, j) sits at x = x0 + i * pitch, y = y0 + j * pitch.
    struct ComplexField
    {
        std::size_t nx = 0, ny = 0;
        double pitch = 0.0;                     // [m]
        double x0 = 0.0, y0 = 0.0;              // coordinates of sample (0, 0) [m]
        std::vector<std::complex<double>> data; // row-major, index i * ny + j

        ComplexField() = default;
        ComplexField(std::size_t nx_, std::size_t ny_, double pitch_, double x0_, double y0_);

        std::complex<double> &at(std::size_t i, std::size_t j) { return data[i * ny + j]; }
        const std::complex<double> &at(std::size_t i, std::size_t j) const { return data[i * ny + j]; }
        double x(std::size_t i) const { return x0 + double(i) * pitch; }
        double y(std::size_t j) const { return y0 + double(j) * pitch; }

        // Sum of |E|^2 dA, the power carried through the aperture
        double power() const;

        // Throws domain_error on non-finite samples or pitch > lambda/4
        void validate(double wavelength) const;
    };
}

#endif
