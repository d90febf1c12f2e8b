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

#ifndef LENSARRAY_RADIATION_HPP
#define LENSARRAY_RADIATION_HPP

#include "lensarray/array.hpp"
#include "lensarray/em_core.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace lensarray
{
    // Raised when a -3 dB crossing does not exist on one side of the peak
    class unbounded_beamwidth : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    struct RadiationPattern
    {
        AngularGrid grid;
        std::vector<double> gain; // linear power gain over isotropic, index grid.index(i_theta, i_phi)
        double radiated_fraction = 1.0;
        std::string source; // free-text description of the generating config
        int port = 0;

        double gain_dbi(std::size_t i_theta, std::size_t i_phi) const;

        // Gain in dB along the cut at phi (must be a grid azimuth), theta ascending
        std::vector<double> cut_dbi(double phi_deg) const;

        // Bilinear interpolation in linear power. Directions behind the antenna give 0.
        double gain_toward(const Direction &d) const;

        // (1/4pi) sum G dOmega, hemisphere grids only
        double integrated_fraction() const;
    };

    // Directivity pattern of an aperture field. Radiated fraction is 1; callers scale for losses.
    // workers <= 0 selects the hardware thread count. Results do not depend on workers.
    RadiationPattern far_field(const ComplexField &aperture, double k, const AngularGrid &grid, int workers = 1);

    // Unnormalized |E|^2 on any grid (cuts included)
    std::vector<double> far_field_intensity(const ComplexField &aperture, double k, const AngularGrid &grid,
                                            int workers = 1);

    // Realized gain pattern of one activated port
    RadiationPattern pattern_for_port(const ArrayConfig &config, int port, const AngularGrid &grid, int workers = 1);

    // Aperture field radiated by a lens configuration for a port, after the effective-aperture step.
    // Also reports the power scale applied to the directivity (intercepted power times efficiency).
    struct ApertureState
    {
        ComplexField field;
        double power_scale = 1.0;
        bool degraded = false;
        std::string warning;
    };
    ApertureState lens_aperture_for_port(const ArrayConfig &config, int port);

    // Full -3 dB width in degrees along the cut at phi, linear interpolation in dB
    double hpbw(const RadiationPattern &pattern, double phi_deg);
    double hpbw_of_cut(const std::vector<double> &theta_deg, const std::vector<double> &values_db);

    double peak_gain_dbi(const RadiationPattern &pattern);
    Direction peak_direction(const RadiationPattern &pattern);

    constexpr double vertical_cut_phi = 90.0;
    constexpr double horizontal_cut_phi = 0.0;

    // CSV: theta_deg,phi_deg,gain_dbi sorted by theta then phi
    void write_pattern_csv(std::ostream &os, const RadiationPattern &pattern);

    int resolve_workers(int workers);
}

#endif
