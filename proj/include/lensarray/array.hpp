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

#ifndef LENSARRAY_ARRAY_HPP
#define LENSARRAY_ARRAY_HPP

#include "lensarray/em_core.hpp"
#include "lensarray/lens.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>

namespace lensarray
{
    // Microstrip patch radiator with a cos^q power pattern over the forward hemisphere
    struct PatchElement
    {
        double side = 3.05e-3; // [m]
        double q = 0.409191465632; // pattern exponent, calibrated to a 4.5 dBi bare patch

        double peak_gain() const { return 2.0 * (q + 1.0); } // linear
        double peak_gain_dbi() const { return db_from_linear(peak_gain()); }
    };

    // Linear power gain of the patch toward (theta, phi). Zero behind the ground plane.
    double element_pattern(const PatchElement &patch, double theta_deg, double phi_deg);
    double element_pattern_cos(const PatchElement &patch, double cos_theta);

    enum class Variant
    {
        SULA_1x1,
        SULA_1xN,
        SULA_NxN,
        MULA_1x4,
        MULA_4x4,
        NO_LENS_SULA_1x1,
        NO_LENS_SULA_1xN,
        NO_LENS_SULA_NxN,
        NO_LENS_1x4,
        NO_LENS_4x4
    };

    std::string to_string(Variant v);
    Variant variant_from_string(const std::string &s); // throws domain_error
    bool has_lens(Variant v);
    bool is_sula(Variant v);
    Variant without_lens(Variant v);

    enum class PortNumbering
    {
        row_major,   // port 1 at (-x, -y) corner, x runs fastest
        column_major // port 1 at (-x, -y) corner, y runs fastest
    };

    // Calibration knobs of the surrogate lens model. Defaults are the calibrated values.
    struct ModelParams
    {
        double mula_effective_radius = 0.024227191925; // [m] radiating disc of the MULA lenses
        double mula_efficiency = 0.819320891540;       // aperture efficiency shared by the MULA lenses
        double sula_effective_radius = 0.016308532715; // [m] radiating disc of one SULA lens
        double sula_wall_efficiency = 0.878658235228;  // polyethylene wall, replaces spillover in a SULA cube
        double aperture_pitch = 0.2;           // aperture sampling pitch in wavelengths
    };

    struct ArrayConfig
    {
        Variant variant = Variant::MULA_4x4;
        PatchElement patch;
        double pitch = 0.010;       // patch lattice [m]
        double unit_pitch = 0.050;  // SULA unit concatenation [m]
        int sula_units = 1;         // number of concatenated SULA cubes, 1, 2 or 4
        PortNumbering numbering = PortNumbering::row_major;
        std::optional<LensSpec> lens;
        ModelParams model;
        double frequency = default_frequency;

        int port_count() const;
        void validate() const; // throws domain_error
    };

    // Factories for the configurations of the study
    ArrayConfig make_mula(Variant v, int lens_index, const ModelParams &model = {});
    ArrayConfig make_sula(Variant v, int units, const ModelParams &model = {});

    // Lateral position of a feed port, ports numbered from 1
    std::pair<double, double> port_position(const ArrayConfig &config, int port);

    // 2x2 patch subarray feeding one SULA cube, normalized to unit radiated power.
    // Returns a feed pattern over direction cosines.
    FeedPattern sula_subarray_pattern(const PatchElement &patch, double pitch, double k);

    enum class SulaLayout
    {
        line,  // 1 x N along y (vertical plane)
        square // sqrt(N) x sqrt(N)
    };

    // |AF|^2 of N SULA units at the given pitch with broadside excitation, as a function of
    // direction cosines (u, v). Broadside value N^2.
    std::function<double(double u, double v)> sula_concatenation_factor(SulaLayout layout, int n_units, double pitch,
                                                                        double k);

    // First grating lobe of a broadside array, degrees from boresight, or nullopt if pitch < lambda
    std::optional<double> grating_lobe_deg(double pitch, double wavelength);
}

#endif
