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

#ifndef LENSARRAY_CALIBRATION_HPP
#define LENSARRAY_CALIBRATION_HPP

#include "lensarray/array.hpp"
#include "lensarray/channel.hpp"

namespace lensarray
{
    // Observables the surrogate model is fitted to
    struct CalibrationTargets
    {
        double mula_peak_dbi = 12.5;     // best port of the 4x4 MULA with the largest lens
        double mula_lens_advantage_db = 8.0; // lens over bare patch at that port
        double mula_hpbw_deg = 13.0;     // full width, vertical plane
        int mula_lens_index = 3;
        int mula_port = 6;
        double sula_unit_hpbw_deg = 20.0; // one SULA cube, vertical plane
        double sula_peak_dbi = 25.0;      // 2x2 SULA
        double backhaul_lens_bps = 16.9e9; // NLoS backhaul with lens
        double grid_resolution_deg = 1.0;
    };

    struct CalibrationResult
    {
        PatchElement patch;
        ModelParams model;
        double excess_loss_db = 0.0;

        // Achieved observables
        double mula_hpbw_deg = 0.0;
        double mula_peak_dbi = 0.0;
        double sula_unit_hpbw_deg = 0.0;
        double sula_peak_dbi = 0.0;
        double no_lens_patch_dbi = 0.0;
        double no_lens_sula_dbi = 0.0;
    };

    // q such that the hemispheric cos^q patch has the given peak gain, 2(q + 1) = G
    double calibrate_element_q(double patch_gain_dbi);

    // Vertical-plane HPBW of a configuration/port evaluated on a single cut
    double cut_hpbw(const ArrayConfig &config, int port, double resolution_deg, int workers = 1);

    // Effective radius by bisection on the vertical HPBW (HPBW falls as the radius grows)
    double calibrate_effective_radius(ArrayConfig config, int port, double target_hpbw_deg, bool sula,
                                      double resolution_deg, int workers = 1);

    // Runs the whole chain: q, MULA radius, MULA efficiency, SULA radius, SULA wall efficiency,
    // NLoS excess loss
    CalibrationResult calibrate(const CalibrationTargets &t = {}, int workers = 1);
}

#endif
