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

#include "lensarray/calibration.hpp"

#include "lensarray/radiation.hpp"
#include "lensarray/syssim.hpp"

#include <algorithm>
#include <cmath>

namespace lensarray
{
    double calibrate_element_q(double g_dbi)
    {
        const double q = linear_from_db(g_dbi) / 2.0 - 1.0;
        if (!(q > 0.0))
            throw domain_error("calibrate_element_q: patch gain must exceed 3 dBi (q > 0)");
        return q;
    }

    double cut_hpbw(const ArrayConfig &config, int port, double res, int workers)
    {
        const auto rc = make_constants(config.frequency);
        auto st = lens_aperture_for_port(config, port);
        auto grid = AngularGrid::cut(vertical_cut_phi, res);
        auto I = far_field_intensity(st.field, rc.wavenumber, grid, workers);
        std::vector<double> db(I.size());
        for (std::size_t i = 0; i < I.size(); ++i)
            db[i] = I[i] > 0.0 ? db_from_linear(I[i]) : -300.0;
        return hpbw_of_cut(grid.theta_deg(), db);
    }

    double calibrate_effective_radius(ArrayConfig c, int port, double target, bool sula, double res, int workers)
    {
        double &r = sula ? c.model.sula_effective_radius : c.model.mula_effective_radius;
        double lo = 0.004, hi = c.lens->radius();
        r = lo;
        if (cut_hpbw(c, port, res, workers) < target)
            throw domain_error("calibrate_effective_radius: target beamwidth wider than the smallest radius gives");
        r = hi;
        if (cut_hpbw(c, port, res, workers) > target)
            throw domain_error("calibrate_effective_radius: target beamwidth narrower than the full lens gives");
        while (hi - lo > 1e-6)
        {
            r = 0.5 * (lo + hi);
            if (cut_hpbw(c, port, res, workers) > target)
                lo = r;
            else
                hi = r;
        }
        // HPBW is piecewise constant in the radius (lattice samples enter the disc one ring at a time),
        // keep whichever bracket end lands closer to the target
        r = lo;
        const double e_lo = std::abs(cut_hpbw(c, port, res, workers) - target);
        r = hi;
        const double e_hi = std::abs(cut_hpbw(c, port, res, workers) - target);
        return e_lo < e_hi ? lo : hi;
    }

    CalibrationResult calibrate(const CalibrationTargets &t, int workers)
    {
        CalibrationResult out;
        AngularGrid grid(t.grid_resolution_deg);

        // 1. patch exponent from the bare-patch gain
        out.patch.q = calibrate_element_q(t.mula_peak_dbi - t.mula_lens_advantage_db);
        out.model = ModelParams{};
        out.model.mula_efficiency = 1.0;
        out.model.sula_wall_efficiency = 1.0;

        // 2. MULA effective radius from the best-port beamwidth
        auto mula = make_mula(Variant::MULA_4x4, t.mula_lens_index, out.model);
        mula.patch = out.patch;
        out.model.mula_effective_radius =
            calibrate_effective_radius(mula, t.mula_port, t.mula_hpbw_deg, false, t.grid_resolution_deg, workers);
        mula.model = out.model;

        // 3. shared aperture efficiency from the best-port peak gain
        {
            auto p = pattern_for_port(mula, t.mula_port, grid, workers);
            out.model.mula_efficiency = std::min(1.0, linear_from_db(t.mula_peak_dbi - peak_gain_dbi(p)));
            mula.model = out.model;
            auto q = pattern_for_port(mula, t.mula_port, grid, workers);
            out.mula_peak_dbi = peak_gain_dbi(q);
            out.mula_hpbw_deg = hpbw(q, vertical_cut_phi);
        }

        // 4. SULA effective radius from the single-cube beamwidth
        auto unit = make_sula(Variant::SULA_1x1, 1, out.model);
        unit.patch = out.patch;
        out.model.sula_effective_radius =
            calibrate_effective_radius(unit, 1, t.sula_unit_hpbw_deg, true, t.grid_resolution_deg, workers);

        // 5. wall efficiency from the 2x2 SULA peak
        {
            auto sq = make_sula(Variant::SULA_NxN, 4, out.model);
            sq.patch = out.patch;
            auto p = pattern_for_port(sq, 1, grid, workers);
            out.model.sula_wall_efficiency = std::min(1.0, linear_from_db(t.sula_peak_dbi - peak_gain_dbi(p)));
            sq.model = out.model;
            out.sula_peak_dbi = peak_gain_dbi(pattern_for_port(sq, 1, grid, workers));
            unit.model = out.model;
            out.sula_unit_hpbw_deg = hpbw(pattern_for_port(unit, 1, grid, workers), vertical_cut_phi);
        }

        // Baselines
        {
            auto nl = make_mula(Variant::NO_LENS_4x4, 0, out.model);
            nl.patch = out.patch;
            out.no_lens_patch_dbi = peak_gain_dbi(pattern_for_port(nl, 1, grid, workers));
            auto ns = make_sula(Variant::NO_LENS_SULA_1x1, 1, out.model);
            ns.patch = out.patch;
            out.no_lens_sula_dbi = peak_gain_dbi(pattern_for_port(ns, 1, grid, workers));
        }

        // 6. NLoS excess loss of backhaul case 1
        out.excess_loss_db =
            calibrate_excess_loss(default_scenario(ScenarioKind::backhaul_1), out.sula_peak_dbi, t.backhaul_lens_bps);
        return out;
    }
}
