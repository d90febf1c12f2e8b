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

#include "lensarray/calibration.hpp"
#include "lensarray/radiation.hpp"

#include <cmath>

using namespace lensarray;

TEST_CASE("element exponent from peak gain")
{
    CHECK(calibrate_element_q(db_from_linear(6.0)) == doctest::Approx(2.0));
    CHECK(calibrate_element_q(4.5) == doctest::Approx(PatchElement{}.q).epsilon(1e-9));
    CHECK_THROWS_AS(calibrate_element_q(2.0), domain_error); // 3 dBi or less leaves q <= 0
}

TEST_CASE("cut HPBW agrees with the full pattern")
{
    auto c = make_mula(Variant::MULA_4x4, 3);
    const double full = hpbw(pattern_for_port(c, 6, AngularGrid(1.0), 0), vertical_cut_phi);
    CHECK(cut_hpbw(c, 6, 1.0, 0) == doctest::Approx(full).epsilon(1e-6));
}

TEST_CASE("calibration reproduces the shipped defaults")
{
    const auto r = calibrate({}, 0);
    const ModelParams d;
    CHECK(r.patch.q == doctest::Approx(PatchElement{}.q).epsilon(1e-9));
    CHECK(std::abs(r.model.mula_effective_radius - d.mula_effective_radius) < 5e-5);
    CHECK(std::abs(r.model.sula_effective_radius - d.sula_effective_radius) < 5e-5);
    CHECK(r.model.mula_efficiency == doctest::Approx(d.mula_efficiency).epsilon(5e-3));
    CHECK(r.model.sula_wall_efficiency == doctest::Approx(d.sula_wall_efficiency).epsilon(5e-3));
    CHECK(r.excess_loss_db > 28.0);
    CHECK(r.excess_loss_db < 31.0);

    CHECK(r.mula_peak_dbi == doctest::Approx(12.5).epsilon(1e-3));
    CHECK(std::abs(r.mula_hpbw_deg - 13.0) < 0.5);
    CHECK(std::abs(r.sula_unit_hpbw_deg - 20.0) < 0.5);
    CHECK(r.sula_peak_dbi == doctest::Approx(25.0).epsilon(1e-3));
    CHECK(r.no_lens_patch_dbi == doctest::Approx(4.5).epsilon(1e-3));
}
