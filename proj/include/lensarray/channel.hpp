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

#ifndef LENSARRAY_CHANNEL_HPP
#define LENSARRAY_CHANNEL_HPP

#include "lensarray/em_core.hpp"
#include "lensarray/radiation.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace lensarray
{
    using Vec3 = std::array<double, 3>; // x, y, z [m], z up

    struct Link
    {
        Vec3 tx{}, rx{};
        bool los = true;
        double excess_loss_db = 0.0;

        double distance() const;
        void validate() const;
    };

    // Free-space path loss 20 log10(4 pi d / lambda)
    double fspl(double distance, const RadioConstants &rc);

    // Thermal noise -174 dBm/Hz + 10 log10(B) + NF
    double noise_power_dbm(double bandwidth, double noise_figure_db);

    // Antenna pointing. Boresight azimuth is measured from +y toward +x, elevation up from the
    // horizon. The antenna y axis stays in the vertical plane through the boresight.
    struct Orientation
    {
        double azimuth_deg = 0.0;
        double elevation_deg = 0.0;
    };

    // Direction of a world-frame vector in the antenna frame
    Direction to_antenna_frame(const Vec3 &v, const Orientation &o);

    struct Antenna
    {
        std::function<double(const Direction &)> gain_dbi;
        Orientation orientation;
    };

    Antenna isotropic_antenna();
    Antenna pattern_antenna(const RadiationPattern &pattern, Orientation o = {});
    Antenna fixed_gain_antenna(double gain_dbi, Orientation o = {});

    // G_tx(toward rx) + G_rx(toward tx) - fspl - excess loss, dB
    double link_gain(const Link &link, const Antenna &tx, const Antenna &rx, const RadioConstants &rc);

    enum class ScenarioKind
    {
        backhaul_1,
        backhaul_2,
        outdoor_mu,
        indoor_mu
    };
    std::string to_string(ScenarioKind k);

    // Lattice placement along one axis of the drop area
    enum class LatticeRule
    {
        centers, // cell centres, floor(L / s) points
        edges    // both edges included, floor(L / s) + 1 points
    };

    struct DropArea
    {
        double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
        double spacing = 1.0;
        LatticeRule x_rule = LatticeRule::centers;
        LatticeRule y_rule = LatticeRule::centers;
    };

    // Rectangle of users whose links see extra loss (blockage surrogate)
    struct Blockage
    {
        double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
        double excess_loss_db = 0.0;
    };

    struct Scenario
    {
        ScenarioKind kind = ScenarioKind::outdoor_mu;
        std::string name;
        double frequency = default_frequency;
        double tx_power_dbm = 38.0;
        double bandwidth = 2.0e9;
        double noise_figure_db = 5.0;

        // Tx placement and pointing
        Vec3 tx_position{0.0, 0.0, 3.0};
        Orientation tx_orientation;
        double downtilt_deg = 0.0;
        std::vector<double> tx_heights{3.0}; // heights evaluated side by side

        // Users
        DropArea area;
        double rx_height = 3.0;
        double rx_gain_dbi = 0.0; // omnidirectional receivers
        std::vector<Blockage> blockages;

        // Beams
        std::vector<int> codebook_beams{8, 16, 32, 64};
        double codebook_span_deg = 75.0;
        std::vector<double> stream_directions_deg; // fixed streams (indoor)
        int indoor_codebook = 8;                   // codebook whose beam shape the fixed streams use

        // Trials
        int users_per_trial = 5;
        int trials = 220;
        unsigned long long seed = 7;
        bool equal_power_split = true;
        bool partitioned_bandwidth = false;

        // Backhaul geometry
        double link_distance = 636.0;
        bool los = true;
        double excess_loss_db = 0.0;

        void validate() const; // throws domain_error
    };

    // Deterministic lattice of Rx positions at rx_height
    std::vector<Vec3> drop_users(const Scenario &s);

    // Extra loss on the link to a user at (x, y)
    double blockage_loss_db(const Scenario &s, double x, double y);

    // Horizontal angle from the Tx boresight and elevation from the Tx, degrees
    void tx_angles(const Scenario &s, const Vec3 &rx, double &azimuth_deg, double &elevation_deg);

    // Structured config. Unknown keys are rejected with config_error.
    class config_error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };
    Scenario parse_scenario(const std::string &json_text);
    Scenario load_scenario(const std::string &path);
    std::string scenario_to_json(const Scenario &s);
    std::string scenario_hash(const Scenario &s);

    // Scenario defaults of the study
    Scenario default_scenario(ScenarioKind k);
}

#endif
