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

#include "lensarray/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "json.hpp"

namespace lensarray
{
    using nlohmann::json;

    double Link::distance() const
    {
        return std::sqrt((rx[0] - tx[0]) * (rx[0] - tx[0]) + (rx[1] - tx[1]) * (rx[1] - tx[1]) +
                         (rx[2] - tx[2]) * (rx[2] - tx[2]));
    }

    void Link::validate() const
    {
        if (!(distance() > 0.0))
            throw domain_error("Link: Tx and Rx coincide");
        if (excess_loss_db < 0.0)
            throw domain_error("Link: excess loss must be non-negative");
        if (los && excess_loss_db != 0.0)
            throw domain_error("Link: a LoS link carries no excess loss");
    }

    double fspl(double distance, const RadioConstants &rc)
    {
        if (!(distance > 0.0))
            throw domain_error("fspl: distance must be positive");
        return 20.0 * std::log10(4.0 * pi * distance / rc.wavelength);
    }

    double noise_power_dbm(double bandwidth, double noise_figure_db)
    {
        if (!(bandwidth > 0.0))
            throw domain_error("noise_power: bandwidth must be positive");
        return -174.0 + 10.0 * std::log10(bandwidth) + noise_figure_db;
    }

    Direction to_antenna_frame(const Vec3 &v, const Orientation &o)
    {
        const double a = deg2rad(o.azimuth_deg), e = deg2rad(o.elevation_deg);
        const Vec3 fwd{std::sin(a) * std::cos(e), std::cos(a) * std::cos(e), std::sin(e)};
        const Vec3 right{std::cos(a), -std::sin(a), 0.0};
        const Vec3 up{-std::sin(a) * std::sin(e), -std::cos(a) * std::sin(e), std::cos(e)};
        auto dot = [&](const Vec3 &b) { return v[0] * b[0] + v[1] * b[1] + v[2] * b[2]; };
        const double x = dot(right), y = dot(up), z = dot(fwd);
        const double r = std::sqrt(x * x + y * y + z * z);
        if (!(r > 0.0))
            throw domain_error("to_antenna_frame: zero vector");
        Direction d;
        d.theta_deg = rad2deg(std::acos(std::clamp(z / r, -1.0, 1.0)));
        d.phi_deg = rad2deg(std::atan2(y, x));
        if (d.phi_deg < 0.0)
            d.phi_deg += 360.0;
        return d;
    }

    Antenna isotropic_antenna()
    {
        return {[](const Direction &) { return 0.0; }, {}};
    }

    Antenna fixed_gain_antenna(double gain_dbi, Orientation o)
    {
        return {[gain_dbi](const Direction &) { return gain_dbi; }, o};
    }

    Antenna pattern_antenna(const RadiationPattern &pattern, Orientation o)
    {
        auto p = std::make_shared<RadiationPattern>(pattern);
        return {[p](const Direction &d)
                {
                    double g = p->gain_toward(d);
                    return g > 0.0 ? db_from_linear(g) : -300.0;
                },
                o};
    }

    double link_gain(const Link &link, const Antenna &tx, const Antenna &rx, const RadioConstants &rc)
    {
        link.validate();
        const Vec3 to_rx{link.rx[0] - link.tx[0], link.rx[1] - link.tx[1], link.rx[2] - link.tx[2]};
        const Vec3 to_tx{-to_rx[0], -to_rx[1], -to_rx[2]};
        const double gt = tx.gain_dbi(to_antenna_frame(to_rx, tx.orientation));
        const double gr = rx.gain_dbi(to_antenna_frame(to_tx, rx.orientation));
        return gt + gr - fspl(link.distance(), rc) - link.excess_loss_db;
    }

    std::string to_string(ScenarioKind k)
    {
        switch (k)
        {
        case ScenarioKind::backhaul_1: return "backhaul_1";
        case ScenarioKind::backhaul_2: return "backhaul_2";
        case ScenarioKind::outdoor_mu: return "outdoor_mu";
        case ScenarioKind::indoor_mu: return "indoor_mu";
        }
        return "?";
    }

    static ScenarioKind kind_from_string(const std::string &s)
    {
        for (auto k : {ScenarioKind::backhaul_1, ScenarioKind::backhaul_2, ScenarioKind::outdoor_mu, ScenarioKind::indoor_mu})
            if (to_string(k) == s)
                return k;
        throw config_error("unknown scenario kind '" + s + "'");
    }

    static std::size_t lattice_count(double length, double spacing, LatticeRule rule)
    {
        const double n = std::floor(length / spacing + 1e-9);
        return std::size_t(n) + (rule == LatticeRule::edges ? 1 : 0);
    }

    static double lattice_point(double lo, double spacing, LatticeRule rule, std::size_t i)
    {
        return lo + spacing * (double(i) + (rule == LatticeRule::centers ? 0.5 : 0.0));
    }

    std::vector<Vec3> drop_users(const Scenario &s)
    {
        const auto &a = s.area;
        const double lx = a.x_max - a.x_min, ly = a.y_max - a.y_min;
        if (!(a.spacing > 0.0))
            throw domain_error("drop_users: spacing must be positive");
        if (!(lx > 0.0) || !(ly > 0.0) || a.spacing > lx || a.spacing > ly)
            throw domain_error("drop_users: spacing larger than the drop area, no users");
        const std::size_t nx = lattice_count(lx, a.spacing, a.x_rule), ny = lattice_count(ly, a.spacing, a.y_rule);
        std::vector<Vec3> out;
        out.reserve(nx * ny);
        // y outer, x inner
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i)
                out.push_back({lattice_point(a.x_min, a.spacing, a.x_rule, i),
                               lattice_point(a.y_min, a.spacing, a.y_rule, j), s.rx_height});
        return out;
    }

    double blockage_loss_db(const Scenario &s, double x, double y)
    {
        double l = 0.0;
        for (const auto &b : s.blockages)
            if (x >= b.x_min && x <= b.x_max && y >= b.y_min && y <= b.y_max)
                l += b.excess_loss_db;
        return l;
    }

    void tx_angles(const Scenario &s, const Vec3 &rx, double &az, double &el)
    {
        const double dx = rx[0] - s.tx_position[0], dy = rx[1] - s.tx_position[1], dz = rx[2] - s.tx_position[2];
        const double a = deg2rad(s.tx_orientation.azimuth_deg);
        const double fwd = dx * std::sin(a) + dy * std::cos(a);
        const double right = dx * std::cos(a) - dy * std::sin(a);
        az = rad2deg(std::atan2(right, fwd));
        el = rad2deg(std::atan2(dz, std::hypot(dx, dy)));
    }

    void Scenario::validate() const
    {
        if (!(frequency > 0.0))
            throw domain_error("scenario: frequency must be positive");
        if (!(bandwidth > 0.0))
            throw domain_error("scenario: bandwidth must be positive");
        if (users_per_trial < 1 || trials < 1)
            throw domain_error("scenario: users per trial and trial count must be positive");
        if (tx_heights.empty())
            throw domain_error("scenario: at least one Tx height is required");
        if (!(area.spacing > 0.0))
            throw domain_error("scenario: user spacing must be positive");
        if (excess_loss_db < 0.0)
            throw domain_error("scenario: excess loss must be non-negative");
        if (los && excess_loss_db != 0.0)
            throw domain_error("scenario: a LoS link carries no excess loss");
        if (!(link_distance > 0.0))
            throw domain_error("scenario: link distance must be positive");
        for (int b : codebook_beams)
            if (b != 8 && b != 16 && b != 32 && b != 64)
                throw domain_error("scenario: codebook beam counts must be 8, 16, 32 or 64");
        if (indoor_codebook != 8 && indoor_codebook != 16 && indoor_codebook != 32 && indoor_codebook != 64)
            throw domain_error("scenario: stream codebook must be 8, 16, 32 or 64");
        for (const auto &b : blockages)
            if (b.excess_loss_db < 0.0)
                throw domain_error("scenario: blockage loss must be non-negative");
    }

    Scenario default_scenario(ScenarioKind k)
    {
        Scenario s;
        s.kind = k;
        s.name = to_string(k);
        switch (k)
        {
        case ScenarioKind::backhaul_1:
            s.tx_power_dbm = 43.0;
            s.link_distance = 450.0;
            s.los = false;
            s.excess_loss_db = 29.109908; // calibrated
            break;
        case ScenarioKind::backhaul_2:
            s.tx_power_dbm = 43.0;
            s.link_distance = 636.0;
            break;
        case ScenarioKind::outdoor_mu:
            s.tx_power_dbm = 38.0;
            s.tx_position = {0.0, 0.0, 3.0};
            s.tx_heights = {3.0, 6.0};
            s.area = {-100.0, 100.0, 0.0, 20.0, 2.0, LatticeRule::centers, LatticeRule::edges};
            s.rx_height = 3.0;
            break;
        case ScenarioKind::indoor_mu:
            s.tx_power_dbm = 13.0;
            s.tx_position = {15.0, 0.0, 3.0};
            s.tx_heights = {3.0};
            s.downtilt_deg = 10.0;
            s.area = {0.0, 30.0, 0.0, 10.0, 1.0, LatticeRule::centers, LatticeRule::centers};
            s.rx_height = 1.5;
            s.stream_directions_deg = {-60.0, 60.0};
            s.indoor_codebook = 8;
            s.codebook_beams = {8};
            s.users_per_trial = 2;
            s.trials = 1;
            break;
        }
        return s;
    }

    // ---- config parsing ----

    static void check_keys(const json &j, const std::set<std::string> &allowed, const std::string &where)
    {
        if (!j.is_object())
            throw config_error(where + ": expected an object");
        for (auto it = j.begin(); it != j.end(); ++it)
            if (!allowed.count(it.key()))
                throw config_error(where + ": unknown key '" + it.key() + "'");
    }

    template <typename T>
    static void read(const json &j, const char *key, T &out, const std::string &where)
    {
        if (!j.contains(key))
            return;
        try
        {
            out = j.at(key).get<T>();
        }
        catch (const json::exception &e)
        {
            throw config_error(where + "." + key + ": " + e.what());
        }
    }

    static void read_range(const json &j, const char *key, double &lo, double &hi, const std::string &where)
    {
        if (!j.contains(key))
            return;
        std::vector<double> v;
        read(j, key, v, where);
        if (v.size() != 2 || !(v[1] > v[0]))
            throw config_error(where + "." + key + ": expected [min, max] with max > min");
        lo = v[0];
        hi = v[1];
    }

    static LatticeRule rule_from(const std::string &s, const std::string &where)
    {
        if (s == "centers")
            return LatticeRule::centers;
        if (s == "edges")
            return LatticeRule::edges;
        throw config_error(where + ": lattice rule must be 'centers' or 'edges'");
    }

    Scenario parse_scenario(const std::string &text)
    {
        json j;
        try
        {
            j = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw config_error(std::string("parse error: ") + e.what());
        }
        check_keys(j, {"kind", "name", "radio", "tx", "users", "beams", "trials", "backhaul"}, "scenario");
        if (!j.contains("kind"))
            throw config_error("scenario: missing 'kind'");
        std::string kind;
        read(j, "kind", kind, "scenario");
        Scenario s = default_scenario(kind_from_string(kind));
        read(j, "name", s.name, "scenario");

        if (j.contains("radio"))
        {
            const auto &r = j["radio"];
            check_keys(r, {"frequency_hz", "tx_power_dbm", "bandwidth_hz", "noise_figure_db"}, "radio");
            read(r, "frequency_hz", s.frequency, "radio");
            read(r, "tx_power_dbm", s.tx_power_dbm, "radio");
            read(r, "bandwidth_hz", s.bandwidth, "radio");
            read(r, "noise_figure_db", s.noise_figure_db, "radio");
        }
        if (j.contains("tx"))
        {
            const auto &t = j["tx"];
            check_keys(t, {"position_m", "azimuth_deg", "elevation_deg", "downtilt_deg", "heights_m"}, "tx");
            if (t.contains("position_m"))
            {
                std::vector<double> p;
                read(t, "position_m", p, "tx");
                if (p.size() != 3)
                    throw config_error("tx.position_m: expected [x, y, z]");
                s.tx_position = {p[0], p[1], p[2]};
            }
            read(t, "azimuth_deg", s.tx_orientation.azimuth_deg, "tx");
            read(t, "elevation_deg", s.tx_orientation.elevation_deg, "tx");
            read(t, "downtilt_deg", s.downtilt_deg, "tx");
            read(t, "heights_m", s.tx_heights, "tx");
        }
        if (j.contains("users"))
        {
            const auto &u = j["users"];
            check_keys(u, {"area", "height_m", "gain_dbi", "blockages"}, "users");
            if (u.contains("area"))
            {
                const auto &a = u["area"];
                check_keys(a, {"x_m", "y_m", "spacing_m", "x_rule", "y_rule"}, "users.area");
                read_range(a, "x_m", s.area.x_min, s.area.x_max, "users.area");
                read_range(a, "y_m", s.area.y_min, s.area.y_max, "users.area");
                read(a, "spacing_m", s.area.spacing, "users.area");
                std::string r;
                if (a.contains("x_rule"))
                {
                    read(a, "x_rule", r, "users.area");
                    s.area.x_rule = rule_from(r, "users.area.x_rule");
                }
                if (a.contains("y_rule"))
                {
                    read(a, "y_rule", r, "users.area");
                    s.area.y_rule = rule_from(r, "users.area.y_rule");
                }
            }
            read(u, "height_m", s.rx_height, "users");
            read(u, "gain_dbi", s.rx_gain_dbi, "users");
            if (u.contains("blockages"))
            {
                if (!u["blockages"].is_array())
                    throw config_error("users.blockages: expected an array");
                s.blockages.clear();
                for (const auto &b : u["blockages"])
                {
                    check_keys(b, {"x_m", "y_m", "excess_loss_db"}, "users.blockages[]");
                    Blockage bl;
                    read_range(b, "x_m", bl.x_min, bl.x_max, "users.blockages[]");
                    read_range(b, "y_m", bl.y_min, bl.y_max, "users.blockages[]");
                    read(b, "excess_loss_db", bl.excess_loss_db, "users.blockages[]");
                    s.blockages.push_back(bl);
                }
            }
        }
        if (j.contains("beams"))
        {
            const auto &b = j["beams"];
            check_keys(b, {"codebook", "span_deg", "streams_deg", "stream_codebook"}, "beams");
            read(b, "codebook", s.codebook_beams, "beams");
            read(b, "span_deg", s.codebook_span_deg, "beams");
            read(b, "streams_deg", s.stream_directions_deg, "beams");
            read(b, "stream_codebook", s.indoor_codebook, "beams");
        }
        if (j.contains("trials"))
        {
            const auto &t = j["trials"];
            check_keys(t, {"users_per_trial", "count", "seed", "equal_power_split", "partitioned_bandwidth"}, "trials");
            read(t, "users_per_trial", s.users_per_trial, "trials");
            read(t, "count", s.trials, "trials");
            read(t, "seed", s.seed, "trials");
            read(t, "equal_power_split", s.equal_power_split, "trials");
            read(t, "partitioned_bandwidth", s.partitioned_bandwidth, "trials");
        }
        if (j.contains("backhaul"))
        {
            const auto &b = j["backhaul"];
            check_keys(b, {"distance_m", "los", "excess_loss_db"}, "backhaul");
            read(b, "distance_m", s.link_distance, "backhaul");
            read(b, "los", s.los, "backhaul");
            read(b, "excess_loss_db", s.excess_loss_db, "backhaul");
        }
        try
        {
            s.validate();
        }
        catch (const domain_error &e)
        {
            throw config_error(e.what());
        }
        return s;
    }

    Scenario load_scenario(const std::string &path)
    {
        std::ifstream f(path);
        if (!f)
            throw config_error("cannot open config '" + path + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        return parse_scenario(ss.str());
    }

    std::string scenario_to_json(const Scenario &s)
    {
        auto rule = [](LatticeRule r) { return r == LatticeRule::centers ? "centers" : "edges"; };
        json j;
        j["kind"] = to_string(s.kind);
        j["name"] = s.name;
        j["radio"] = {{"frequency_hz", s.frequency},
                      {"tx_power_dbm", s.tx_power_dbm},
                      {"bandwidth_hz", s.bandwidth},
                      {"noise_figure_db", s.noise_figure_db}};
        j["tx"] = {{"position_m", s.tx_position},
                   {"azimuth_deg", s.tx_orientation.azimuth_deg},
                   {"elevation_deg", s.tx_orientation.elevation_deg},
                   {"downtilt_deg", s.downtilt_deg},
                   {"heights_m", s.tx_heights}};
        auto bl = json::array();
        for (const auto &b : s.blockages)
            bl.push_back({{"x_m", {b.x_min, b.x_max}}, {"y_m", {b.y_min, b.y_max}}, {"excess_loss_db", b.excess_loss_db}});
        j["users"] = {{"height_m", s.rx_height}, {"gain_dbi", s.rx_gain_dbi}, {"blockages", bl}};
        if (s.area.x_max > s.area.x_min) // backhaul scenarios carry no drop area
            j["users"]["area"] = {{"x_m", {s.area.x_min, s.area.x_max}},
                                  {"y_m", {s.area.y_min, s.area.y_max}},
                                  {"spacing_m", s.area.spacing},
                                  {"x_rule", rule(s.area.x_rule)},
                                  {"y_rule", rule(s.area.y_rule)}};
        j["beams"] = {{"codebook", s.codebook_beams},
                      {"span_deg", s.codebook_span_deg},
                      {"streams_deg", s.stream_directions_deg},
                      {"stream_codebook", s.indoor_codebook}};
        j["trials"] = {{"users_per_trial", s.users_per_trial},
                       {"count", s.trials},
                       {"seed", s.seed},
                       {"equal_power_split", s.equal_power_split},
                       {"partitioned_bandwidth", s.partitioned_bandwidth}};
        j["backhaul"] = {{"distance_m", s.link_distance}, {"los", s.los}, {"excess_loss_db", s.excess_loss_db}};
        return j.dump(2);
    }

    std::string scenario_hash(const Scenario &s)
    {
        // The seed travels next to the hash, not inside it
        Scenario c = s;
        c.seed = 0;
        return digest_hex(scenario_to_json(c));
    }
}
