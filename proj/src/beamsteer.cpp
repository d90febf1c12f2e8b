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

#include "lensarray/beamsteer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace lensarray
{
    std::string config_hash(const ArrayConfig &c)
    {
        std::ostringstream os;
        os << std::setprecision(17) << to_string(c.variant) << '|' << c.patch.side << '|' << c.patch.q << '|' << c.pitch
           << '|' << c.unit_pitch << '|' << c.sula_units << '|' << int(c.numbering) << '|' << c.frequency << '|'
           << c.model.mula_effective_radius << '|' << c.model.mula_efficiency << '|' << c.model.sula_effective_radius
           << '|' << c.model.sula_wall_efficiency << '|' << c.model.aperture_pitch;
        if (c.lens)
            os << '|' << c.lens->diameter << '|' << c.lens->focal_length << '|' << c.lens->permittivity;
        return digest_hex(os.str());
    }

    const SteeringEntry &SteeringMap::entry(int port) const
    {
        for (const auto &e : entries)
            if (e.port == port)
                return e;
        throw domain_error("SteeringMap: no entry for port " + std::to_string(port));
    }

    static double scan_angle(const Direction &d, SteeringPlane plane)
    {
        return plane == SteeringPlane::vertical ? d.vertical_angle_deg() : d.horizontal_angle_deg();
    }

    SteeringMap build_steering_map(const ArrayConfig &config, const AngularGrid &grid, int workers)
    {
        SteeringMap m;
        m.config_hash = config_hash(config);
        // A 1x4 row lies along x, so it steers in the horizontal plane
        bool row = config.variant == Variant::MULA_1x4 || config.variant == Variant::NO_LENS_1x4;
        m.plane = row ? SteeringPlane::horizontal : SteeringPlane::vertical;
        for (int port = 1; port <= config.port_count(); ++port)
        {
            auto p = pattern_for_port(config, port, grid, workers);
            SteeringEntry e;
            e.port = port;
            e.peak = peak_direction(p);
            e.gain_dbi = peak_gain_dbi(p);
            try
            {
                e.hpbw_deg = hpbw(p, vertical_cut_phi);
            }
            catch (const unbounded_beamwidth &)
            {
                e.hpbw_deg = std::numeric_limits<double>::quiet_NaN();
            }
            e.scan_deg = scan_angle(e.peak, m.plane);
            m.entries.push_back(e);
        }
        m.degenerate = true;
        for (const auto &e : m.entries)
            if (std::abs(e.scan_deg - m.entries.front().scan_deg) > 1e-9 ||
                std::abs(e.peak.theta_deg - m.entries.front().peak.theta_deg) > 1e-9 ||
                std::abs(e.peak.phi_deg - m.entries.front().peak.phi_deg) > 1e-9)
                m.degenerate = false;
        return m;
    }

    int select_port(const SteeringMap &map, double target_deg)
    {
        if (map.degenerate || map.entries.size() < 2)
            throw no_steering("select_port: steering map has no directional spread");
        int best = 0;
        double best_err = std::numeric_limits<double>::infinity();
        for (const auto &e : map.entries)
        {
            double err = std::abs(e.scan_deg - target_deg);
            if (err < best_err - 1e-9 || (std::abs(err - best_err) <= 1e-9 && e.port < best))
            {
                best_err = std::min(err, best_err);
                best = e.port;
            }
        }
        return best;
    }

    void write_steering_json(std::ostream &os, const SteeringMap &map)
    {
        auto arr = nlohmann::json::array();
        for (const auto &e : map.entries)
        {
            nlohmann::json j;
            j["port"] = e.port;
            j["theta_deg"] = e.peak.theta_deg;
            j["phi_deg"] = e.peak.phi_deg;
            j["gain_dbi"] = e.gain_dbi;
            if (std::isfinite(e.hpbw_deg))
                j["hpbw_deg"] = e.hpbw_deg;
            else
                j["hpbw_deg"] = nullptr;
            arr.push_back(j);
        }
        os << arr.dump(2) << '\n';
    }

    void SwitchModel::validate() const
    {
        if (raw_loss_db < 10.0 || raw_loss_db > 20.0)
            throw domain_error("SwitchModel: raw switch loss must lie in [10, 20] dB");
        if (compensation_db < 0.0 || delay_s < 0.0)
            throw domain_error("SwitchModel: compensation and delay must be non-negative");
    }

    double CutShape::at(double x) const
    {
        if (offset_deg.empty() || x < offset_deg.front() || x > offset_deg.back())
            return -300.0;
        auto it = std::upper_bound(offset_deg.begin(), offset_deg.end(), x);
        if (it == offset_deg.end())
            return rel_db.back();
        std::size_t i = std::size_t(it - offset_deg.begin());
        if (i == 0)
            return rel_db.front();
        double t = (x - offset_deg[i - 1]) / (offset_deg[i] - offset_deg[i - 1]);
        return rel_db[i - 1] + t * (rel_db[i] - rel_db[i - 1]);
    }

    CutShape recentre_cut(const std::vector<double> &th, const std::vector<double> &g)
    {
        if (th.size() != g.size() || th.empty())
            throw domain_error("recentre_cut: malformed cut");
        std::size_t ip = std::size_t(std::max_element(g.begin(), g.end()) - g.begin());
        CutShape s;
        s.offset_deg.resize(th.size());
        s.rel_db.resize(g.size());
        for (std::size_t i = 0; i < th.size(); ++i)
        {
            s.offset_deg[i] = th[i] - th[ip];
            s.rel_db[i] = std::max(g[i] - g[ip], -300.0);
        }
        return s;
    }

    // First local minima either side of the peak
    static void first_nulls(const CutShape &s, double &lo, double &hi)
    {
        std::size_t n = s.rel_db.size();
        std::size_t ic = std::size_t(std::max_element(s.rel_db.begin(), s.rel_db.end()) - s.rel_db.begin());
        std::size_t r = ic;
        while (r + 1 < n && s.rel_db[r + 1] < s.rel_db[r])
            ++r;
        std::size_t l = ic;
        while (l > 0 && s.rel_db[l - 1] < s.rel_db[l])
            --l;
        lo = s.offset_deg[l];
        hi = s.offset_deg[r];
    }

    double codebook_half_width(int beams)
    {
        switch (beams)
        {
        case 8: return 10.5;
        case 16: return 5.0;
        case 32: return 2.5;
        case 64: return 1.25;
        default: throw domain_error("codebook: beam count must be 8, 16, 32 or 64");
        }
    }

    double BeamCodebook::shape_db(double d, double el) const
    {
        const double s = half_width_deg / template_half_width_deg;
        double sd;
        if (d >= s * null_lo && d <= s * null_hi)
            sd = scan.at(d / s);
        else
            sd = scan.at(d > 0.0 ? d - s * null_hi + null_hi : d - s * null_lo + null_lo);
        return std::max(sd + elevation.at(el), -300.0);
    }

    double BeamCodebook::gain_dbi_dir(double beam_dir, double az, double el) const
    {
        return peak_gain_dbi + shape_db(az - beam_dir, el);
    }

    double BeamCodebook::gain_dbi(int b, double az, double el) const
    {
        return gain_dbi_dir(directions_deg.at(std::size_t(b)), az, el);
    }

    double BeamCodebook::power_fraction(int b) const
    {
        // Separable shape: integrate scan and elevation factors independently, cos(el) dEl dAz
        const double step = 0.02;
        const double dir = directions_deg.at(std::size_t(b));
        double ia = 0.0;
        for (double az = -180.0; az < 180.0; az += step)
        {
            double d = az - dir;
            double sd = shape_db(d, 0.0) - elevation.at(0.0);
            ia += std::pow(10.0, sd / 10.0);
        }
        ia *= deg2rad(step);
        double ie = 0.0;
        for (double el = -90.0; el <= 90.0 + 1e-9; el += step)
            ie += std::pow(10.0, elevation.at(el) / 10.0) * std::cos(deg2rad(el));
        ie *= deg2rad(step);
        return std::pow(10.0, peak_gain_dbi / 10.0) * ia * ie / (4.0 * pi);
    }

    double BeamCodebook::measured_hpbw_deg() const
    {
        std::vector<double> x, g;
        for (double d = -45.0; d <= 45.0 + 1e-9; d += 0.005)
        {
            x.push_back(d);
            g.push_back(shape_db(d, 0.0) - elevation.at(0.0));
        }
        return hpbw_of_cut(x, g);
    }

    BeamCodebook make_codebook(int beams, const RadiationPattern &source, const CodebookOptions &opt)
    {
        opt.switch_model.validate();
        BeamCodebook cb;
        cb.beams = beams;
        cb.half_width_deg = codebook_half_width(beams);
        cb.lens = opt.lens;
        const RadiationPattern &tpl = opt.scan_template ? *opt.scan_template : source;

        const auto &th = tpl.grid.theta_deg();
        cb.scan = recentre_cut(th, tpl.cut_dbi(horizontal_cut_phi));
        cb.elevation = recentre_cut(source.grid.theta_deg(), source.cut_dbi(vertical_cut_phi));
        cb.template_half_width_deg = hpbw_of_cut(cb.scan.offset_deg, cb.scan.rel_db) / 2.0;
        first_nulls(cb.scan, cb.null_lo, cb.null_hi);

        cb.source_peak_dbi = peak_gain_dbi(source);
        cb.peak_gain_dbi = cb.source_peak_dbi + db_from_linear(cb.template_half_width_deg / cb.half_width_deg) -
                           opt.switch_model.net_loss_db();

        cb.directions_deg.resize(std::size_t(beams));
        for (int b = 0; b < beams; ++b)
            cb.directions_deg[std::size_t(b)] = opt.span_deg * double(2 * b - (beams - 1)) / double(beams - 1);
        return cb;
    }

    CodebookSources codebook_sources(const ModelParams &model, double resolution_deg, int workers)
    {
        AngularGrid g(resolution_deg);
        CodebookSources s;
        s.lens = pattern_for_port(make_mula(Variant::MULA_4x4, 3, model), 11, g, workers);
        s.no_lens = pattern_for_port(make_mula(Variant::NO_LENS_4x4, 0, model), 11, g, workers);
        return s;
    }

    BeamCodebook make_system_codebook(int beams, bool lens, const CodebookSources &src, double span_deg,
                                      const SwitchModel &sw)
    {
        CodebookOptions o;
        o.span_deg = span_deg;
        o.switch_model = sw;
        o.lens = lens;
        o.scan_template = &src.lens;
        return make_codebook(beams, lens ? src.lens : src.no_lens, o);
    }
}
