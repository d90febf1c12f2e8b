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
#include "lensarray/calibration.hpp"
#include "lensarray/radiation.hpp"
#include "lensarray/syssim.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

using namespace lensarray;
using nlohmann::json;
namespace fs = std::filesystem;

namespace
{
    const char *tool_version = "0.1.0";
    const char *out_env = "LENSARRAY_OUT_DIR";

    // Raised when a result breaks a numerical contract (exit 3)
    struct contract_violation : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct Options
    {
        std::string config;
        std::optional<unsigned long long> seed;
        int workers = 0;
        std::string out;
    };

    std::string read_file(const std::string &path)
    {
        std::ifstream f(path);
        if (!f)
            throw config_error("cannot open config '" + path + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }

    void check_keys(const json &j, std::initializer_list<const char *> allowed, const std::string &where)
    {
        if (!j.is_object())
            throw config_error(where + ": expected an object");
        for (auto it = j.begin(); it != j.end(); ++it)
        {
            bool ok = false;
            for (const char *a : allowed)
                ok = ok || it.key() == a;
            if (!ok)
                throw config_error(where + ": unknown key '" + it.key() + "'");
        }
    }

    template <typename T>
    void get(const json &j, const char *key, T &out, const std::string &where)
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

    // Array configuration file
    struct ArrayFile
    {
        ArrayConfig config;
        double resolution_deg = 1.0;
        std::string text;
    };

    ArrayFile load_array(const std::string &path)
    {
        ArrayFile a;
        a.text = read_file(path);
        json j;
        try
        {
            j = json::parse(a.text);
        }
        catch (const json::parse_error &e)
        {
            throw config_error(std::string("parse error: ") + e.what());
        }
        check_keys(j, {"variant", "lens_index", "units", "numbering", "frequency_hz", "resolution_deg", "model"}, "array");
        if (!j.contains("variant"))
            throw config_error("array: missing 'variant'");
        std::string vs, numbering = "row_major";
        int lens_index = 3, units = 1;
        get(j, "variant", vs, "array");
        get(j, "lens_index", lens_index, "array");
        get(j, "units", units, "array");
        get(j, "numbering", numbering, "array");
        get(j, "resolution_deg", a.resolution_deg, "array");

        ModelParams m;
        PatchElement patch;
        if (j.contains("model"))
        {
            const auto &mj = j["model"];
            check_keys(mj, {"element_q", "mula_effective_radius_m", "mula_efficiency", "sula_effective_radius_m",
                            "sula_wall_efficiency", "aperture_pitch_wavelengths"},
                       "array.model");
            get(mj, "element_q", patch.q, "array.model");
            get(mj, "mula_effective_radius_m", m.mula_effective_radius, "array.model");
            get(mj, "mula_efficiency", m.mula_efficiency, "array.model");
            get(mj, "sula_effective_radius_m", m.sula_effective_radius, "array.model");
            get(mj, "sula_wall_efficiency", m.sula_wall_efficiency, "array.model");
            get(mj, "aperture_pitch_wavelengths", m.aperture_pitch, "array.model");
        }
        try
        {
            const Variant v = variant_from_string(vs);
            a.config = is_sula(v) ? make_sula(v, units, m) : make_mula(v, lens_index, m);
            a.config.patch = patch;
            get(j, "frequency_hz", a.config.frequency, "array");
            if (numbering == "column_major")
                a.config.numbering = PortNumbering::column_major;
            else if (numbering != "row_major")
                throw config_error("array.numbering: expected 'row_major' or 'column_major'");
            a.config.validate();
            AngularGrid check(a.resolution_deg);
            (void)check;
        }
        catch (const domain_error &e)
        {
            throw config_error(e.what());
        }
        return a;
    }

    // Output directory and manifest bookkeeping
    class Run
    {
    public:
        Run(std::string command, const Options &o, std::string config_hash, unsigned long long seed)
            : command_(std::move(command)), config_(o.config), hash_(std::move(config_hash)), seed_(seed)
        {
            // --out wins over the environment, which wins over the default
            if (!o.out.empty())
                dir_ = o.out;
            else if (const char *e = std::getenv(out_env); e && *e)
                dir_ = e;
            else
                dir_ = "out";
            fs::create_directories(dir_);
            run_id_ = digest_hex(command_ + "|" + hash_ + "|" + std::to_string(seed_) + "|" + tool_version);
        }

        const std::string &run_id() const { return run_id_; }

        // Stamp a JSON artifact with its manifest
        json stamp(json j) const
        {
            j["manifest"] = manifest_name();
            j["run_id"] = run_id_;
            return j;
        }

        std::ofstream open(const std::string &name)
        {
            auto p = fs::path(dir_) / name;
            std::ofstream f(p, std::ios::binary);
            if (!f)
                throw std::runtime_error("cannot write '" + p.string() + "'");
            outputs_.push_back(p.string());
            return f;
        }

        void write_json(const std::string &name, const json &j)
        {
            auto f = open(name);
            f << stamp(j).dump(2) << '\n';
        }

        void finish()
        {
            json m;
            m["command"] = command_;
            m["config_path"] = config_;
            m["seed"] = seed_;
            m["tool_version"] = tool_version;
            m["scenario_hash"] = hash_;
            m["run_id"] = run_id_;
            m["outputs"] = outputs_;
            std::ofstream f(fs::path(dir_) / manifest_name(), std::ios::binary);
            f << m.dump(2) << '\n';
            std::cout << "wrote " << outputs_.size() << " file(s) to " << dir_ << "\n";
        }

        // One manifest per command so runs sharing a directory do not clobber each other
        std::string manifest_name() const { return command_ + "_manifest.json"; }

    private:
        std::string command_, config_, hash_;
        unsigned long long seed_;
        std::string dir_, run_id_;
        std::vector<std::string> outputs_;
    };

    double finite_or_throw(double x, const char *what)
    {
        if (!std::isfinite(x))
            throw contract_violation(std::string(what) + " is not finite");
        return x;
    }

    void check_energy(const RadiationPattern &p)
    {
        if (p.radiated_fraction > 1.0 + 1e-3 || p.integrated_fraction() > 1.0 + 1e-3)
            throw contract_violation("energy bookkeeping breach: pattern radiates more than the input power");
    }

    json hpbw_or_null(const RadiationPattern &p, double phi)
    {
        try
        {
            return hpbw(p, phi);
        }
        catch (const unbounded_beamwidth &)
        {
            return nullptr;
        }
    }

    BackhaulGains measured_backhaul_gains(const ModelParams &m, int workers)
    {
        AngularGrid g(1.0);
        BackhaulGains b;
        b.lens_dbi = peak_gain_dbi(pattern_for_port(make_sula(Variant::SULA_NxN, 4, m), 1, g, workers));
        b.no_lens_dbi = peak_gain_dbi(pattern_for_port(make_sula(Variant::NO_LENS_SULA_1x1, 1, m), 1, g, workers));
        return b;
    }

    Scenario scenario_from(const Options &o, const std::string &fallback_kind)
    {
        Scenario s;
        if (!o.config.empty())
            s = load_scenario(o.config);
        else
            s = parse_scenario(json{{"kind", fallback_kind}}.dump());
        if (o.seed)
            s.seed = *o.seed;
        return s;
    }

    // ---- subcommands ----

    void cmd_pattern(const Options &o, int port)
    {
        if (o.config.empty())
            throw config_error("pattern: --config is required");
        auto a = load_array(o.config);
        if (port < 1 || port > a.config.port_count())
            throw config_error("pattern: port " + std::to_string(port) + " not in 1.." +
                               std::to_string(a.config.port_count()) + " for " + to_string(a.config.variant));
        auto p = pattern_for_port(a.config, port, AngularGrid(a.resolution_deg), o.workers);
        check_energy(p);
        Run run("pattern", o, config_hash(a.config), o.seed.value_or(7));
        const std::string stem = "pattern_port" + std::to_string(port);
        {
            auto f = run.open(stem + ".csv");
            write_pattern_csv(f, p);
        }
        auto d = peak_direction(p);
        json m;
        m["variant"] = to_string(a.config.variant);
        m["port"] = port;
        m["config_hash"] = config_hash(a.config);
        m["peak_gain_dbi"] = finite_or_throw(peak_gain_dbi(p), "peak gain");
        m["peak_dir"] = {{"theta_deg", d.theta_deg}, {"phi_deg", d.phi_deg}};
        m["hpbw_deg"] = {{"vertical", hpbw_or_null(p, vertical_cut_phi)}, {"horizontal", hpbw_or_null(p, horizontal_cut_phi)}};
        m["radiated_fraction"] = p.radiated_fraction;
        run.write_json(stem + ".json", m);
        std::cout << to_string(a.config.variant) << " port " << port << ": peak " << m["peak_gain_dbi"].get<double>()
                  << " dBi\n";
        run.finish();
    }

    void cmd_steermap(const Options &o)
    {
        if (o.config.empty())
            throw config_error("steermap: --config is required");
        auto a = load_array(o.config);
        auto map = build_steering_map(a.config, AngularGrid(a.resolution_deg), o.workers);
        for (const auto &e : map.entries)
            finite_or_throw(e.gain_dbi, "port gain");
        if (map.degenerate)
            std::cerr << "warning: all ports of " << to_string(a.config.variant)
                      << " point the same way; the steering map is degenerate\n";
        Run run("steermap", o, map.config_hash, o.seed.value_or(7));
        {
            auto f = run.open("steermap.json");
            write_steering_json(f, map);
        }
        json meta;
        meta["variant"] = to_string(a.config.variant);
        meta["config_hash"] = map.config_hash;
        meta["degenerate"] = map.degenerate;
        meta["plane"] = map.plane == SteeringPlane::vertical ? "vertical" : "horizontal";
        run.write_json("steermap_meta.json", meta);
        run.finish();
    }

    void cmd_backhaul(const Options &o, int which, bool lens, bool no_lens)
    {
        Scenario s;
        if (!o.config.empty())
            s = scenario_from(o, "");
        else if (which == 1 || which == 2)
            s = default_scenario(which == 1 ? ScenarioKind::backhaul_1 : ScenarioKind::backhaul_2);
        else
            throw config_error("backhaul: give --case 1|2 or --config");
        if (s.kind != ScenarioKind::backhaul_1 && s.kind != ScenarioKind::backhaul_2)
            throw config_error("backhaul: scenario kind must be backhaul_1 or backhaul_2");
        if (o.seed)
            s.seed = *o.seed;
        if (!lens && !no_lens)
            lens = no_lens = true;

        const auto g = measured_backhaul_gains({}, o.workers);
        Run run("backhaul", o, scenario_hash(s), s.seed);
        json j;
        j["scenario"] = to_string(s.kind);
        j["scenario_hash"] = scenario_hash(s);
        j["seed"] = s.seed;
        j["distance_m"] = s.link_distance;
        j["los"] = s.los;
        j["excess_loss_db"] = s.excess_loss_db;
        auto one = [&](bool with_lens)
        {
            const double gain = with_lens ? g.lens_dbi : g.no_lens_dbi;
            auto r = backhaul_link(s, gain);
            finite_or_throw(r.throughput_bps, "throughput");
            std::cout << (with_lens ? "lens   " : "no-lens") << " " << r.throughput_bps / 1e9 << " Gbps (SNR "
                      << r.snr_db << " dB)\n";
            return json{{"gain_each_end_dbi", gain}, {"path_loss_db", r.path_loss_db}, {"received_dbm", r.received_dbm},
                        {"noise_dbm", r.noise_dbm}, {"snr_db", r.snr_db}, {"throughput_bps", r.throughput_bps}};
        };
        if (lens)
            j["lens"] = one(true);
        if (no_lens)
            j["no_lens"] = one(false);
        run.write_json("backhaul_" + to_string(s.kind) + ".json", j);
        run.finish();
    }

    std::string num_tag(double h)
    {
        std::ostringstream ss;
        ss << h;
        return ss.str();
    }

    void cmd_mumimo(const Options &o, const std::string &which, const std::vector<int> &beams)
    {
        std::string kind;
        if (o.config.empty())
        {
            if (which == "outdoor")
                kind = "outdoor_mu";
            else if (which == "indoor")
                kind = "indoor_mu";
            else
                throw config_error("mumimo: give --config or --scenario outdoor|indoor");
        }
        Scenario s = scenario_from(o, kind);
        if (s.kind != ScenarioKind::outdoor_mu && s.kind != ScenarioKind::indoor_mu)
            throw config_error("mumimo: scenario kind must be outdoor_mu or indoor_mu");
        if (!beams.empty())
            s.codebook_beams = beams;
        for (int nb : s.codebook_beams)
            if (nb != 8 && nb != 16 && nb != 32 && nb != 64)
                throw config_error("mumimo: beam count must be 8, 16, 32 or 64");

        const auto src = codebook_sources({}, 0.5, o.workers);
        Run run("mumimo", o, scenario_hash(s), s.seed);
        json summary;
        summary["scenario"] = to_string(s.kind);
        summary["scenario_hash"] = scenario_hash(s);
        summary["seed"] = s.seed;
        summary["runs"] = json::array();

        auto emit = [&](const ThroughputReport &r, const std::string &stem)
        {
            finite_or_throw(r.mean(), "mean throughput");
            {
                auto f = run.open(stem + ".csv");
                f << "# manifest=" << run.manifest_name() << " run_id=" << run.run_id() << '\n';
                write_report_csv(f, r);
            }
            {
                std::ostringstream os;
                write_report_json(os, r);
                run.write_json(stem + ".json", json::parse(os.str()));
            }
            summary["runs"].push_back({{"lens", r.lens}, {"beams", r.beams}, {"tx_height_m", r.tx_height},
                                       {"mean_bps", r.mean()}, {"median_bps", r.median()}, {"max_bps", r.max()},
                                       {"file", stem + ".csv"}});
            std::cout << (r.lens ? "lens   " : "no-lens") << " Nb=" << r.beams << " h=" << r.tx_height
                      << " m: mean " << r.mean() / 1e9 << " Gbps, max " << r.max() / 1e9 << " Gbps\n";
        };

        if (s.kind == ScenarioKind::outdoor_mu)
        {
            for (double h : s.tx_heights)
            {
                auto sh = with_tx_height(s, h);
                for (int nb : s.codebook_beams)
                    for (bool lens : {true, false})
                    {
                        auto cb = make_system_codebook(nb, lens, src, s.codebook_span_deg);
                        emit(run_outdoor_mu(sh, cb, o.workers), std::string("cdf_") + (lens ? "lens" : "nolens") + "_nb" +
                                                                    std::to_string(nb) + "_h" + num_tag(h) + "m");
                    }
            }
        }
        else
        {
            for (bool lens : {true, false})
            {
                auto cb = make_system_codebook(s.indoor_codebook, lens, src, s.codebook_span_deg);
                emit(run_indoor_mu(s, cb), std::string("cdf_indoor_") + (lens ? "lens" : "nolens"));
            }
        }
        run.write_json("mumimo_summary.json", summary);
        run.finish();
    }

    void cmd_linkbudget(const Options &o, LinkBudgetParams p)
    {
        auto r = link_level_budget(p);
        finite_or_throw(r.shannon_bps, "Shannon rate");
        json j;
        j["bandwidth_hz"] = p.bandwidth;
        j["distance_m"] = p.distance;
        j["tx_power_dbm"] = p.tx_power_dbm;
        j["horn_gain_dbi"] = p.horn_gain_dbi;
        j["rx_gain_dbi"] = p.rx_gain_dbi;
        j["noise_figure_db"] = p.noise_figure_db;
        j["fspl_db"] = r.fspl_db;
        j["snr_db"] = r.snr_db;
        j["shannon_bps"] = r.shannon_bps;
        j["qam64_ceiling_bps"] = r.ceiling_bps;
        j["measured_bps"] = r.measured_bps;
        j["measured_min_snr_db"] = r.measured_min_snr_db;
        j["bound_holds"] = r.shannon_bps >= r.measured_bps && r.ceiling_bps >= r.measured_bps;
        Run run("linkbudget", o, digest_hex(j.dump()), o.seed.value_or(7));
        run.write_json("linkbudget.json", j);
        std::cout << "FSPL " << r.fspl_db << " dB, SNR " << r.snr_db << " dB, Shannon " << r.shannon_bps / 1e6
                  << " Mbps, 64-QAM ceiling " << r.ceiling_bps / 1e9 << " Gbps\n";
        run.finish();
    }

    void cmd_calibrate(const Options &o, double resolution)
    {
        CalibrationTargets t;
        t.grid_resolution_deg = resolution;
        auto r = calibrate(t, o.workers);
        json j;
        j["model"] = {{"element_q", r.patch.q},
                      {"mula_effective_radius_m", r.model.mula_effective_radius},
                      {"mula_efficiency", r.model.mula_efficiency},
                      {"sula_effective_radius_m", r.model.sula_effective_radius},
                      {"sula_wall_efficiency", r.model.sula_wall_efficiency},
                      {"aperture_pitch_wavelengths", r.model.aperture_pitch}};
        j["nlos_excess_loss_db"] = r.excess_loss_db;
        j["achieved"] = {{"mula_peak_dbi", r.mula_peak_dbi},
                         {"mula_hpbw_deg", r.mula_hpbw_deg},
                         {"sula_unit_hpbw_deg", r.sula_unit_hpbw_deg},
                         {"sula_peak_dbi", r.sula_peak_dbi},
                         {"no_lens_patch_dbi", r.no_lens_patch_dbi},
                         {"no_lens_sula_dbi", r.no_lens_sula_dbi}};
        Run run("calibrate", o, digest_hex(j["model"].dump()), o.seed.value_or(7));
        run.write_json("calibration.json", j);
        std::cout << std::setprecision(12) << "q " << r.patch.q << "\nMULA r_eff " << r.model.mula_effective_radius
                  << " m, efficiency " << r.model.mula_efficiency << "\nSULA r_eff " << r.model.sula_effective_radius
                  << " m, wall efficiency " << r.model.sula_wall_efficiency << "\nNLoS excess loss " << r.excess_loss_db
                  << " dB\n";
        run.finish();
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"lensarray: mmWave lens-embedded antenna array simulator"};
    app.require_subcommand(1);
    Options o;
    unsigned long long seed = 7;
    auto add_common = [&](CLI::App *c)
    {
        c->add_option("--config", o.config, "Config file (JSON)");
        c->add_option("--seed", seed, "Random seed (default: the config's, else 7)");
        c->add_option("--workers", o.workers, "Worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
        c->add_option("--out", o.out, std::string("Output directory (else $") + out_env + ", else ./out)");
    };

    int port = 1;
    auto *pat = app.add_subcommand("pattern", "Radiation pattern of one port");
    add_common(pat);
    pat->add_option("--port", port, "Port, 1-based");

    auto *sm = app.add_subcommand("steermap", "Peak direction, gain and HPBW of every port");
    add_common(sm);

    int which = 0;
    bool lens = false, no_lens = false;
    auto *bh = app.add_subcommand("backhaul", "Point-to-point backhaul between two 2x2 SULAs");
    add_common(bh);
    bh->add_option("--case", which, "1: 450 m NLoS, 2: 636 m LoS")->check(CLI::IsMember({1, 2}));
    bh->add_flag("--lens", lens, "Report the lens link");
    bh->add_flag("--no-lens", no_lens, "Report the no-lens link");

    std::string scen;
    std::vector<int> beams;
    auto *mu = app.add_subcommand("mumimo", "Multi-user MIMO throughput CDFs");
    add_common(mu);
    mu->add_option("--scenario", scen, "outdoor or indoor, when no --config is given");
    mu->add_option("--beams", beams, "Codebook sizes, e.g. 8,16,32,64")->delimiter(',');

    LinkBudgetParams lb;
    auto *lk = app.add_subcommand("linkbudget", "Link-level budget of the 1x1 SULA against a horn");
    add_common(lk);
    lk->add_option("--horn-gain", lb.horn_gain_dbi, "Horn gain [dBi]");
    lk->add_option("--distance", lb.distance, "Link length [m]");
    lk->add_option("--bandwidth", lb.bandwidth, "Bandwidth [Hz]");
    lk->add_option("--tx-power", lb.tx_power_dbm, "Tx power [dBm]");

    double cal_res = 1.0;
    auto *cal = app.add_subcommand("calibrate", "Fit the surrogate model parameters");
    add_common(cal);
    cal->add_option("--resolution", cal_res, "Angular grid step [deg]");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    for (auto *c : {pat, sm, bh, mu, lk, cal})
        if (c->parsed() && c->count("--seed"))
            o.seed = seed;

    try
    {
        if (pat->parsed())
            cmd_pattern(o, port);
        else if (sm->parsed())
            cmd_steermap(o);
        else if (bh->parsed())
            cmd_backhaul(o, which, lens, no_lens);
        else if (mu->parsed())
            cmd_mumimo(o, scen, beams);
        else if (lk->parsed())
        {
            if (!o.config.empty())
                throw config_error("linkbudget: takes flags, not a config file");
            cmd_linkbudget(o, lb);
        }
        else if (cal->parsed())
            cmd_calibrate(o, cal_res);
    }
    catch (const config_error &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    catch (const contract_violation &e)
    {
        std::cerr << "numerical contract violated: " << e.what() << "\n";
        return 3;
    }
    catch (const domain_error &e)
    {
        std::cerr << "numerical contract violated: " << e.what() << "\n";
        return 3;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
