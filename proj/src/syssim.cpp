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

#include "lensarray/syssim.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include "json.hpp"

namespace lensarray
{
    double shannon(double sinr, double bandwidth)
    {
        if (sinr < 0.0 || std::isnan(sinr))
            throw domain_error("shannon: SINR must be non-negative");
        if (!(bandwidth > 0.0))
            throw domain_error("shannon: bandwidth must be positive");
        return bandwidth * std::log2(1.0 + sinr);
    }

    double sinr_for_efficiency(double bits_per_hz)
    {
        if (bits_per_hz < 0.0)
            throw domain_error("sinr_for_efficiency: efficiency must be non-negative");
        return std::exp2(bits_per_hz) - 1.0;
    }

    BackhaulResult backhaul_link(const Scenario &s, double g)
    {
        const auto rc = make_constants(s.frequency);
        BackhaulResult r;
        r.path_loss_db = fspl(s.link_distance, rc) + s.excess_loss_db;
        r.received_dbm = s.tx_power_dbm + 2.0 * g - r.path_loss_db;
        r.noise_dbm = noise_power_dbm(s.bandwidth, s.noise_figure_db);
        r.snr_db = r.received_dbm - r.noise_dbm;
        r.throughput_bps = shannon(linear_from_db(r.snr_db), s.bandwidth);
        return r;
    }

    double backhaul_throughput(const Scenario &s, bool lens, const BackhaulGains &g)
    {
        return backhaul_link(s, lens ? g.lens_dbi : g.no_lens_dbi).throughput_bps;
    }

    double calibrate_excess_loss(const Scenario &s, double g, double target_bps)
    {
        if (!(target_bps > 0.0))
            throw domain_error("calibrate_excess_loss: target must be positive");
        Scenario c = s;
        c.excess_loss_db = 0.0;
        c.los = true;
        const auto free = backhaul_link(c, g);
        const double need = db_from_linear(sinr_for_efficiency(target_bps / s.bandwidth));
        const double x = free.snr_db - need;
        if (x < 0.0)
            throw domain_error("calibrate_excess_loss: target exceeds the free-space throughput");
        return x;
    }

    // ---- reports ----

    std::vector<double> ThroughputReport::samples() const
    {
        std::vector<double> v;
        for (const auto &t : trials)
            for (const auto &u : t.users)
                v.push_back(u.throughput_bps);
        return v;
    }

    static std::vector<std::pair<double, double>> ecdf(std::vector<double> v)
    {
        std::sort(v.begin(), v.end());
        std::vector<std::pair<double, double>> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            out[i] = {v[i], double(i + 1) / double(v.size())};
        return out;
    }

    std::vector<std::pair<double, double>> ThroughputReport::cdf() const
    {
        return ecdf(samples());
    }

    std::vector<std::pair<double, double>> ThroughputReport::cdf_trial_means() const
    {
        std::vector<double> m;
        for (const auto &t : trials)
        {
            double s = 0.0;
            for (const auto &u : t.users)
                s += u.throughput_bps;
            m.push_back(t.users.empty() ? 0.0 : s / double(t.users.size()));
        }
        return ecdf(m);
    }

    double ThroughputReport::mean() const
    {
        auto v = samples();
        if (v.empty())
            return 0.0;
        double s = 0.0;
        for (double x : v)
            s += x;
        return s / double(v.size());
    }

    double ThroughputReport::median() const
    {
        auto v = samples();
        if (v.empty())
            return 0.0;
        std::sort(v.begin(), v.end());
        std::size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    }

    double ThroughputReport::max() const
    {
        auto v = samples();
        return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
    }

    void write_report_json(std::ostream &os, const ThroughputReport &r)
    {
        using nlohmann::json;
        json j;
        j["scenario_hash"] = r.scenario_hash;
        j["scenario"] = r.scenario_name;
        j["seed"] = r.seed;
        j["lens"] = r.lens;
        j["beams"] = r.beams;
        j["tx_height_m"] = r.tx_height;
        j["mean_bps"] = r.mean();
        j["median_bps"] = r.median();
        j["max_bps"] = r.max();
        auto trials = json::array();
        for (const auto &t : r.trials)
        {
            auto users = json::array();
            for (const auto &u : t.users)
            {
                json ju = {{"user", u.user},
                           {"beam", u.beam},
                           {"signal_dbm", u.signal_dbm},
                           {"sinr_db", u.sinr_db},
                           {"throughput_bps", u.throughput_bps}};
                if (std::isfinite(u.interference_dbm))
                    ju["interference_dbm"] = u.interference_dbm;
                else
                    ju["interference_dbm"] = nullptr;
                users.push_back(ju);
            }
            trials.push_back({{"trial", t.trial}, {"users", users}});
        }
        j["trials"] = trials;
        auto c = json::array();
        for (const auto &[x, f] : r.cdf())
            c.push_back({x, f});
        j["cdf"] = c;
        os << j.dump(1) << '\n';
    }

    void write_report_csv(std::ostream &os, const ThroughputReport &r, bool trial_means)
    {
        os << "# scenario_hash=" << r.scenario_hash << " seed=" << r.seed << " lens=" << (r.lens ? 1 : 0)
           << " beams=" << r.beams << " tx_height_m=" << r.tx_height << '\n';
        os << "throughput_bps,cdf\n";
        os << std::setprecision(17);
        for (const auto &[x, f] : trial_means ? r.cdf_trial_means() : r.cdf())
            os << x << ',' << f << '\n';
    }

    // ---- Monte Carlo ----

    static std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial)
    {
        return splitmix64(splitmix64(seed) ^ (trial * 0xd1b54a32d192ed03ULL + 1));
    }

    // Uniform integer in [0, n) by rejection, identical on every platform
    static std::uint64_t bounded(std::mt19937_64 &g, std::uint64_t n)
    {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do
            x = g();
        while (x >= limit);
        return x % n;
    }

    std::vector<double> mu_sinr(const std::vector<std::vector<double>> &rx, double noise)
    {
        std::vector<double> out(rx.size());
        for (std::size_t i = 0; i < rx.size(); ++i)
        {
            if (rx[i].size() != rx.size())
                throw domain_error("mu_sinr: power matrix must be square");
            double intf = 0.0;
            for (std::size_t j = 0; j < rx.size(); ++j)
                if (j != i)
                    intf += rx[i][j];
            out[i] = rx[i][i] / (intf + noise);
        }
        return out;
    }

    Scenario with_tx_height(const Scenario &s, double h)
    {
        Scenario c = s;
        c.tx_position[2] = h;
        return c;
    }

    static double dbm_of(double mw)
    {
        return mw > 0.0 ? 10.0 * std::log10(mw) : -std::numeric_limits<double>::infinity();
    }

    ThroughputReport run_outdoor_mu(const Scenario &s, const BeamCodebook &cb, int workers)
    {
        s.validate();
        const auto users = drop_users(s);
        const std::size_t K = std::size_t(s.users_per_trial);
        if (users.size() < K)
            throw domain_error("run_outdoor_mu: fewer users than users per trial");
        const auto rc = make_constants(s.frequency);
        const std::size_t B = std::size_t(cb.beams);

        const double p_beam = s.tx_power_dbm - (s.equal_power_split ? db_from_linear(double(K)) : 0.0);
        const double bw = s.partitioned_bandwidth ? s.bandwidth / double(K) : s.bandwidth;
        const double noise = linear_from_db(noise_power_dbm(bw, s.noise_figure_db));

        // Received power [mW] of every user from every beam, and each user's best beam
        std::vector<double> rx(users.size() * B);
        std::vector<int> best(users.size());
        for (std::size_t u = 0; u < users.size(); ++u)
        {
            double az, el;
            tx_angles(s, users[u], az, el);
            const Link l{s.tx_position, users[u], true, 0.0};
            const double loss = fspl(l.distance(), rc) + blockage_loss_db(s, users[u][0], users[u][1]);
            double g_best = -std::numeric_limits<double>::infinity();
            for (std::size_t b = 0; b < B; ++b)
            {
                const double g = cb.gain_dbi(int(b), az, el + s.downtilt_deg);
                rx[u * B + b] = linear_from_db(p_beam + g + s.rx_gain_dbi - loss);
                if (g > g_best)
                {
                    g_best = g;
                    best[u] = int(b);
                }
            }
        }

        ThroughputReport rep;
        rep.scenario_hash = scenario_hash(s);
        rep.scenario_name = s.name;
        rep.seed = s.seed;
        rep.lens = cb.lens;
        rep.beams = cb.beams;
        rep.tx_height = s.tx_position[2];
        rep.trials.resize(std::size_t(s.trials));

        auto run_trial = [&](std::size_t t)
        {
            std::mt19937_64 g(trial_seed(s.seed, t));
            std::vector<std::size_t> idx(users.size());
            std::iota(idx.begin(), idx.end(), std::size_t(0));
            for (std::size_t i = 0; i < K; ++i)
                std::swap(idx[i], idx[i + bounded(g, idx.size() - i)]);

            TrialResult tr;
            tr.trial = int(t);
            std::vector<std::vector<double>> P(K, std::vector<double>(K, 0.0));
            for (std::size_t i = 0; i < K; ++i)
                for (std::size_t m = 0; m < K; ++m)
                    if (m == i || !s.partitioned_bandwidth)
                        P[i][m] = rx[idx[i] * B + std::size_t(best[idx[m]])];
            const auto sinr = mu_sinr(P, noise);
            for (std::size_t i = 0; i < K; ++i)
            {
                UserResult ur;
                ur.user = idx[i];
                ur.beam = best[idx[i]];
                double intf = 0.0;
                for (std::size_t m = 0; m < K; ++m)
                    if (m != i)
                        intf += P[i][m];
                ur.signal_dbm = dbm_of(P[i][i]);
                ur.interference_dbm = dbm_of(intf);
                ur.sinr_db = db_from_linear(sinr[i]);
                ur.throughput_bps = shannon(sinr[i], bw);
                tr.users.push_back(ur);
            }
            rep.trials[t] = std::move(tr);
        };

        const std::size_t T = rep.trials.size();
        const int w = std::max(1, std::min(resolve_workers(workers), int(T)));
        std::vector<std::thread> pool;
        for (int k = 0; k < w; ++k)
            pool.emplace_back([&, k] {
                for (std::size_t t = std::size_t(k); t < T; t += std::size_t(w))
                    run_trial(t);
            });
        for (auto &th : pool)
            th.join();
        return rep;
    }

    ThroughputReport run_indoor_mu(const Scenario &s, const BeamCodebook &cb)
    {
        s.validate();
        if (s.stream_directions_deg.empty())
            throw domain_error("run_indoor_mu: no stream directions");
        const auto users = drop_users(s);
        const auto rc = make_constants(s.frequency);
        const std::size_t M = s.stream_directions_deg.size();
        const double p_stream = s.tx_power_dbm - (s.equal_power_split ? db_from_linear(double(M)) : 0.0);
        const double bw = s.partitioned_bandwidth ? s.bandwidth / double(M) : s.bandwidth;
        const double noise = linear_from_db(noise_power_dbm(bw, s.noise_figure_db));

        ThroughputReport rep;
        rep.scenario_hash = scenario_hash(s);
        rep.scenario_name = s.name;
        rep.seed = s.seed;
        rep.lens = cb.lens;
        rep.beams = cb.beams;
        rep.tx_height = s.tx_position[2];
        TrialResult tr;
        std::vector<double> p(M);
        for (std::size_t u = 0; u < users.size(); ++u)
        {
            double az, el;
            tx_angles(s, users[u], az, el);
            const Link l{s.tx_position, users[u], true, 0.0};
            const double loss = fspl(l.distance(), rc) + blockage_loss_db(s, users[u][0], users[u][1]);
            std::size_t serve = 0;
            for (std::size_t m = 0; m < M; ++m)
            {
                p[m] = linear_from_db(p_stream + cb.gain_dbi_dir(s.stream_directions_deg[m], az, el + s.downtilt_deg) +
                                      s.rx_gain_dbi - loss);
                if (p[m] > p[serve])
                    serve = m;
            }
            double intf = 0.0;
            if (!s.partitioned_bandwidth)
                for (std::size_t m = 0; m < M; ++m)
                    if (m != serve)
                        intf += p[m];
            const double sinr = p[serve] / (intf + noise);
            UserResult ur;
            ur.user = u;
            ur.beam = int(serve);
            ur.signal_dbm = dbm_of(p[serve]);
            ur.interference_dbm = dbm_of(intf);
            ur.sinr_db = db_from_linear(sinr);
            ur.throughput_bps = shannon(sinr, bw);
            tr.users.push_back(ur);
        }
        rep.trials.push_back(std::move(tr));
        return rep;
    }

    LinkBudgetResult link_level_budget(const LinkBudgetParams &p)
    {
        const auto rc = make_constants(p.frequency);
        LinkBudgetResult r;
        r.fspl_db = fspl(p.distance, rc);
        r.snr_db = p.tx_power_dbm + p.horn_gain_dbi + p.rx_gain_dbi - r.fspl_db -
                   noise_power_dbm(p.bandwidth, p.noise_figure_db);
        r.shannon_bps = shannon(linear_from_db(r.snr_db), p.bandwidth);
        r.ceiling_bps = 6.0 * p.bandwidth;
        r.measured_min_snr_db = db_from_linear(sinr_for_efficiency(r.measured_bps / p.bandwidth));
        return r;
    }
}
