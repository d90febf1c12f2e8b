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

#ifndef LENSARRAY_SYSSIM_HPP
#define LENSARRAY_SYSSIM_HPP

#include "lensarray/beamsteer.hpp"
#include "lensarray/channel.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace lensarray
{
    // B log2(1 + sinr), sinr linear >= 0
    double shannon(double sinr, double bandwidth);

    // Linear SINR needed for a spectral efficiency in bit/s/Hz
    double sinr_for_efficiency(double bits_per_hz);

    // Backhaul between two 2x2 SULAs with perfect beam alignment
    struct BackhaulGains
    {
        double lens_dbi = 25.0;    // 2x2 SULA peak, each end
        double no_lens_dbi = 10.95; // bare 2x2 patch feed of one cube, each end
    };

    struct BackhaulResult
    {
        double snr_db = 0.0;
        double received_dbm = 0.0;
        double noise_dbm = 0.0;
        double path_loss_db = 0.0;
        double throughput_bps = 0.0;
    };

    BackhaulResult backhaul_link(const Scenario &s, double gain_each_end_dbi);
    double backhaul_throughput(const Scenario &s, bool lens, const BackhaulGains &g);

    // Excess loss that makes the lens backhaul reach the target throughput (closed form)
    double calibrate_excess_loss(const Scenario &s, double gain_each_end_dbi, double target_bps);

    struct UserResult
    {
        std::size_t user = 0;
        int beam = 0;
        double signal_dbm = 0.0;
        double interference_dbm = 0.0; // -inf when no interferer
        double sinr_db = 0.0;
        double throughput_bps = 0.0;
    };

    struct TrialResult
    {
        int trial = 0;
        std::vector<UserResult> users;
    };

    struct ThroughputReport
    {
        std::string scenario_hash;
        std::string scenario_name;
        std::uint64_t seed = 0;
        bool lens = true;
        int beams = 0;
        double tx_height = 0.0;
        std::vector<TrialResult> trials;

        // Per-user throughputs in trial order
        std::vector<double> samples() const;
        // Sorted per-user throughputs with cdf values i/n, i = 1..n
        std::vector<std::pair<double, double>> cdf() const;
        // Same over per-trial mean throughputs
        std::vector<std::pair<double, double>> cdf_trial_means() const;
        double mean() const;
        double median() const;
        double max() const;
    };

    void write_report_json(std::ostream &os, const ThroughputReport &r);
    void write_report_csv(std::ostream &os, const ThroughputReport &r, bool trial_means = false);

    // Linear SINR of K co-scheduled users. rx_mw[i][j] is the power user i receives from the
    // beam serving user j; interference and noise add in linear power.
    std::vector<double> mu_sinr(const std::vector<std::vector<double>> &rx_mw, double noise_mw);

    // Stream seed for one trial, independent of evaluation order
    std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

    // Outdoor MU-MIMO: per trial, users_per_trial distinct users drawn uniformly, each served by
    // its highest-gain codebook beam. Tx height comes from the scenario Tx position.
    ThroughputReport run_outdoor_mu(const Scenario &s, const BeamCodebook &codebook, int workers = 1);

    // Indoor: fixed streams, every lattice user evaluated once
    ThroughputReport run_indoor_mu(const Scenario &s, const BeamCodebook &codebook);

    // Scenario copy with the Tx at another height
    Scenario with_tx_height(const Scenario &s, double h);

    struct LinkBudgetParams
    {
        double bandwidth = 800e6;
        double distance = 0.7;
        double tx_power_dbm = 0.0;
        double horn_gain_dbi = 20.0;
        double rx_gain_dbi = 19.0; // SULA 1x1 peak
        double noise_figure_db = 5.0;
        double frequency = default_frequency;
    };

    struct LinkBudgetResult
    {
        double fspl_db = 0.0;
        double snr_db = 0.0;
        double shannon_bps = 0.0;
        double ceiling_bps = 0.0;   // 64-QAM, 6 bit/s/Hz
        double measured_bps = 2474e6;
        double measured_min_snr_db = 0.0; // SNR a Shannon-bound link needs for the measured rate
    };

    LinkBudgetResult link_level_budget(const LinkBudgetParams &p);
}

#endif
