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

#ifndef LENSARRAY_BEAMSTEER_HPP
#define LENSARRAY_BEAMSTEER_HPP

#include "lensarray/array.hpp"
#include "lensarray/radiation.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace lensarray
{
    // Map has no usable spread of beam directions
    class no_steering : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    enum class SteeringPlane
    {
        vertical,  // y-z plane, angle atan2(v, w)
        horizontal // x-z plane, angle atan2(u, w)
    };

    struct SteeringEntry
    {
        int port = 0;
        Direction peak;
        double gain_dbi = 0.0;
        double hpbw_deg = 0.0;   // full width, vertical cut; NaN when unbounded
        double scan_deg = 0.0;   // peak angle in the steering plane
    };

    struct SteeringMap
    {
        std::vector<SteeringEntry> entries; // ordered by port
        SteeringPlane plane = SteeringPlane::vertical;
        std::string config_hash;
        bool degenerate = false; // all ports point the same way

        const SteeringEntry &entry(int port) const;
    };

    // Deterministic digest of a configuration, hex string
    std::string config_hash(const ArrayConfig &config);

    SteeringMap build_steering_map(const ArrayConfig &config, const AngularGrid &grid, int workers = 1);

    // Port whose steering angle is closest to the target; ties go to the lower index.
    // Targets past the extremes clamp to the extreme port. Throws no_steering on a degenerate map.
    int select_port(const SteeringMap &map, double target_deg);

    void write_steering_json(std::ostream &os, const SteeringMap &map);

    // RF switch between the beamformer and the feed ports
    struct SwitchModel
    {
        double raw_loss_db = 15.0;
        double compensation_db = 15.0; // PA gain behind the switch
        double delay_s = 0.0;

        double net_loss_db() const { return raw_loss_db - compensation_db; }
        void validate() const;
    };

    // Tabulated angular shape in dB relative to its peak, offsets in degrees
    struct CutShape
    {
        std::vector<double> offset_deg;
        std::vector<double> rel_db;

        // Linear interpolation, -300 dB outside the tabulated range
        double at(double offset) const;
    };

    // Recentre a pattern cut on its maximum
    CutShape recentre_cut(const std::vector<double> &theta_deg, const std::vector<double> &values_db);

    // Multi-beam codebook over the horizontal sector of a virtual 1xN MULA. Every beam shares
    // one shape: the scan-plane cut of the template pattern with its main lobe rescaled to the
    // codebook width (sidelobe envelope kept, shifted outward), times the elevation cut of the
    // source pattern. Gain follows beam-solid-angle conservation from the source peak.
    struct BeamCodebook
    {
        int beams = 0;
        std::vector<double> directions_deg; // horizontal angle of each beam from boresight
        double half_width_deg = 0.0;        // codebook -3 dB half width
        double source_peak_dbi = 0.0;
        double template_half_width_deg = 0.0;
        double peak_gain_dbi = 0.0;         // realized beam peak, after switch loss
        CutShape scan;                      // template horizontal cut
        CutShape elevation;                 // source vertical cut
        double null_lo = 0.0, null_hi = 0.0; // first nulls of the template main lobe
        bool lens = true;

        // Beam shape in dB relative to the beam peak, offset in the scan plane and elevation
        double shape_db(double scan_offset_deg, double elevation_deg) const;

        // Realized gain of beam b toward (horizontal angle, elevation) in the Tx frame
        double gain_dbi(int b, double azimuth_deg, double elevation_deg) const;
        double gain_dbi_dir(double beam_dir_deg, double azimuth_deg, double elevation_deg) const;

        // (1/4pi) integral of the beam gain over the sphere
        double power_fraction(int b) const;

        // Full -3 dB width in the scan plane, measured on the synthesized shape
        double measured_hpbw_deg() const;
    };

    double codebook_half_width(int beams); // 10.5, 5, 2.5, 1.25 deg
    constexpr double codebook_span_deg = 75.0;

    struct CodebookOptions
    {
        const RadiationPattern *scan_template = nullptr; // defaults to the source
        double span_deg = codebook_span_deg;
        SwitchModel switch_model;
        bool lens = true; // label carried into reports
    };

    BeamCodebook make_codebook(int beams, const RadiationPattern &source, const CodebookOptions &opt = {});

    // Reference patterns for the system-level codebooks: port 11 of the 4x4 MULA with the
    // largest lens, and the same port without the lens
    struct CodebookSources
    {
        RadiationPattern lens;
        RadiationPattern no_lens;
    };
    CodebookSources codebook_sources(const ModelParams &model = {}, double resolution_deg = 0.5, int workers = 1);

    // The no-lens codebook borrows the lens scan shape so both differ only in source pattern
    BeamCodebook make_system_codebook(int beams, bool lens, const CodebookSources &src,
                                      double span_deg = codebook_span_deg, const SwitchModel &sw = {});
}

#endif
