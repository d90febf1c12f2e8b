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

#include "lensarray/radiation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <thread>

namespace lensarray
{
    int resolve_workers(int workers)
    {
        if (workers > 0)
            return workers;
        unsigned h = std::thread::hardware_concurrency();
        return h == 0 ? 1 : int(h);
    }

    // Runs body(i) for i in [0, n) split into contiguous blocks
    template <typename F>
    static void parallel_rows(std::size_t n, int workers, F body)
    {
        workers = std::max(1, std::min(resolve_workers(workers), int(n)));
        if (workers == 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                body(i);
            return;
        }
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + std::size_t(workers) - 1) / std::size_t(workers);
        for (int w = 0; w < workers; ++w)
        {
            std::size_t lo = std::size_t(w) * chunk, hi = std::min(n, lo + chunk);
            if (lo >= hi)
                break;
            pool.emplace_back([=] {
                for (std::size_t i = lo; i < hi; ++i)
                    body(i);
            });
        }
        for (auto &t : pool)
            t.join();
    }

    double RadiationPattern::gain_dbi(std::size_t i_theta, std::size_t i_phi) const
    {
        double g = gain[grid.index(i_theta, i_phi)];
        return g > 0.0 ? db_from_linear(g) : -300.0;
    }

    std::vector<double> RadiationPattern::cut_dbi(double phi_deg) const
    {
        std::size_t j = grid.phi_index(phi_deg);
        if (j == AngularGrid::npos)
            throw domain_error("RadiationPattern: phi " + std::to_string(phi_deg) + " is not a grid azimuth");
        std::vector<double> out(grid.n_theta());
        for (std::size_t i = 0; i < grid.n_theta(); ++i)
            out[i] = gain_dbi(i, j);
        return out;
    }

    double RadiationPattern::gain_toward(const Direction &d) const
    {
        if (!grid.is_hemisphere())
            throw domain_error("gain_toward: pattern is a single cut");
        const double u = d.u(), v = d.v(), w = d.w();
        if (w < 0.0)
            return 0.0;
        double th = rad2deg(std::acos(std::clamp(w, -1.0, 1.0)));
        double ph = rad2deg(std::atan2(v, u));
        if (ph < 0.0)
            ph += 360.0;
        if (ph >= 180.0)
        {
            ph -= 180.0;
            th = -th;
        }
        const double res = grid.resolution_deg();
        const std::size_t nt = grid.n_theta(), np = grid.n_phi();
        double ft = (th + 90.0) / res, fp = ph / res;
        auto i0 = std::min<std::size_t>(std::size_t(std::floor(ft)), nt - 2);
        auto j0 = std::min<std::size_t>(std::size_t(std::floor(fp)), np - 1);
        double a = ft - double(i0), b = fp - double(j0);

        // Azimuth index np wraps to phi = 0 with mirrored theta
        auto sample = [&](std::size_t i, std::size_t j)
        {
            if (j == np)
                return gain[grid.index(nt - 1 - i, 0)];
            return gain[grid.index(i, j)];
        };
        return (1 - a) * (1 - b) * sample(i0, j0) + a * (1 - b) * sample(i0 + 1, j0) + (1 - a) * b * sample(i0, j0 + 1) +
               a * b * sample(i0 + 1, j0 + 1);
    }

    double RadiationPattern::integrated_fraction() const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < grid.n_theta(); ++i)
        {
            double row = 0.0;
            for (std::size_t j = 0; j < grid.n_phi(); ++j)
                row += gain[grid.index(i, j)];
            s += row * grid.weight(i);
        }
        return s / (4.0 * pi);
    }

    std::vector<double> far_field_intensity(const ComplexField &aperture, double k, const AngularGrid &grid,
                                            int workers)
    {
        aperture.validate(2.0 * pi / k);
        const std::size_t nx = aperture.nx, ny = aperture.ny, np = grid.n_phi();
        std::vector<double> out(grid.size());
        const double dA = aperture.pitch * aperture.pitch;

        parallel_rows(grid.n_theta(), workers, [&](std::size_t i)
        {
            std::vector<std::complex<double>> ax(nx), ay(ny);
            for (std::size_t j = 0; j < np; ++j)
            {
                const auto d = grid.direction(i, j);
                const double u = d.u(), v = d.v();
                for (std::size_t a = 0; a < nx; ++a)
                    ax[a] = std::polar(1.0, -k * u * aperture.x(a));
                for (std::size_t b = 0; b < ny; ++b)
                    ay[b] = std::polar(1.0, -k * v * aperture.y(b));
                std::complex<double> F = 0.0;
                for (std::size_t a = 0; a < nx; ++a)
                {
                    const auto *row = &aperture.data[a * ny];
                    std::complex<double> s = 0.0;
                    for (std::size_t b = 0; b < ny; ++b)
                        s += row[b] * ay[b];
                    F += ax[a] * s;
                }
                out[grid.index(i, j)] = std::norm(F * dA);
            }
        });
        return out;
    }

    RadiationPattern far_field(const ComplexField &aperture, double k, const AngularGrid &grid, int workers)
    {
        if (!grid.is_hemisphere())
            throw domain_error("far_field: directivity normalization needs a full hemisphere grid");
        if (grid.resolution_deg() > 1.0 + 1e-12)
            throw domain_error("far_field: grid resolution must be 1 deg or finer");
        RadiationPattern p;
        p.grid = grid;
        p.gain = far_field_intensity(aperture, k, grid, workers);
        p.radiated_fraction = 1.0;
        double f = p.integrated_fraction();
        if (!(f > 0.0))
            throw domain_error("far_field: aperture radiates no power");
        for (auto &g : p.gain)
            g /= f;
        return p;
    }

    static std::string describe(const ArrayConfig &c)
    {
        std::string s = to_string(c.variant);
        if (c.lens)
            s += " D=" + std::to_string(int(std::lround(c.lens->diameter * 1e3))) + "mm";
        if (is_sula(c.variant))
            s += " units=" + std::to_string(c.sula_units);
        return s;
    }

    ApertureState lens_aperture_for_port(const ArrayConfig &config, int port)
    {
        config.validate();
        if (!config.lens)
            throw domain_error("lens_aperture_for_port: configuration has no lens");
        const auto rc = make_constants(config.frequency);
        const double pitch = config.model.aperture_pitch * rc.wavelength;
        ApertureState st;
        if (is_sula(config.variant))
        {
            auto feed = sula_subarray_pattern(config.patch, config.pitch, rc.wavenumber);
            auto ex = transform_feed_field({}, *config.lens, feed, rc.wavenumber, pitch);
            st.field = effective_aperture(ex.field, config.model.sula_effective_radius);
            st.power_scale = config.model.sula_wall_efficiency;
            st.degraded = ex.degraded;
            st.warning = ex.warning;
        }
        else
        {
            auto [dx, dy] = port_position(config, port);
            FeedPattern feed = [patch = config.patch](double, double, double w) { return element_pattern_cos(patch, w); };
            auto ex = transform_feed_field({dx, dy, 0.0}, *config.lens, feed, rc.wavenumber, pitch);
            st.field = effective_aperture(ex.field, config.model.mula_effective_radius);
            st.power_scale = ex.intercepted * config.model.mula_efficiency;
            st.degraded = ex.degraded;
            st.warning = ex.warning;
        }
        return st;
    }

    RadiationPattern pattern_for_port(const ArrayConfig &config, int port, const AngularGrid &grid, int workers)
    {
        config.validate();
        if (port < 1 || port > config.port_count())
            throw domain_error("pattern_for_port: invalid port " + std::to_string(port));
        const auto rc = make_constants(config.frequency);

        RadiationPattern p;
        if (config.lens)
        {
            auto st = lens_aperture_for_port(config, port);
            p = far_field(st.field, rc.wavenumber, grid, workers);
            for (auto &g : p.gain)
                g *= st.power_scale;
        }
        else
        {
            p.grid = grid;
            p.gain.resize(grid.size());
            FeedPattern shape;
            if (is_sula(config.variant))
                shape = sula_subarray_pattern(config.patch, config.pitch, rc.wavenumber);
            else
                shape = [patch = config.patch](double, double, double w) { return element_pattern_cos(patch, w); };
            for (std::size_t i = 0; i < grid.n_theta(); ++i)
                for (std::size_t j = 0; j < grid.n_phi(); ++j)
                {
                    auto d = grid.direction(i, j);
                    p.gain[grid.index(i, j)] = shape(d.u(), d.v(), d.w());
                }
        }

        if (is_sula(config.variant) && config.sula_units > 1)
        {
            bool square = config.variant == Variant::SULA_NxN || config.variant == Variant::NO_LENS_SULA_NxN;
            auto af = sula_concatenation_factor(square ? SulaLayout::square : SulaLayout::line, config.sula_units,
                                                config.unit_pitch, rc.wavenumber);
            const double n = config.sula_units;
            for (std::size_t i = 0; i < grid.n_theta(); ++i)
                for (std::size_t j = 0; j < grid.n_phi(); ++j)
                {
                    auto d = grid.direction(i, j);
                    p.gain[grid.index(i, j)] *= af(d.u(), d.v()) / n;
                }
        }

        p.source = describe(config);
        p.port = port;
        p.radiated_fraction = grid.is_hemisphere() ? p.integrated_fraction() : 1.0;
        return p;
    }

    double hpbw_of_cut(const std::vector<double> &th, const std::vector<double> &g)
    {
        if (th.size() != g.size() || g.size() < 3)
            throw domain_error("hpbw: cut needs at least three samples");
        const std::size_t ip = std::size_t(std::max_element(g.begin(), g.end()) - g.begin());
        const std::size_t n = g.size();
        if (ip == 0 || ip == n - 1)
            throw unbounded_beamwidth("hpbw: peak at the edge of the cut");
        const double lvl = g[ip] - 3.0;

        std::size_t j = ip;
        while (j > 0 && g[j] > lvl)
            --j;
        if (g[j] > lvl)
            throw unbounded_beamwidth("hpbw: no -3 dB crossing below the peak");
        const double a = th[j] + (lvl - g[j]) * (th[j + 1] - th[j]) / (g[j + 1] - g[j]);

        j = ip;
        while (j < n - 1 && g[j] > lvl)
            ++j;
        if (g[j] > lvl)
            throw unbounded_beamwidth("hpbw: no -3 dB crossing above the peak");
        const double b = th[j - 1] + (lvl - g[j - 1]) * (th[j] - th[j - 1]) / (g[j] - g[j - 1]);
        return b - a;
    }

    double hpbw(const RadiationPattern &pattern, double phi_deg)
    {
        return hpbw_of_cut(pattern.grid.theta_deg(), pattern.cut_dbi(phi_deg));
    }

    static std::size_t peak_index(const RadiationPattern &p)
    {
        if (p.gain.empty())
            throw domain_error("peak: empty pattern");
        const auto &g = p.grid;
        std::size_t bi = 0, bj = 0;
        double best = p.gain[0];
        for (std::size_t i = 0; i < g.n_theta(); ++i)
            for (std::size_t j = 0; j < g.n_phi(); ++j)
            {
                double v = p.gain[g.index(i, j)];
                double tol = 1e-12 * std::max(std::abs(v), std::abs(best));
                if (v > best + tol)
                {
                    best = v;
                    bi = i;
                    bj = j;
                }
                else if (std::abs(v - best) <= tol)
                {
                    double ta = std::abs(g.theta_deg()[i]), tb = std::abs(g.theta_deg()[bi]);
                    bool better = ta < tb || (ta == tb && g.phi_deg()[j] < g.phi_deg()[bj]);
                    if (better)
                    {
                        bi = i;
                        bj = j;
                        best = std::max(best, v);
                    }
                }
            }
        return g.index(bi, bj);
    }

    double peak_gain_dbi(const RadiationPattern &pattern)
    {
        return db_from_linear(pattern.gain[peak_index(pattern)]);
    }

    Direction peak_direction(const RadiationPattern &pattern)
    {
        std::size_t k = peak_index(pattern);
        const auto &g = pattern.grid;
        return g.direction(k / g.n_phi(), k % g.n_phi());
    }

    void write_pattern_csv(std::ostream &os, const RadiationPattern &pattern)
    {
        os << "theta_deg,phi_deg,gain_dbi\n";
        os << std::setprecision(10);
        const auto &g = pattern.grid;
        for (std::size_t i = 0; i < g.n_theta(); ++i)
            for (std::size_t j = 0; j < g.n_phi(); ++j)
                os << g.theta_deg()[i] << ',' << g.phi_deg()[j] << ',' << pattern.gain_dbi(i, j) << '\n';
    }
}
