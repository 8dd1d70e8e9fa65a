// SPDX-License-Identifier: Apache-2.0
//
// rofsim: link-level simulation of TDD distributed MIMO over a one-bit
// radio-over-fiber fronthaul.
// Copyright 2026 the rofsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// -------------------------------------------------------------------------

#include "rofsim/channel.hpp"

#include "rofsim/sigcore.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rofsim {

namespace {
constexpr double speed_of_light = 299792458.0;
}

Geometry default_geometry(int n_rrh, int n_ue) {
    if (n_rrh < 1 || n_ue < 1) throw std::invalid_argument("default_geometry: empty array");
    Geometry g;
    for (int i = 0; i < n_rrh; ++i) g.rrh_xy.push_back({static_cast<double>(i), 0.0});
    // terminals straddle the array midline so no one sits at an aperture edge
    const double mid = 0.5 * (n_rrh - 1);
    for (int j = 0; j < n_ue; ++j)
        g.ue_xy.push_back({mid + (j - 0.5 * (n_ue - 1)), 2.0});
    return g;
}

cplx los_gain(double distance_m, double carrier_hz) {
    if (distance_m <= 0.0) throw std::invalid_argument("los_gain: distance must be positive");
    const double lambda = speed_of_light / carrier_hz;
    const double mag = lambda / (4.0 * std::numbers::pi * distance_m);
    const double phase = -2.0 * std::numbers::pi * distance_m / lambda;
    return cplx(mag * std::cos(phase), mag * std::sin(phase));
}

MatXcd los_matrix(const Geometry& g, double carrier_hz) {
    MatXcd h(g.rrh_xy.size(), g.ue_xy.size());
    for (size_t r = 0; r < g.rrh_xy.size(); ++r)
        for (size_t u = 0; u < g.ue_xy.size(); ++u) {
            const double dx = g.rrh_xy[r][0] - g.ue_xy[u][0];
            const double dy = g.rrh_xy[r][1] - g.ue_xy[u][1];
            h(r, u) = los_gain(std::hypot(dx, dy), carrier_hz);
        }
    return h;
}

MatXcd mutual_los_matrix(const Geometry& g, double carrier_hz) {
    const size_t n = g.rrh_xy.size();
    MatXcd h = MatXcd::Zero(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            const double dx = g.rrh_xy[i][0] - g.rrh_xy[j][0];
            const double dy = g.rrh_xy[i][1] - g.rrh_xy[j][1];
            h(i, j) = los_gain(std::hypot(dx, dy), carrier_hz);
            h(j, i) = h(i, j);
        }
    return h;
}

ArrXcd hardware_gains(int n, double spread_db, Rng& rng) {
    ArrXcd g(n);
    for (int i = 0; i < n; ++i) {
        const double mag_db = (2.0 * rng.uniform() - 1.0) * spread_db;
        const double phase = 2.0 * std::numbers::pi * rng.uniform();
        const double mag = std::pow(10.0, mag_db / 20.0);
        g[i] = cplx(mag * std::cos(phase), mag * std::sin(phase));
    }
    return g;
}

std::vector<BasebandSignal> mix_links(const MatXcd& h, const std::vector<BasebandSignal>& x) {
    if (static_cast<Eigen::Index>(x.size()) != h.cols())
        throw std::invalid_argument("mix_links: input count != matrix columns");
    for (const auto& s : x)
        if (s.samples.size() != x[0].samples.size() || s.rate != x[0].rate)
            throw std::invalid_argument("mix_links: inputs must share rate and length");

    std::vector<BasebandSignal> out(h.rows());
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
        out[r].rate = x[0].rate;
        out[r].samples = ArrXcd::Zero(x[0].samples.size());
        for (Eigen::Index u = 0; u < h.cols(); ++u)
            out[r].samples += h(r, u) * x[u].samples;
    }
    return out;
}

void add_awgn(BasebandSignal& x, double noise_power_dbm, Rng& rng) {
    const double sigma = dbm_to_vrms(noise_power_dbm);
    x.samples += sigma * rng.cgaussian_vector(x.samples.size());
}

PassbandSignal add_interference(const PassbandSignal& desired, const PassbandSignal& interferer,
                                double sir_db) {
    if (desired.rate != interferer.rate || desired.samples.size() != interferer.samples.size())
        throw std::invalid_argument("add_interference: signals must share rate and length");
    const double p_des = mean_square(desired.samples);
    const double p_int = mean_square(interferer.samples);
    if (p_int <= 0.0 && std::isfinite(sir_db))
        throw std::invalid_argument("add_interference: zero-power interferer with finite sir");
    PassbandSignal out;
    out.rate = desired.rate;
    if (p_int <= 0.0 || !std::isfinite(sir_db)) {
        out.samples = desired.samples;
        return out;
    }
    const double scale = std::sqrt(p_des / p_int * std::pow(10.0, -sir_db / 10.0));
    out.samples = desired.samples + scale * interferer.samples;
    return out;
}

}  // namespace rofsim
