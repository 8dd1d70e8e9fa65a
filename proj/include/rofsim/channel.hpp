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

#pragma once

#include "rofsim/rng.hpp"
#include "rofsim/types.hpp"

#include <array>
#include <vector>

namespace rofsim {

// Narrowband line-of-sight propagation between radio heads and terminals.
// Complex link gains act on the complex envelope; the carrier phase rides in
// the gain, so envelopes stay sample-aligned across links.

struct Geometry {
    std::vector<std::array<double, 2>> rrh_xy;
    std::vector<std::array<double, 2>> ue_xy;
};

// radio heads on a line with 1 m pitch, terminals on a parallel line 2 m away
Geometry default_geometry(int n_rrh, int n_ue);

// free-space gain (lambda / 4 pi d) with the carrier phase of the path
cplx los_gain(double distance_m, double carrier_hz);

// n_rrh x n_ue link matrix for a geometry
MatXcd los_matrix(const Geometry& g, double carrier_hz);

// symmetric radio-head to radio-head link matrix (diagonal zero)
MatXcd mutual_los_matrix(const Geometry& g, double carrier_hz);

// Per-branch hardware gains: magnitude log-uniform within +-spread_db,
// phase uniform. Models non-reciprocal transmit / receive electronics.
ArrXcd hardware_gains(int n, double spread_db, Rng& rng);

// out[r] = sum_u h(r, u) * x[u]; all inputs must share rate and length
std::vector<BasebandSignal> mix_links(const MatXcd& h, const std::vector<BasebandSignal>& x);

// complex white noise of the given total power added in place
void add_awgn(BasebandSignal& x, double noise_power_dbm, Rng& rng);

// Sum of desired and interferer after rescaling the interferer so the
// measured power ratio equals sir_db. Signals must share rate and length.
PassbandSignal add_interference(const PassbandSignal& desired, const PassbandSignal& interferer,
                                double sir_db);

}  // namespace rofsim
