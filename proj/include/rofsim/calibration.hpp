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

namespace rofsim {

// Over-the-air reciprocity calibration between radio heads. Each head sounds
// every other; with transmit electronics t_i, receive electronics r_j and a
// reciprocal path h_ij, the observation is y(i, j) = t_i h_ij r_j + noise.
// Coefficients c with c_i t_i r_j = c_j t_j r_i line the heads up for joint
// downlink transmission from uplink estimates: c is proportional to r / t.

// y(i, j): head i transmitting, head j receiving; diagonal ignored
MatXcd simulate_sounding(const ArrXcd& tx_gains, const ArrXcd& rx_gains,
                         const MatXcd& h_mutual, double noise_power_dbm, Rng& rng);

struct CalibrationResult {
    ArrXcd coeffs;  // first entry normalized to 1
    double cost = 0.0;
    int iterations = 0;
};

// Minimizes sum_{i<j} |c_i y_ij - c_j y_ji|^2 on the power sphere: a
// smallest-eigenvector start refined by projected gradient steps.
CalibrationResult calibrate_reciprocity(const MatXcd& y, int max_iter = 10000,
                                        double tol = 1e-10);

}  // namespace rofsim
