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

#include "rofsim/sigcore.hpp"
#include "rofsim/types.hpp"

namespace rofsim {

// Central-unit digital processing: the fiber delivers chip streams, and all
// channel math happens here on complex envelopes and symbol matrices.

// one-bit stream to complex baseband at out_rate, centered on fc
BasebandSignal chips_to_baseband(const BinaryStream& chips, double fc, double out_rate,
                                 const ResampleSpec& spec = {});

// Least squares channel from stacked observations: y (n_rx x n_sym) against
// pilots (n_tx x n_sym); returns n_rx x n_tx.
MatXcd ls_channel_estimate(const MatXcd& y, const MatXcd& pilots);

// Zero-forcing precoder for h (n_rrh x n_ue, entries toward each terminal):
// columns steer nulls, scaled so the summed transmit power equals budget.
MatXcd zf_precoder(const MatXcd& h, double power_budget);

// Zero-forcing receive combiner, n_ue x n_rrh
MatXcd zf_combiner(const MatXcd& h);

// Scale precoder rows by the reciprocity coefficients and restore the
// original Frobenius power.
MatXcd apply_calibration(const MatXcd& precoder, const ArrXcd& coeffs);

// Centered least squares symbol-spaced equalizer trained on a known
// reference; training length must reach 4x the tap count.
ArrXcd ls_equalizer_taps(const ArrXcd& rx, const ArrXcd& ref, int taps);

// run a centered symbol-spaced FIR over a symbol sequence
ArrXcd apply_symbol_fir(const ArrXcd& x, const ArrXcd& taps);

// Error vector magnitude in percent after one complex least squares scale.
double evm_percent(const ArrXcd& rx, const ArrXcd& ref);

}  // namespace rofsim
