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

#include "rofsim/types.hpp"

#include <vector>

namespace rofsim {

// Noise transfer function request. f0 is the band center normalized to the
// sample rate; 0 selects a lowpass design. osr = rate / (2 * bandwidth).
struct NtfSpec {
    int order = 4;
    double osr = 50.0;
    double f0 = 0.0;
    double max_gain = 1.5;
};

struct NtfDesign {
    std::vector<cplx> zeros;  // on the unit circle, spread across the band
    std::vector<cplx> poles;  // Butterworth family, tuned to hit max_gain
    NtfSpec spec;
};

// Places zeros at Gauss-Legendre nodes scaled to the band and tunes a
// Butterworth pole set (bandpass-transformed when f0 > 0) by bisection until
// the peak out-of-band gain equals spec.max_gain. Orders 1..6 for lowpass,
// even orders for bandpass.
NtfDesign synthesize_ntf(const NtfSpec& spec);

// NTF value at normalized frequency f in [0, 0.5]
cplx ntf_eval(const NtfDesign& d, double f);

// peak |NTF| over a dense unit-circle grid
double ntf_max_gain(const NtfDesign& d);

// rms of |NTF| across the design band, in dB (negative: in-band suppression)
double ntf_band_rms_db(const NtfDesign& d);

// One-bit modulator realized as a chain of resonator sections (one per NTF
// zero pair, an accumulator for a zero at DC) with per-state feedback taps
// fitted so the linearized loop reproduces the target NTF and passes the
// input straight through.
class SdModulator {
  public:
    explicit SdModulator(const NtfDesign& design, double full_scale = 1.0);

    // Encode to a +-full_scale chip stream. State persists across calls.
    ArrXd encode(const ArrXd& input);

    void reset();
    int overload_count() const { return overloads_; }
    double full_scale() const { return full_scale_; }
    const NtfDesign& design() const { return design_; }

    // linearized-loop NTF at z, for validating the fitted realization
    cplx realized_ntf(const cplx& z) const;

  private:
    NtfDesign design_;
    double full_scale_;
    MatXd a_mat_;        // chained section dynamics
    VecXd feedback_;     // per-state feedback gains
    Eigen::Index out_state_;
    VecXd state_;
    int overloads_ = 0;
};

}  // namespace rofsim
