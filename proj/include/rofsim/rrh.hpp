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

#include <optional>
#include <vector>

namespace rofsim {

// Remote radio head analog front end. The receive path amplifies the antenna
// signal to a fixed level, adds the receiver's equivalent noise, and slices
// against a shaped dither wave; the transmit path reconstructs a one-bit
// stream with the analog band filter.
struct RrhConfig {
    double sample_rate = 10e9;   // comparator clock and chip rate
    double rf_center = 2.35e9;
    double rf_bandwidth = 100e6;  // analog band filter width
    double bpf_transition = 50e6;
    double bpf_atten_db = 60.0;
    bool bpf_enable = true;       // receive-path band filter

    double agc_target_dbm = -30.0;
    double agc_gain_min_db = -15.0;
    double agc_gain_max_db = 30.0;
    double agc_hold_s = 1e-3;     // true-RMS measurement window

    double rf_amp_gain_db = 24.5;  // fixed comparator drive gain after the AGC

    bool noise_enable = true;
    double noise_dbm = -26.6;       // white comparator noise, total at noise_ref_rate
    double noise_ref_rate = 10e9;   // rate where noise_dbm is the total; density is held

    bool dither_enable = true;
    double dither_freq = 17e6;
    double dither_power_dbm = -4.5;  // at the comparator, after if_gain
    double if_gain_db = 15.0;
    double dither_lpf_hz = 180e6;    // dither reconstruction lowpass
    double dither_sd_bw = 200e6;     // dither encoder design band
};

// receive-band FIR for the configured front end
ArrXd rrh_band_taps(const RrhConfig& cfg);

// gain the level loop would apply to a measured input power
double agc_gain_db(double measured_dbm, const RrhConfig& cfg);

// True-RMS level control: one gain per hold window, held across the window.
// Shorter signals form a single window. Optionally reports the window gains.
PassbandSignal agc_process(const PassbandSignal& in, const RrhConfig& cfg,
                           std::vector<double>* window_gains_db = nullptr);

// Gaussian noise confined to [center - width/2, center + width/2] with the
// given total power, synthesized at complex baseband and mixed up.
ArrXd band_noise(Eigen::Index n, double rate, double center, double width,
                 double power_dbm, Rng& rng);

// Shaped comparator dither: an exact-phase triangle encoded by a lowpass
// one-bit modulator, reconstructed by the IF lowpass and gain.
ArrXd dither_waveform(const RrhConfig& cfg, Eigen::Index n);

struct UplinkResult {
    BinaryStream chips;
    double agc_gain_db = 0.0;  // gain of the first hold window
    double input_dbm = 0.0;    // level after the band filter, before gain
};

// Antenna waveform to one-bit stream. A fixed gain (from a previous burst
// in the same frame) may replace the level measurement.
UplinkResult uplink_receive(const PassbandSignal& rf, const RrhConfig& cfg, Rng& rng,
                            std::optional<double> fixed_gain_db = {});

// One-bit stream through the band filter, scaled to the transmit power.
PassbandSignal downlink_transmit(const BinaryStream& chips, const RrhConfig& cfg,
                                 double tx_power_dbm);

// Optical link bit transport. With a nonzero rise time the edges acquire a
// Gaussian profile and the stream is re-sliced at the chip centers, so runts
// shorter than the edge width can drop.
struct FronthaulConfig {
    double rise_time_s = 0.0;  // 10-90% edge time; 0 = ideal transport
    int oversample = 20;
};

BinaryStream fronthaul_transport(const BinaryStream& in, const FronthaulConfig& cfg);

// Friis cascade of gain stages
struct GainStage {
    double gain_db;
    double nf_db;
};

double cascade_noise_figure_db(const std::vector<GainStage>& stages);

}  // namespace rofsim
