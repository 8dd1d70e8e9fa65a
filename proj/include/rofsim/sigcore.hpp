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

#include <optional>
#include <utility>

namespace rofsim {

// ---------------------------------------------------------------- power ---
// All absolute powers are dBm into 50 ohm. A complex envelope carries the
// same power as the passband waveform it came from (mixers use sqrt(2)).

double watts_to_dbm(double watts);
double dbm_to_watts(double dbm);

// rms voltage of a sine-free waveform with the given average power
double dbm_to_vrms(double dbm);

double mean_square(const ArrXd& v);
double mean_square(const ArrXcd& v);

double power_dbm(const ArrXd& v);
double power_dbm(const ArrXcd& v);

// returns the scale factor applied
double scale_to_power_dbm(ArrXd& v, double dbm);
double scale_to_power_dbm(ArrXcd& v, double dbm);

// ----------------------------------------------------------------- FIR -----

struct FilterSpec {
    enum class Kind { lowpass, highpass, bandpass, bandstop };
    Kind kind = Kind::lowpass;
    // Passband edges in Hz. lowpass uses pass_hi only, highpass uses pass_lo
    // only, bandpass/bandstop use both.
    double pass_lo = 0.0;
    double pass_hi = 0.0;
    double transition = 0.0;  // width of each transition band, Hz
    double atten_db = 60.0;   // stopband attenuation
};

// Kaiser-window linear-phase design; returns an odd number of taps.
ArrXd design_fir(const FilterSpec& spec, double rate);

// Zero-phase application: output has the same length as the input and
// output[n] lines up with input[n] (group delay removed, edges zero padded).
ArrXd apply_filter(const ArrXd& x, const ArrXd& taps);
ArrXcd apply_filter(const ArrXcd& x, const ArrXd& taps);

// ------------------------------------------------------------- resampling --

struct ResampleSpec {
    // Desired passband edge and stopband edge in Hz. Zero means "pick from
    // the rates": pass = 0.45*min(in,out), stop = min(in,out) - pass.
    double pass_hz = 0.0;
    double stop_hz = 0.0;
    double atten_db = 80.0;
};

// Polyphase rational resampling. Output sample m sits at input time
// m*in_rate/(out_rate) exactly; the filter delay is absorbed internally.
BasebandSignal resample(const BasebandSignal& in, double out_rate,
                        const ResampleSpec& spec = {});
PassbandSignal resample(const PassbandSignal& in, double out_rate,
                        const ResampleSpec& spec = {});

// Reduce out_rate/in_rate to p/q. Rates must be integral Hz.
std::pair<std::int64_t, std::int64_t> rate_ratio(double out_rate, double in_rate);

// ------------------------------------------------------------------ mixing -

// Re{bb * exp(+j*2*pi*fc*t)} * sqrt(2), resampled to out_rate first.
PassbandSignal upconvert(const BasebandSignal& bb, double fc, double out_rate);

// LPF(pb * sqrt(2) * exp(-j*2*pi*fc*t)) decimated to out_rate. The lowpass
// doubles as the decimation filter; when no spec is given the passband is
// 0.45*out_rate. pass/stop are envelope frequencies in Hz.
BasebandSignal downconvert(const PassbandSignal& pb, double fc, double out_rate,
                           const ResampleSpec& spec = {});

// Phase-exact carrier table: exp(sign * j*2*pi*fc/rate * n) for n = 0..n-1.
ArrXcd carrier_phasor(double fc, double rate, Eigen::Index n, int sign);

// ------------------------------------------------------------------- PSD ---

struct Psd {
    ArrXd freq;  // Hz; one-sided for real input, centered for complex input
    ArrXd pxx;   // V^2/Hz
    double df = 0.0;
};

// Welch estimate: Hann window, 50 percent overlap.
Psd welch_psd(const ArrXd& x, double rate, int nfft = 4096);
Psd welch_psd(const ArrXcd& x, double rate, int nfft = 4096);

// Integrate a PSD between two frequencies (inclusive bin edges).
double band_power(const Psd& psd, double f_lo, double f_hi);

}  // namespace rofsim
