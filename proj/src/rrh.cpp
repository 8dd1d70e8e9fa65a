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

#include "rofsim/rrh.hpp"

#include "rofsim/sigcore.hpp"
#include "rofsim/sigma_delta.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace rofsim {

namespace {

// Dither reconstruction is deterministic per configuration, so completed
// waveforms are kept across bursts; the band filter wants the same reuse.
std::mutex cache_mutex;

using DitherKey = std::tuple<double, double, double, double, double, double, Eigen::Index>;
std::map<DitherKey, ArrXd> dither_cache;

using TapsKey = std::tuple<double, double, double, double, double>;
std::map<TapsKey, ArrXd> taps_cache;

double db_to_amp(double db) {
    return std::pow(10.0, db / 20.0);
}

}  // namespace

ArrXd rrh_band_taps(const RrhConfig& cfg) {
    const TapsKey key{cfg.sample_rate, cfg.rf_center, cfg.rf_bandwidth, cfg.bpf_transition,
                      cfg.bpf_atten_db};
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = taps_cache.find(key);
        if (it != taps_cache.end()) return it->second;
    }
    FilterSpec spec;
    spec.kind = FilterSpec::Kind::bandpass;
    spec.pass_lo = cfg.rf_center - cfg.rf_bandwidth / 2.0;
    spec.pass_hi = cfg.rf_center + cfg.rf_bandwidth / 2.0;
    spec.transition = cfg.bpf_transition;
    spec.atten_db = cfg.bpf_atten_db;
    ArrXd taps = design_fir(spec, cfg.sample_rate);
    std::lock_guard<std::mutex> lock(cache_mutex);
    if (taps_cache.size() > 8) taps_cache.clear();
    return taps_cache.emplace(key, std::move(taps)).first->second;
}

double agc_gain_db(double measured_dbm, const RrhConfig& cfg) {
    return std::clamp(cfg.agc_target_dbm - measured_dbm, cfg.agc_gain_min_db,
                      cfg.agc_gain_max_db);
}

PassbandSignal agc_process(const PassbandSignal& in, const RrhConfig& cfg,
                           std::vector<double>* window_gains_db) {
    const Eigen::Index n = in.samples.size();
    const Eigen::Index win = std::max<Eigen::Index>(
        1, static_cast<Eigen::Index>(std::llround(cfg.agc_hold_s * in.rate)));
    PassbandSignal out;
    out.rate = in.rate;
    out.samples.resize(n);
    if (window_gains_db) window_gains_db->clear();
    for (Eigen::Index start = 0; start < n; start += win) {
        const Eigen::Index len = std::min(win, n - start);
        const double p = power_dbm(ArrXd(in.samples.segment(start, len)));
        const double g = agc_gain_db(p, cfg);
        out.samples.segment(start, len) = in.samples.segment(start, len) * db_to_amp(g);
        if (window_gains_db) window_gains_db->push_back(g);
    }
    return out;
}

ArrXd band_noise(Eigen::Index n, double rate, double center, double width,
                 double power_dbm_total, Rng& rng) {
    if (width <= 0.0 || center - width / 2.0 <= 0.0 || center + width / 2.0 >= rate / 2.0)
        throw std::invalid_argument("band_noise: band must sit inside (0, rate/2)");

    // white complex noise at a sample rate equal to the band width has a flat
    // box spectrum; mixing it up centers that box on the carrier
    const auto [p, q] = rate_ratio(rate, width);
    const Eigen::Index guard = 64;  // input samples consumed by the resampler edge
    const Eigen::Index lead = (guard * p + q - 1) / q;
    const Eigen::Index n_bb = ((lead + n) * q + p - 1) / p + guard + 2;

    const double pw = dbm_to_watts(power_dbm_total);
    BasebandSignal bb;
    bb.rate = width;
    bb.samples = rng.cgaussian_vector(n_bb) * std::sqrt(pw * 50.0);

    const PassbandSignal pb = upconvert(bb, center, rate);
    if (pb.samples.size() < lead + n)
        throw std::runtime_error("band_noise: internal length mismatch");
    return pb.samples.segment(lead, n);
}

ArrXd dither_waveform(const RrhConfig& cfg, Eigen::Index n) {
    const DitherKey key{cfg.sample_rate, cfg.dither_freq, cfg.dither_power_dbm,
                        cfg.if_gain_db, cfg.dither_lpf_hz, cfg.dither_sd_bw, n};
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = dither_cache.find(key);
        if (it != dither_cache.end()) return it->second;
    }

    // triangle with exact rational phase, peak = sqrt(3) * rms
    const double rms = dbm_to_vrms(cfg.dither_power_dbm - cfg.if_gain_db);
    const double amp = std::sqrt(3.0) * rms;
    const auto [num, den] = rate_ratio(cfg.dither_freq, cfg.sample_rate);
    ArrXd tri(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double u =
            static_cast<double>((static_cast<unsigned long long>(i) * num) % den) / den;
        tri[i] = amp * (u < 0.5 ? 4.0 * u - 1.0 : 3.0 - 4.0 * u);
    }

    NtfSpec ntf;
    ntf.order = 2;
    ntf.osr = cfg.sample_rate / (2.0 * cfg.dither_sd_bw);
    ntf.f0 = 0.0;
    SdModulator mod(synthesize_ntf(ntf), 1.0);
    const ArrXd chips = mod.encode(tri);

    FilterSpec lpf;
    lpf.kind = FilterSpec::Kind::lowpass;
    lpf.pass_hi = cfg.dither_lpf_hz;
    lpf.transition = 80e6;
    lpf.atten_db = 60.0;
    ArrXd shaped = apply_filter(chips, design_fir(lpf, cfg.sample_rate));
    shaped *= db_to_amp(cfg.if_gain_db);

    std::lock_guard<std::mutex> lock(cache_mutex);
    if (dither_cache.size() > 8) dither_cache.clear();
    return dither_cache.emplace(key, std::move(shaped)).first->second;
}

UplinkResult uplink_receive(const PassbandSignal& rf, const RrhConfig& cfg, Rng& rng,
                            std::optional<double> fixed_gain_db) {
    if (std::abs(rf.rate - cfg.sample_rate) > 1e-3)
        throw std::invalid_argument("uplink_receive: signal rate != comparator rate");
    const Eigen::Index n = rf.samples.size();

    ArrXd x = cfg.bpf_enable ? apply_filter(rf.samples, rrh_band_taps(cfg)) : rf.samples;

    UplinkResult res;
    res.input_dbm = power_dbm(x);
    res.agc_gain_db = fixed_gain_db ? *fixed_gain_db : agc_gain_db(res.input_dbm, cfg);
    x *= db_to_amp(res.agc_gain_db + cfg.rf_amp_gain_db);

    if (cfg.noise_enable)
        x += rng.gaussian_vector(n) *
             (dbm_to_vrms(cfg.noise_dbm) * std::sqrt(cfg.sample_rate / cfg.noise_ref_rate));

    res.chips.rate = cfg.sample_rate;
    res.chips.chips.resize(n);
    if (cfg.dither_enable) {
        const ArrXd d = dither_waveform(cfg, n);
        for (Eigen::Index i = 0; i < n; ++i) res.chips.chips[i] = x[i] >= d[i] ? 1.0 : -1.0;
    } else {
        for (Eigen::Index i = 0; i < n; ++i) res.chips.chips[i] = x[i] >= 0.0 ? 1.0 : -1.0;
    }
    return res;
}

PassbandSignal downlink_transmit(const BinaryStream& chips, const RrhConfig& cfg,
                                 double tx_power_dbm) {
    PassbandSignal out;
    out.rate = chips.rate;
    out.samples = apply_filter(chips.chips, rrh_band_taps(cfg));
    scale_to_power_dbm(out.samples, tx_power_dbm);
    return out;
}

BinaryStream fronthaul_transport(const BinaryStream& in, const FronthaulConfig& cfg) {
    if (cfg.rise_time_s <= 0.0) return in;
    if (cfg.oversample < 4)
        throw std::invalid_argument("fronthaul_transport: oversample too small");

    const int m = cfg.oversample;
    const double dt = 1.0 / (in.rate * m);
    const double sigma = cfg.rise_time_s / 2.5631;  // 10-90% edge of a Gaussian step
    const int h = std::max(1, static_cast<int>(std::ceil(4.0 * sigma / dt)));
    ArrXd kernel(2 * h + 1);
    for (int i = 0; i < kernel.size(); ++i) {
        const double t = (i - h) * dt;
        kernel[i] = std::exp(-0.5 * (t / sigma) * (t / sigma));
    }
    kernel /= kernel.sum();

    const Eigen::Index n = in.chips.size();
    ArrXd up(n * m);
    for (Eigen::Index i = 0; i < n; ++i) up.segment(i * m, m).setConstant(in.chips[i]);
    const ArrXd soft = apply_filter(up, kernel);

    BinaryStream out;
    out.rate = in.rate;
    out.chips.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
        out.chips[i] = soft[i * m + m / 2] >= 0.0 ? 1.0 : -1.0;
    return out;
}

double cascade_noise_figure_db(const std::vector<GainStage>& stages) {
    if (stages.empty()) throw std::invalid_argument("cascade_noise_figure_db: no stages");
    double f_total = 0.0, gain_acc = 1.0;
    for (size_t i = 0; i < stages.size(); ++i) {
        const double f = std::pow(10.0, stages[i].nf_db / 10.0);
        f_total += i == 0 ? f : (f - 1.0) / gain_acc;
        gain_acc *= std::pow(10.0, stages[i].gain_db / 10.0);
    }
    return 10.0 * std::log10(f_total);
}

}  // namespace rofsim
