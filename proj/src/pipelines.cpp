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

#include "rofsim/bench.hpp"

#include "rofsim/calibration.hpp"
#include "rofsim/channel.hpp"
#include "rofsim/cu_dsp.hpp"
#include "rofsim/sigcore.hpp"
#include "rofsim/sigma_delta.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rofsim {

namespace {

double db_to_amp(double db) {
    return std::pow(10.0, db / 20.0);
}

std::vector<std::uint8_t> random_bits(Rng& rng, Eigen::Index n) {
    std::vector<std::uint8_t> bits(n);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next() & 1);
    return bits;
}

// band selection for the digital downconversion: keep the occupied band,
// stop anything that would fold onto it
ResampleSpec down_spec(double occupied, double out_rate) {
    ResampleSpec rs;
    // pass edge sits above the occupied band but must stay below output Nyquist
    rs.pass_hz = std::min(0.575 * occupied, 0.25 * (occupied + out_rate));
    rs.stop_hz = out_rate - rs.pass_hz;
    rs.atten_db = 80.0;
    return rs;
}

// single complex gain against a known sequence
cplx ls_scalar(const ArrXcd& rx, const ArrXcd& ref) {
    return (ref.conjugate() * rx).sum() / ref.abs2().sum();
}

struct DemodOutcome {
    double evm_pct;
    double evm_alt_pct;
    double sync_peak;
};

// one equalizer pass over already-recovered symbols
double equalized_evm(const ArrXcd& symbols, const ArrXcd& pre, const ArrXcd& payload,
                     int eq_taps) {
    const ArrXcd taps = ls_equalizer_taps(symbols.head(pre.size()), pre, eq_taps);
    const ArrXcd eq = apply_symbol_fir(symbols, taps);
    const Eigen::Index n_eval = payload.size() - eq_taps;  // skip the trailing edge
    return evm_percent(eq.segment(pre.size(), n_eval), payload.head(n_eval));
}

// matched filter, timing search, preamble-trained equalizer, payload error
DemodOutcome demod_frame_evm(const BasebandSignal& rx, const WaveformConfig& wf,
                             const ArrXcd& payload, int eq_taps, int eq_taps_alt = 0) {
    const ArrXcd pre = frame_preamble(wf);
    const Eigen::Index total = pre.size() + payload.size();
    const SyncResult sync = rrc_demodulate(rx, wf, total);
    DemodOutcome out;
    out.evm_pct = equalized_evm(sync.symbols, pre, payload, eq_taps);
    out.evm_alt_pct =
        eq_taps_alt > 0 ? equalized_evm(sync.symbols, pre, payload, eq_taps_alt) : 0.0;
    out.sync_peak = sync.peak;
    return out;
}

// fixed-timing variant for phase-coherent multi-antenna streams
double coherent_frame_evm(const ArrXcd& symbols, const WaveformConfig& wf,
                          const ArrXcd& payload, int eq_taps) {
    return equalized_evm(symbols, frame_preamble(wf), payload, eq_taps);
}

// preamble-free symbol stream spanning a whole frame; decoders treat it as
// noise, so its own structure never has to line up with the victim's frame
PassbandSignal interferer_frame(const WaveformConfig& wf, Eigen::Index frame_symbols,
                                double carrier_hz, double rate, Rng& rng) {
    std::vector<std::uint8_t> bits(frame_symbols * bits_per_symbol(wf.scheme));
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next() & 1);
    ArrXcd syms = map_symbols(bits, wf.scheme);
    const double phase = 2.0 * std::numbers::pi * rng.uniform();
    syms *= cplx(std::cos(phase), std::sin(phase));
    const BasebandSignal bb = rrc_modulate(syms, wf);
    return upconvert(bb, carrier_hz, rate);
}

}  // namespace

// ------------------------------------------------------------- uplink link

LinkResult run_uplink_link(const LinkSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    const WaveformConfig& wf = spec.wf;
    const RrhConfig& rrh = spec.rrh;

    const auto bits = random_bits(rng, spec.data_symbols * bits_per_symbol(wf.scheme));
    const ArrXcd payload = map_symbols(bits, wf.scheme);
    const ArrXcd frame = build_frame(payload, wf);
    const BasebandSignal bb = rrc_modulate(frame, wf);
    PassbandSignal pb = upconvert(bb, rrh.rf_center, rrh.sample_rate);
    scale_to_power_dbm(pb.samples, spec.antenna_dbm);

    if (spec.interferer) {
        // drawn even when the ratio mutes it, so the noise stream stays
        // identical across ratio sweeps
        const PassbandSignal other =
            interferer_frame(wf, frame.size(), rrh.rf_center + spec.interferer_offset_hz,
                             rrh.sample_rate, rng);
        pb = add_interference(pb, other, spec.interferer_sir_db);
    }

    LinkResult res;
    PassbandSignal stream;
    stream.rate = rrh.sample_rate;
    if (spec.onebit) {
        const UplinkResult ur = uplink_receive(pb, rrh, rng);
        res.agc_gain_db = ur.agc_gain_db;
        res.comparator_dbm = ur.input_dbm + ur.agc_gain_db + rrh.rf_amp_gain_db;
        stream.samples = ur.chips.chips;
    } else {
        ArrXd x = rrh.bpf_enable ? apply_filter(pb.samples, rrh_band_taps(rrh)) : pb.samples;
        const double in_dbm = power_dbm(x);
        res.agc_gain_db = agc_gain_db(in_dbm, rrh);
        x *= db_to_amp(res.agc_gain_db + rrh.rf_amp_gain_db);
        res.comparator_dbm = in_dbm + res.agc_gain_db + rrh.rf_amp_gain_db;
        if (rrh.noise_enable)
            x += rng.gaussian_vector(x.size()) *
                 (dbm_to_vrms(rrh.noise_dbm) * std::sqrt(rrh.sample_rate / rrh.noise_ref_rate));
        stream.samples = std::move(x);
    }

    const double out_rate = wf.symbol_rate * wf.sps;
    const BasebandSignal rx =
        downconvert(stream, rrh.rf_center, out_rate, down_spec(occupied_bw(wf), out_rate));
    const DemodOutcome d = demod_frame_evm(rx, wf, payload, spec.eq_taps, spec.eq_taps_alt);
    res.evm_pct = d.evm_pct;
    res.evm_alt_pct = d.evm_alt_pct;
    res.sync_peak = d.sync_peak;
    return res;
}

// --------------------------------------------------- adjacent carrier pair

AdjacentPairResult run_adjacent_pair(const AdjacentPairSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    const WaveformConfig& wf = spec.wf;
    const RrhConfig& rrh = spec.rrh;
    const double f_lo = rrh.rf_center - spec.freq_offset_hz;
    const double f_hi = rrh.rf_center + spec.freq_offset_hz;

    const Eigen::Index n_bits = spec.data_symbols * bits_per_symbol(wf.scheme);
    std::vector<ArrXcd> payloads(2);
    std::vector<PassbandSignal> pbs(2);
    const double centers[2] = {f_lo, f_hi};
    for (int k = 0; k < 2; ++k) {
        payloads[k] = map_symbols(random_bits(rng, n_bits), wf.scheme);
        const BasebandSignal bb = rrc_modulate(build_frame(payloads[k], wf), wf);
        pbs[k] = upconvert(bb, centers[k], rrh.sample_rate);
    }
    scale_to_power_dbm(pbs[0].samples, spec.antenna_dbm);
    PassbandSignal pb = add_interference(pbs[0], pbs[1], spec.sir_db);

    const UplinkResult ur = uplink_receive(pb, rrh, rng);
    PassbandSignal stream;
    stream.rate = rrh.sample_rate;
    stream.samples = ur.chips.chips;

    const double out_rate = wf.symbol_rate * wf.sps;
    const ResampleSpec rs = down_spec(occupied_bw(wf), out_rate);
    AdjacentPairResult res;
    res.agc_gain_db = ur.agc_gain_db;
    double* out_evm[2] = {&res.evm_fixed_pct, &res.evm_varied_pct};
    for (int k = 0; k < 2; ++k) {
        const BasebandSignal rx = downconvert(stream, centers[k], out_rate, rs);
        *out_evm[k] = demod_frame_evm(rx, wf, payloads[k], spec.eq_taps).evm_pct;
    }
    return res;
}

// ------------------------------------------------------------- OFDM uplink

LinkResult run_uplink_ofdm(const OfdmLinkSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    const OfdmConfig& ofdm = spec.ofdm;
    const RrhConfig& rrh = spec.rrh;
    const int occ = ofdm.occupied;

    const auto bits = random_bits(
        rng, static_cast<Eigen::Index>(occ) * spec.data_symbols * bits_per_symbol(spec.scheme));
    const ArrXcd data = map_symbols(bits, spec.scheme);
    const ArrXcd pilot = ofdm_pilot(ofdm);

    MatXcd grid(occ, 1 + spec.data_symbols);
    grid.col(0) = pilot.matrix();
    for (int m = 0; m < spec.data_symbols; ++m)
        grid.col(1 + m) = data.segment(static_cast<Eigen::Index>(m) * occ, occ).matrix();

    const BasebandSignal bb = ofdm_modulate(grid, ofdm);
    PassbandSignal pb = upconvert(bb, rrh.rf_center, rrh.sample_rate);
    scale_to_power_dbm(pb.samples, spec.antenna_dbm);

    const UplinkResult ur = uplink_receive(pb, rrh, rng);
    PassbandSignal stream;
    stream.rate = rrh.sample_rate;
    stream.samples = ur.chips.chips;

    const BasebandSignal rx = downconvert(stream, rrh.rf_center, ofdm.rate(),
                                          down_spec(ofdm.occupied_bw(), ofdm.rate()));
    const MatXcd grid_rx = ofdm_demodulate(rx, ofdm, 0, 1 + spec.data_symbols);

    // per-tone fit from the pilot column, cleaned by an impulse-domain window
    ArrXcd h = grid_rx.col(0).array() / pilot;
    if (spec.denoise_window > 0 && spec.denoise_window < occ) {
        Eigen::FFT<double> fft;
        Eigen::VectorXcd freq = h.matrix(), time(occ);
        fft.inv(time, freq);
        const int lead = 4;  // tolerate small acausal leakage
        for (int i = 0; i < occ; ++i) {
            const bool causal = i < spec.denoise_window - lead;
            const bool acausal = i >= occ - lead;
            if (!causal && !acausal) time[i] = cplx(0.0, 0.0);
        }
        fft.fwd(freq, time);
        h = freq.array();
    }

    MatXcd est(occ, spec.data_symbols);
    for (int m = 0; m < spec.data_symbols; ++m)
        est.col(m) = (grid_rx.col(1 + m).array() / h).matrix();

    const ArrXcd est_flat = Eigen::Map<const ArrXcd>(est.data(), est.size());
    LinkResult res;
    res.evm_pct = evm_percent(est_flat, data);
    res.agc_gain_db = ur.agc_gain_db;
    res.comparator_dbm = ur.input_dbm + ur.agc_gain_db + rrh.rf_amp_gain_db;
    res.sync_peak = 1.0;
    return res;
}

// ----------------------------------------------------------- downlink link

LinkResult run_downlink_link(const DownlinkSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    const WaveformConfig& wf = spec.wf;
    const RrhConfig& rrh = spec.rrh;

    const auto bits = random_bits(rng, spec.data_symbols * bits_per_symbol(wf.scheme));
    const ArrXcd payload = map_symbols(bits, wf.scheme);
    const ArrXcd frame = build_frame(payload, wf);
    const BasebandSignal bb = rrc_modulate(frame, wf);
    PassbandSignal drive = upconvert(bb, rrh.rf_center, rrh.sample_rate);
    drive.samples *= spec.backoff / drive.samples.abs().maxCoeff();

    NtfSpec ntf;
    ntf.order = spec.sd_order;
    ntf.osr = rrh.sample_rate / (2.0 * rrh.rf_bandwidth);
    ntf.f0 = rrh.rf_center / rrh.sample_rate;
    ntf.max_gain = spec.sd_max_gain;
    SdModulator mod(synthesize_ntf(ntf), 1.0);

    BinaryStream chips;
    chips.rate = rrh.sample_rate;
    chips.chips = mod.encode(drive.samples);
    if (spec.fronthaul_rise_ps > 0.0) {
        FronthaulConfig fh;
        fh.rise_time_s = spec.fronthaul_rise_ps * 1e-12;
        chips = fronthaul_transport(chips, fh);
    }

    const PassbandSignal tx = downlink_transmit(chips, rrh, spec.tx_power_dbm);

    const double out_rate = wf.symbol_rate * wf.sps;
    BasebandSignal rx =
        downconvert(tx, rrh.rf_center, out_rate, down_spec(occupied_bw(wf), out_rate));
    rx.samples *= los_gain(spec.distance_m, rrh.rf_center);
    add_awgn(rx, spec.ue_noise_dbm, rng);

    const DemodOutcome d = demod_frame_evm(rx, wf, payload, spec.eq_taps);
    LinkResult res;
    res.evm_pct = d.evm_pct;
    res.sync_peak = d.sync_peak;
    res.comparator_dbm = power_dbm(drive.samples);
    return res;
}

// ------------------------------------------------------- distributed MIMO

namespace {

struct MimoCommon {
    Geometry geom;
    MatXcd g;        // n_rrh x n_ue line-of-sight gains
    MatXcd g_mutual; // head-to-head gains
    ArrXcd t, r;     // per-head electronics
};

MimoCommon mimo_setup(const DmimoSpec& spec, Rng& rng) {
    MimoCommon mc;
    mc.geom = default_geometry(spec.n_rrh, spec.n_ue);
    mc.g = los_matrix(mc.geom, spec.rrh.rf_center);
    mc.g_mutual = mutual_los_matrix(mc.geom, spec.rrh.rf_center);
    mc.t = hardware_gains(spec.n_rrh, spec.gain_spread_db, rng);
    mc.r = hardware_gains(spec.n_rrh, spec.gain_spread_db, rng);
    return mc;
}

// Time-orthogonal preamble soundings from every terminal; acquires the level
// loop once per head and freezes it for the rest of the frame.
struct PilotPhase {
    MatXcd h_est;                 // n_rrh x n_ue symbol-level uplink estimate
    std::vector<double> gain_db;  // frozen per-head gains
};

PilotPhase uplink_pilot_phase(const DmimoSpec& spec, const MimoCommon& mc, Rng& rng) {
    const WaveformConfig& wf = spec.wf;
    const ArrXcd pre = frame_preamble(wf);
    BasebandSignal pilot_bb = rrc_modulate(pre, wf);
    pilot_bb.samples *= std::sqrt(dbm_to_watts(spec.ue_tx_dbm) /
                                  mean_square(pilot_bb.samples));

    PilotPhase ph;
    ph.h_est = MatXcd::Zero(spec.n_rrh, spec.n_ue);
    ph.gain_db.assign(spec.n_rrh, 0.0);

    const double out_rate = wf.symbol_rate * wf.sps;
    const ResampleSpec rs = down_spec(occupied_bw(wf), out_rate);
    for (int u = 0; u < spec.n_ue; ++u) {
        for (int rr = 0; rr < spec.n_rrh; ++rr) {
            BasebandSignal ant;
            ant.rate = pilot_bb.rate;
            ant.samples = mc.r[rr] * mc.g(rr, u) * pilot_bb.samples;
            const PassbandSignal pb = upconvert(ant, spec.rrh.rf_center, spec.rrh.sample_rate);
            std::optional<double> fixed;
            if (u > 0) fixed = ph.gain_db[rr];
            const UplinkResult ur = uplink_receive(pb, spec.rrh, rng, fixed);
            if (u == 0) ph.gain_db[rr] = ur.agc_gain_db;

            PassbandSignal stream;
            stream.rate = spec.rrh.sample_rate;
            stream.samples = ur.chips.chips;
            const BasebandSignal rx = downconvert(stream, spec.rrh.rf_center, out_rate, rs);
            const ArrXcd sym = extract_frame_symbols(rx, wf, pre.size());
            ph.h_est(rr, u) = ls_scalar(sym, pre);
        }
    }
    // the hold covers the data phase where every terminal transmits at once;
    // the composite power is n_ue times one pilot, and the shift is common to
    // all heads so combining and calibration see it as a global scalar
    for (int rr = 0; rr < spec.n_rrh; ++rr)
        ph.gain_db[rr] -= 10.0 * std::log10(static_cast<double>(spec.n_ue));
    return ph;
}

}  // namespace

DmimoResult run_dmimo_uplink(const DmimoSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    const WaveformConfig& wf = spec.wf;
    MimoCommon mc = mimo_setup(spec, rng);
    const PilotPhase ph = uplink_pilot_phase(spec, mc, rng);

    // simultaneous data frames
    std::vector<ArrXcd> payloads(spec.n_ue);
    std::vector<BasebandSignal> bbs(spec.n_ue);
    for (int u = 0; u < spec.n_ue; ++u) {
        const auto bits = random_bits(rng, spec.data_symbols * bits_per_symbol(wf.scheme));
        payloads[u] = map_symbols(bits, wf.scheme);
        bbs[u] = rrc_modulate(build_frame(payloads[u], wf), wf);
        bbs[u].samples *= std::sqrt(dbm_to_watts(spec.ue_tx_dbm) / mean_square(bbs[u].samples));
    }

    const Eigen::Index total = frame_preamble(wf).size() + spec.data_symbols;
    const double out_rate = wf.symbol_rate * wf.sps;
    const ResampleSpec rs = down_spec(occupied_bw(wf), out_rate);

    std::vector<ArrXcd> stream_syms(spec.n_rrh);
    for (int rr = 0; rr < spec.n_rrh; ++rr) {
        BasebandSignal ant;
        ant.rate = bbs[0].rate;
        ant.samples = ArrXcd::Zero(bbs[0].samples.size());
        for (int u = 0; u < spec.n_ue; ++u) ant.samples += mc.g(rr, u) * bbs[u].samples;
        ant.samples *= mc.r[rr];
        const PassbandSignal pb = upconvert(ant, spec.rrh.rf_center, spec.rrh.sample_rate);
        const UplinkResult ur = uplink_receive(pb, spec.rrh, rng, ph.gain_db[rr]);
        PassbandSignal stream;
        stream.rate = spec.rrh.sample_rate;
        stream.samples = ur.chips.chips;
        stream_syms[rr] =
            extract_frame_symbols(downconvert(stream, spec.rrh.rf_center, out_rate, rs), wf, total);
    }

    const MatXcd w = zf_combiner(ph.h_est);
    DmimoResult res;
    for (int u = 0; u < spec.n_ue; ++u) {
        ArrXcd s = ArrXcd::Zero(total);
        for (int rr = 0; rr < spec.n_rrh; ++rr) s += w(u, rr) * stream_syms[rr];
        res.evm_pct.push_back(coherent_frame_evm(s, wf, payloads[u], spec.eq_taps));
    }
    return res;
}

DmimoResult run_dmimo_downlink(const DmimoSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    const WaveformConfig& wf = spec.wf;
    const RrhConfig& rrh = spec.rrh;
    MimoCommon mc = mimo_setup(spec, rng);
    const PilotPhase ph = uplink_pilot_phase(spec, mc, rng);

    NtfSpec ntf;
    ntf.order = spec.sd_order;
    ntf.osr = rrh.sample_rate / (2.0 * rrh.rf_bandwidth);
    ntf.f0 = rrh.rf_center / rrh.sample_rate;
    ntf.max_gain = spec.sd_max_gain;
    const NtfDesign sd_design = synthesize_ntf(ntf);

    const double out_rate = wf.symbol_rate * wf.sps;
    const ResampleSpec rs = down_spec(occupied_bw(wf), out_rate);
    const ArrXcd pre = frame_preamble(wf);

    // over-the-air sounding, every head in turn through its full transmit
    // chain, the others listening with frozen gains
    DmimoResult res;
    ArrXcd coeffs = ArrXcd::Ones(spec.n_rrh);
    if (spec.calibrate) {
        MatXcd y = MatXcd::Zero(spec.n_rrh, spec.n_rrh);
        BasebandSignal sound_bb = rrc_modulate(pre, wf);
        for (int i = 0; i < spec.n_rrh; ++i) {
            PassbandSignal drive = upconvert(sound_bb, rrh.rf_center, rrh.sample_rate);
            drive.samples *= spec.backoff / drive.samples.abs().maxCoeff();
            SdModulator mod(sd_design, 1.0);
            BinaryStream chips;
            chips.rate = rrh.sample_rate;
            chips.chips = mod.encode(drive.samples);
            const PassbandSignal tx = downlink_transmit(chips, rrh, spec.rrh_tx_dbm);
            const BasebandSignal tx_bb = downconvert(tx, rrh.rf_center, out_rate, rs);
            for (int j = 0; j < spec.n_rrh; ++j) {
                if (j == i) continue;
                BasebandSignal ant;
                ant.rate = tx_bb.rate;
                ant.samples = mc.r[j] * mc.g_mutual(i, j) * mc.t[i] * tx_bb.samples;
                const PassbandSignal pb = upconvert(ant, rrh.rf_center, rrh.sample_rate);
                const UplinkResult ur = uplink_receive(pb, rrh, rng, ph.gain_db[j]);
                PassbandSignal stream;
                stream.rate = rrh.sample_rate;
                stream.samples = ur.chips.chips;
                const ArrXcd sym = extract_frame_symbols(
                    downconvert(stream, rrh.rf_center, out_rate, rs), wf, pre.size());
                y(i, j) = ls_scalar(sym, pre);
            }
        }
        const CalibrationResult cal = calibrate_reciprocity(y);
        coeffs = cal.coeffs;
        res.calibration_cost = cal.cost;
        res.calibration_iterations = cal.iterations;
    }

    const MatXcd p = apply_calibration(zf_precoder(ph.h_est, 1.0), coeffs);

    // joint downlink payload
    std::vector<ArrXcd> payloads(spec.n_ue);
    std::vector<BasebandSignal> bbs(spec.n_ue);
    for (int u = 0; u < spec.n_ue; ++u) {
        const auto bits = random_bits(rng, spec.data_symbols * bits_per_symbol(wf.scheme));
        payloads[u] = map_symbols(bits, wf.scheme);
        bbs[u] = rrc_modulate(build_frame(payloads[u], wf), wf);
    }

    std::vector<PassbandSignal> drives(spec.n_rrh);
    double peak = 0.0;
    for (int rr = 0; rr < spec.n_rrh; ++rr) {
        BasebandSignal x;
        x.rate = bbs[0].rate;
        x.samples = ArrXcd::Zero(bbs[0].samples.size());
        for (int u = 0; u < spec.n_ue; ++u) x.samples += p(rr, u) * bbs[u].samples;
        drives[rr] = upconvert(x, rrh.rf_center, rrh.sample_rate);
        peak = std::max(peak, drives[rr].samples.abs().maxCoeff());
    }

    // one scale for every head keeps the precoder ratios intact
    const double sigma = spec.backoff / peak;
    std::vector<BasebandSignal> tx_bb(spec.n_rrh);
    double tx_power_sum = 0.0;
    for (int rr = 0; rr < spec.n_rrh; ++rr) {
        SdModulator mod(sd_design, 1.0);
        BinaryStream chips;
        chips.rate = rrh.sample_rate;
        chips.chips = mod.encode(drives[rr].samples * sigma);
        PassbandSignal tx;
        tx.rate = rrh.sample_rate;
        tx.samples = apply_filter(chips.chips, rrh_band_taps(rrh));
        tx_power_sum += mean_square(tx.samples);
        tx_bb[rr] = downconvert(tx, rrh.rf_center, out_rate, rs);
    }
    const double beta =
        std::sqrt(spec.n_rrh * dbm_to_watts(spec.rrh_tx_dbm) / std::max(tx_power_sum, 1e-300));

    const Eigen::Index total = pre.size() + spec.data_symbols;
    for (int u = 0; u < spec.n_ue; ++u) {
        BasebandSignal rx;
        rx.rate = out_rate;
        rx.samples = ArrXcd::Zero(tx_bb[0].samples.size());
        for (int rr = 0; rr < spec.n_rrh; ++rr)
            rx.samples += mc.g(rr, u) * mc.t[rr] * tx_bb[rr].samples;
        rx.samples *= beta;
        add_awgn(rx, spec.ue_noise_dbm, rng);
        const ArrXcd sym = extract_frame_symbols(rx, wf, total);
        res.evm_pct.push_back(coherent_frame_evm(sym, wf, payloads[u], spec.eq_taps));
    }
    return res;
}

}  // namespace rofsim
