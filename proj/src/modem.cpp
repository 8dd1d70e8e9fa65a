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

#include "rofsim/modem.hpp"
#include "rofsim/sigcore.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace rofsim {

namespace {

constexpr double pi = std::numbers::pi;

// Gray 16QAM level per bit pair, MSB first: 00 01 11 10 -> -3 -1 +1 +3
inline double qam16_level(int b_hi, int b_lo) {
    static const double lut[4] = {-3.0, -1.0, 3.0, 1.0};  // index b_hi*2+b_lo
    return lut[b_hi * 2 + b_lo];
}

}  // namespace

int bits_per_symbol(Scheme s) {
    return s == Scheme::qpsk ? 2 : 4;
}

ArrXcd map_symbols(const std::vector<std::uint8_t>& bits, Scheme scheme) {
    const int bps = bits_per_symbol(scheme);
    if (bits.size() % bps != 0)
        throw std::invalid_argument("map_symbols: bit count not a multiple of bits per symbol");
    const Eigen::Index n = static_cast<Eigen::Index>(bits.size()) / bps;
    ArrXcd out(n);
    if (scheme == Scheme::qpsk) {
        const double s = 1.0 / std::sqrt(2.0);
        for (Eigen::Index k = 0; k < n; ++k) {
            const int b0 = bits[2 * k], b1 = bits[2 * k + 1];
            out[k] = cplx((1 - 2 * b0) * s, (1 - 2 * b1) * s);
        }
    } else {
        const double s = 1.0 / std::sqrt(10.0);
        for (Eigen::Index k = 0; k < n; ++k) {
            const int b0 = bits[4 * k], b1 = bits[4 * k + 1];
            const int b2 = bits[4 * k + 2], b3 = bits[4 * k + 3];
            out[k] = cplx(qam16_level(b0, b1) * s, qam16_level(b2, b3) * s);
        }
    }
    return out;
}

std::vector<std::uint8_t> demap_symbols(const ArrXcd& symbols, Scheme scheme) {
    const int bps = bits_per_symbol(scheme);
    const int m = 1 << bps;

    // enumerate the constellation in bit order once
    std::vector<cplx> points(m);
    std::vector<std::uint8_t> tmp(bps);
    for (int v = 0; v < m; ++v) {
        for (int b = 0; b < bps; ++b) tmp[b] = (v >> (bps - 1 - b)) & 1;
        points[v] = map_symbols(tmp, scheme)[0];
    }

    std::vector<std::uint8_t> bits(static_cast<size_t>(symbols.size()) * bps);
    for (Eigen::Index k = 0; k < symbols.size(); ++k) {
        int best = 0;
        double best_d = std::norm(symbols[k] - points[0]);
        for (int v = 1; v < m; ++v) {
            const double d = std::norm(symbols[k] - points[v]);
            if (d < best_d) {  // strict: ties keep the smaller bit pattern
                best_d = d;
                best = v;
            }
        }
        for (int b = 0; b < bps; ++b)
            bits[static_cast<size_t>(k) * bps + b] = (best >> (bps - 1 - b)) & 1;
    }
    return bits;
}

ArrXcd zadoff_chu(int root, int length) {
    if (length < 1) throw std::invalid_argument("zadoff_chu: length < 1");
    if (std::gcd(root, length) != 1)
        throw std::invalid_argument("zadoff_chu: root and length must be coprime");
    ArrXcd out(length);
    const std::int64_t L = length, r = root;
    for (std::int64_t n = 0; n < L; ++n) {
        // exact phase via residues mod 2L, avoids precision loss at large n
        const std::int64_t q = (L % 2) ? (r * n % (2 * L) * ((n + 1) % (2 * L))) % (2 * L)
                                       : (r * n % (2 * L) * (n % (2 * L))) % (2 * L);
        const double phase = -pi * static_cast<double>(q) / static_cast<double>(L);
        out[n] = cplx(std::cos(phase), std::sin(phase));
    }
    return out;
}

double occupied_bw(const WaveformConfig& cfg) {
    return cfg.symbol_rate * (1.0 + cfg.rolloff);
}

ArrXd rrc_taps(double rolloff, int sps, int span) {
    if (sps < 1 || span < 2 || span % 2 != 0)
        throw std::invalid_argument("rrc_taps: need sps >= 1 and even span >= 2");
    if (rolloff <= 0.0 || rolloff >= 1.0)
        throw std::invalid_argument("rrc_taps: rolloff must be in (0, 1)");
    const int n = span * sps + 1;
    const int mid = span * sps / 2;
    ArrXd h(n);
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i - mid) / sps;  // in symbols
        double v;
        if (std::abs(t) < 1e-12) {
            v = 1.0 - rolloff + 4.0 * rolloff / pi;
        } else if (std::abs(std::abs(4.0 * rolloff * t) - 1.0) < 1e-9) {
            const double a = rolloff;
            v = a / std::sqrt(2.0) *
                ((1.0 + 2.0 / pi) * std::sin(pi / (4.0 * a)) +
                 (1.0 - 2.0 / pi) * std::cos(pi / (4.0 * a)));
        } else {
            const double num = std::sin(pi * t * (1.0 - rolloff)) +
                               4.0 * rolloff * t * std::cos(pi * t * (1.0 + rolloff));
            const double den = pi * t * (1.0 - std::pow(4.0 * rolloff * t, 2));
            v = num / den;
        }
        h[i] = v;
    }
    // raised-cosine taper over the outermost symbol on each side
    for (int i = 0; i < n; ++i) {
        const double at = std::abs(static_cast<double>(i - mid)) / sps;
        const double edge = span / 2.0 - 1.0;
        if (at > edge) {
            const double x = std::min(at - edge, 1.0);
            h[i] *= 0.5 * (1.0 + std::cos(pi * x));
        }
    }
    h /= std::sqrt(h.square().sum());
    return h;
}

ArrXcd frame_preamble(const WaveformConfig& cfg) {
    return zadoff_chu(cfg.zc_root, cfg.preamble);
}

ArrXcd build_frame(const ArrXcd& payload, const WaveformConfig& cfg) {
    const ArrXcd pre = frame_preamble(cfg);
    ArrXcd frame(pre.size() + payload.size());
    frame.head(pre.size()) = pre;
    frame.tail(payload.size()) = payload;
    return frame;
}

BasebandSignal rrc_modulate(const ArrXcd& frame, const WaveformConfig& cfg) {
    const ArrXd taps = rrc_taps(cfg.rolloff, cfg.sps, cfg.span);
    const Eigen::Index n = frame.size();
    const Eigen::Index len = (n + cfg.span) * cfg.sps;
    ArrXcd x = ArrXcd::Zero(len);
    const double amp = std::sqrt(static_cast<double>(cfg.sps));
    for (Eigen::Index k = 0; k < n; ++k)
        x[(k + cfg.span / 2) * cfg.sps] = amp * frame[k];
    BasebandSignal out;
    out.samples = apply_filter(x, taps);
    out.rate = cfg.symbol_rate * cfg.sps;
    return out;
}

SyncResult rrc_demodulate(const BasebandSignal& bb, const WaveformConfig& cfg,
                          Eigen::Index n_symbols) {
    const double want_rate = cfg.symbol_rate * cfg.sps;
    BasebandSignal sig = bb;
    if (std::abs(sig.rate - want_rate) > 1e-6 * want_rate)
        sig = resample(sig, want_rate);

    const ArrXd taps = rrc_taps(cfg.rolloff, cfg.sps, cfg.span);
    const ArrXcd y = apply_filter(sig.samples, taps);

    const ArrXcd pre = frame_preamble(cfg);
    const Eigen::Index np = pre.size();
    if (n_symbols < np) throw std::invalid_argument("rrc_demodulate: n_symbols < preamble");

    const Eigen::Index tail = (n_symbols - 1) * cfg.sps;
    Eigen::Index search = y.size() - tail;
    if (search < 1) throw std::invalid_argument("rrc_demodulate: signal too short");
    search = std::min<Eigen::Index>(search, 4 * cfg.span * cfg.sps);

    const double pre_energy = pre.abs2().sum();
    Eigen::Index best_off = 0;
    double best_metric = -1.0;
    for (Eigen::Index o = 0; o < search; ++o) {
        cplx acc(0.0, 0.0);
        double energy = 0.0;
        for (Eigen::Index k = 0; k < np; ++k) {
            const cplx v = y[o + k * cfg.sps];
            acc += std::conj(pre[k]) * v;
            energy += std::norm(v);
        }
        if (energy <= 0.0) continue;
        const double metric = std::norm(acc) / (energy * pre_energy);
        if (metric > best_metric) {
            best_metric = metric;
            best_off = o;
        }
    }

    SyncResult res;
    res.offset = best_off;
    res.peak = std::sqrt(std::max(best_metric, 0.0));
    res.symbols.resize(n_symbols);
    const double amp = std::sqrt(static_cast<double>(cfg.sps));
    for (Eigen::Index k = 0; k < n_symbols; ++k)
        res.symbols[k] = y[best_off + k * cfg.sps] / amp;
    return res;
}

ArrXcd extract_frame_symbols(const BasebandSignal& bb, const WaveformConfig& cfg,
                             Eigen::Index n_symbols) {
    const double want_rate = cfg.symbol_rate * cfg.sps;
    BasebandSignal sig = bb;
    if (std::abs(sig.rate - want_rate) > 1e-6 * want_rate)
        sig = resample(sig, want_rate);
    const ArrXd taps = rrc_taps(cfg.rolloff, cfg.sps, cfg.span);
    const ArrXcd y = apply_filter(sig.samples, taps);
    const Eigen::Index off = cfg.span / 2 * cfg.sps;
    if (off + (n_symbols - 1) * cfg.sps >= y.size())
        throw std::invalid_argument("extract_frame_symbols: signal too short");
    const double amp = std::sqrt(static_cast<double>(cfg.sps));
    ArrXcd out(n_symbols);
    for (Eigen::Index k = 0; k < n_symbols; ++k) out[k] = y[off + k * cfg.sps] / amp;
    return out;
}

// ------------------------------------------------------------------- OFDM --

BasebandSignal ofdm_modulate(const MatXcd& grid, const OfdmConfig& cfg) {
    const int occ = cfg.occupied;
    if (occ % 2 != 0 || occ >= cfg.nfft)
        throw std::invalid_argument("ofdm_modulate: occupied must be even and < nfft");
    if (grid.rows() != occ) throw std::invalid_argument("ofdm_modulate: grid rows != occupied");
    const int half = occ / 2;
    const Eigen::Index nsym = grid.cols();
    const Eigen::Index sym_len = cfg.nfft + cfg.cp;

    Eigen::FFT<double> fft;
    BasebandSignal out;
    out.rate = cfg.rate();
    out.samples.resize(nsym * sym_len);

    const double scale = static_cast<double>(cfg.nfft) / std::sqrt(static_cast<double>(occ));
    Eigen::VectorXcd freq = Eigen::VectorXcd::Zero(cfg.nfft);
    Eigen::VectorXcd time(cfg.nfft);
    for (Eigen::Index m = 0; m < nsym; ++m) {
        freq.setZero();
        for (int i = 0; i < half; ++i)
            freq[cfg.nfft - half + i] = grid(i, m);   // tones -half .. -1
        for (int i = half; i < occ; ++i)
            freq[i - half + 1] = grid(i, m);          // tones +1 .. +half
        fft.inv(time, freq);
        time *= scale;
        const Eigen::Index base = m * sym_len;
        for (int i = 0; i < cfg.cp; ++i)
            out.samples[base + i] = time[cfg.nfft - cfg.cp + i];
        for (int i = 0; i < cfg.nfft; ++i)
            out.samples[base + cfg.cp + i] = time[i];
    }
    return out;
}

MatXcd ofdm_demodulate(const BasebandSignal& bb, const OfdmConfig& cfg,
                       Eigen::Index offset, int n_symbols) {
    const int occ = cfg.occupied;
    const int half = occ / 2;
    const Eigen::Index sym_len = cfg.nfft + cfg.cp;
    if (offset < 0 || offset + n_symbols * sym_len > bb.samples.size())
        throw std::invalid_argument("ofdm_demodulate: window out of range");

    Eigen::FFT<double> fft;
    MatXcd grid(occ, n_symbols);
    const double scale = std::sqrt(static_cast<double>(occ)) / static_cast<double>(cfg.nfft);
    Eigen::VectorXcd time(cfg.nfft), freq(cfg.nfft);
    for (int m = 0; m < n_symbols; ++m) {
        const Eigen::Index base = offset + m * sym_len + cfg.cp;
        for (int i = 0; i < cfg.nfft; ++i) time[i] = bb.samples[base + i];
        fft.fwd(freq, time);
        for (int i = 0; i < half; ++i)
            grid(i, m) = freq[cfg.nfft - half + i] * scale;
        for (int i = half; i < occ; ++i)
            grid(i, m) = freq[i - half + 1] * scale;
    }
    return grid;
}

ArrXcd ofdm_pilot(const OfdmConfig& cfg) {
    return zadoff_chu(cfg.zc_root, cfg.occupied);
}

Eigen::Index correlate_offset(const ArrXcd& x, const ArrXcd& ref, Eigen::Index search) {
    const Eigen::Index n = ref.size();
    if (x.size() < n) throw std::invalid_argument("correlate_offset: signal shorter than reference");
    search = std::min(search, x.size() - n + 1);
    Eigen::Index best = 0;
    double best_m = -1.0;
    for (Eigen::Index o = 0; o < search; ++o) {
        cplx acc(0.0, 0.0);
        double energy = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            acc += std::conj(ref[i]) * x[o + i];
            energy += std::norm(x[o + i]);
        }
        const double m = energy > 0.0 ? std::norm(acc) / energy : 0.0;
        if (m > best_m) {
            best_m = m;
            best = o;
        }
    }
    return best;
}

}  // namespace rofsim
