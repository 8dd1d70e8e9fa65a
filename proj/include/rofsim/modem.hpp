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

#include <cstdint>
#include <vector>

namespace rofsim {

enum class Scheme { qpsk, qam16 };

int bits_per_symbol(Scheme s);

// Gray-mapped constellations with unit average power. Bits are given as a
// flat 0/1 vector, most significant bit of each symbol first.
ArrXcd map_symbols(const std::vector<std::uint8_t>& bits, Scheme scheme);

// Hard decision; distance ties resolve to the lexicographically smallest
// bit pattern.
std::vector<std::uint8_t> demap_symbols(const ArrXcd& symbols, Scheme scheme);

// Zadoff-Chu sequence; gcd(root, length) must be 1.
ArrXcd zadoff_chu(int root, int length);

// ------------------------------------------------------------ single carrier

struct WaveformConfig {
    Scheme scheme = Scheme::qam16;
    double symbol_rate = 10e6;
    double rolloff = 0.2;
    int sps = 8;       // samples per symbol at the shaping rate
    int span = 32;     // pulse span in symbols
    int preamble = 64; // Zadoff-Chu preamble symbols prepended by frame()
    int zc_root = 25;
};

// occupied bandwidth, symbol_rate * (1 + rolloff)
double occupied_bw(const WaveformConfig& cfg);

// Root-raised-cosine taps: span*sps + 1 taps, unit energy, a raised-cosine
// taper over the outermost symbol on each side to soften truncation.
ArrXd rrc_taps(double rolloff, int sps, int span);

// preamble followed by the payload symbols
ArrXcd build_frame(const ArrXcd& payload, const WaveformConfig& cfg);
ArrXcd frame_preamble(const WaveformConfig& cfg);

// Pulse-shape a symbol frame. The waveform is padded by span guard symbols
// on each side; symbol k peaks at sample (k + span/2) * sps.
BasebandSignal rrc_modulate(const ArrXcd& frame, const WaveformConfig& cfg);

struct SyncResult {
    ArrXcd symbols;        // recovered frame, preamble included
    Eigen::Index offset = 0;  // sample offset of the first preamble symbol
    double peak = 0.0;        // normalized correlation peak magnitude
};

// Matched filter plus preamble-correlation timing recovery.
SyncResult rrc_demodulate(const BasebandSignal& bb, const WaveformConfig& cfg,
                          Eigen::Index n_symbols);

// Matched filter sampled at the nominal zero-delay timing, for streams that
// must stay phase-coherent across antennas and cannot be re-timed per link.
ArrXcd extract_frame_symbols(const BasebandSignal& bb, const WaveformConfig& cfg,
                             Eigen::Index n_symbols);

// ------------------------------------------------------------------- OFDM --

struct OfdmConfig {
    double scs = 60e3;     // subcarrier spacing
    int nfft = 2048;
    int cp = 144;          // cyclic prefix samples
    int occupied = 200;    // even; split around an unused DC bin
    int zc_root = 1;       // pilot sequence root
    double rate() const { return scs * nfft; }
    double occupied_bw() const { return scs * occupied; }
};

// Map a grid of symbols (occupied x n_symbols) onto centered subcarriers,
// DC unused, cyclic prefix prepended per symbol.
BasebandSignal ofdm_modulate(const MatXcd& grid, const OfdmConfig& cfg);

// Remove CP and FFT back to the occupied grid. `offset` is the sample index
// of the first symbol's CP start.
MatXcd ofdm_demodulate(const BasebandSignal& bb, const OfdmConfig& cfg,
                       Eigen::Index offset, int n_symbols);

// frequency-domain pilot covering all occupied subcarriers
ArrXcd ofdm_pilot(const OfdmConfig& cfg);

// Correlate against a reference waveform; returns the offset with the
// largest correlation magnitude over [0, search).
Eigen::Index correlate_offset(const ArrXcd& x, const ArrXcd& ref, Eigen::Index search);

}  // namespace rofsim
