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

#include "rofsim/cu_dsp.hpp"
#include "rofsim/modem.hpp"
#include "rofsim/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

using namespace rofsim;

namespace {

std::vector<std::uint8_t> random_bits(Rng& rng, int n) {
    std::vector<std::uint8_t> bits(n);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next() & 1);
    return bits;
}

}  // namespace

TEST_CASE("mapped constellations have unit average power") {
    Rng rng(1);
    for (Scheme s : {Scheme::qpsk, Scheme::qam16}) {
        const auto bits = random_bits(rng, 4000 * bits_per_symbol(s));
        const ArrXcd sym = map_symbols(bits, s);
        CHECK(sym.abs2().mean() == Catch::Approx(1.0).margin(0.03));
    }
}

TEST_CASE("mapping hand values, most significant bit first") {
    const double q = 1.0 / std::sqrt(2.0);
    const ArrXcd a = map_symbols({0, 0}, Scheme::qpsk);
    CHECK(a[0].real() == Catch::Approx(q));
    CHECK(a[0].imag() == Catch::Approx(q));
    const ArrXcd b = map_symbols({1, 0}, Scheme::qpsk);
    CHECK(b[0].real() == Catch::Approx(-q));
    CHECK(b[0].imag() == Catch::Approx(q));

    const double s = 1.0 / std::sqrt(10.0);
    const ArrXcd c = map_symbols({0, 0, 0, 0}, Scheme::qam16);
    CHECK(c[0].real() == Catch::Approx(-3.0 * s));
    CHECK(c[0].imag() == Catch::Approx(-3.0 * s));
    const ArrXcd d = map_symbols({1, 0, 1, 1}, Scheme::qam16);
    CHECK(d[0].real() == Catch::Approx(3.0 * s));
    CHECK(d[0].imag() == Catch::Approx(1.0 * s));
}

TEST_CASE("per axis bit labels are gray coded") {
    // stepping across the four amplitude levels flips exactly one bit
    const std::vector<std::vector<std::uint8_t>> order = {
        {0, 0}, {0, 1}, {1, 1}, {1, 0}};  // -3 -1 +1 +3
    double prev = -10.0;
    for (size_t k = 0; k < order.size(); ++k) {
        const ArrXcd s = map_symbols(
            {order[k][0], order[k][1], 0, 0}, Scheme::qam16);
        CHECK(s[0].real() > prev);
        prev = s[0].real();
        if (k > 0) {
            int flips = (order[k][0] != order[k - 1][0]) +
                        (order[k][1] != order[k - 1][1]);
            CHECK(flips == 1);
        }
    }
}

TEST_CASE("hard decisions invert the mapper") {
    Rng rng(2);
    for (Scheme s : {Scheme::qpsk, Scheme::qam16}) {
        const auto bits = random_bits(rng, 1024 * bits_per_symbol(s));
        const auto back = demap_symbols(map_symbols(bits, s), s);
        CHECK(back == bits);
    }
}

TEST_CASE("mapper rejects ragged bit vectors") {
    CHECK_THROWS(map_symbols({0, 1, 0}, Scheme::qam16));
}

TEST_CASE("zadoff-chu sequences are flat with delta autocorrelation") {
    const int n = 64, root = 25;
    const ArrXcd z = zadoff_chu(root, n);
    for (Eigen::Index i = 0; i < n; ++i)
        CHECK(std::abs(z[i]) == Catch::Approx(1.0).epsilon(1e-12));
    for (int lag = 1; lag < n; ++lag) {
        cplx acc(0.0, 0.0);
        for (int i = 0; i < n; ++i) acc += z[i] * std::conj(z[(i + lag) % n]);
        CHECK(std::abs(acc) < 1e-9 * n);
    }
}

TEST_CASE("pulse taps are unit energy and interference free at symbol spacing") {
    const int sps = 8, span = 32;
    const ArrXd h = rrc_taps(0.2, sps, span);
    CHECK(h.size() == span * sps + 1);
    CHECK(h.square().sum() == Catch::Approx(1.0).epsilon(1e-9));

    // matched cascade sampled at symbol spacing: unity center, tiny sidelobes
    const Eigen::Index m = h.size();
    ArrXd g = ArrXd::Zero(2 * m - 1);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) g[i + j] += h[i] * h[j];
    const Eigen::Index center = m - 1;
    CHECK(g[center] == Catch::Approx(1.0).epsilon(1e-6));
    for (int k = 1; k <= span; ++k) {
        CHECK(std::abs(g[center + k * sps]) < 2e-3);
        CHECK(std::abs(g[center - k * sps]) < 2e-3);
    }
}

TEST_CASE("frame layout places the preamble first") {
    WaveformConfig wf;
    Rng rng(3);
    const ArrXcd payload = map_symbols(random_bits(rng, 100 * 4), wf.scheme);
    const ArrXcd frame = build_frame(payload, wf);
    const ArrXcd pre = frame_preamble(wf);
    REQUIRE(frame.size() == pre.size() + payload.size());
    CHECK((frame.head(pre.size()) - pre).abs().maxCoeff() == 0.0);
    CHECK((frame.tail(payload.size()) - payload).abs().maxCoeff() == 0.0);
}

TEST_CASE("single carrier frames round trip through the matched filter") {
    WaveformConfig wf;
    Rng rng(4);
    const ArrXcd payload = map_symbols(random_bits(rng, 500 * 4), wf.scheme);
    const ArrXcd frame = build_frame(payload, wf);
    const BasebandSignal bb = rrc_modulate(frame, wf);
    CHECK(bb.rate == wf.symbol_rate * wf.sps);

    const SyncResult sync = rrc_demodulate(bb, wf, frame.size());
    CHECK(sync.offset == (wf.span / 2) * wf.sps);
    CHECK(sync.peak > 0.95);
    const ArrXcd rx_payload = sync.symbols.tail(payload.size());
    CHECK(evm_percent(rx_payload, payload) < 0.2);
}

TEST_CASE("timing recovery absorbs a bulk delay") {
    WaveformConfig wf;
    Rng rng(5);
    const ArrXcd payload = map_symbols(random_bits(rng, 200 * 4), wf.scheme);
    const ArrXcd frame = build_frame(payload, wf);
    BasebandSignal bb = rrc_modulate(frame, wf);

    const Eigen::Index delay = 37;
    ArrXcd shifted = ArrXcd::Zero(bb.samples.size() + delay);
    shifted.tail(bb.samples.size()) = bb.samples;
    bb.samples = shifted;

    const SyncResult sync = rrc_demodulate(bb, wf, frame.size());
    CHECK(sync.offset == (wf.span / 2) * wf.sps + delay);
    CHECK(evm_percent(sync.symbols.tail(payload.size()), payload) < 0.2);
}

TEST_CASE("coherent extraction preserves complex scale") {
    WaveformConfig wf;
    Rng rng(6);
    const ArrXcd payload = map_symbols(random_bits(rng, 200 * 4), wf.scheme);
    const ArrXcd frame = build_frame(payload, wf);
    const BasebandSignal bb = rrc_modulate(frame, wf);

    const cplx g(0.3, -0.8);
    BasebandSignal scaled;
    scaled.rate = bb.rate;
    scaled.samples = bb.samples * g;

    const ArrXcd s0 = extract_frame_symbols(bb, wf, frame.size());
    const ArrXcd s1 = extract_frame_symbols(scaled, wf, frame.size());
    CHECK((s1 - g * s0).abs().maxCoeff() < 1e-9);
}

TEST_CASE("multicarrier grids round trip") {
    OfdmConfig cfg;
    cfg.occupied = 40;
    Rng rng(7);
    const int n_sym = 6;
    MatXcd grid(cfg.occupied, n_sym);
    for (int c = 0; c < n_sym; ++c)
        grid.col(c) = map_symbols(random_bits(rng, cfg.occupied * 4),
                                  Scheme::qam16).matrix();

    const BasebandSignal bb = ofdm_modulate(grid, cfg);
    CHECK(bb.rate == cfg.rate());
    REQUIRE(bb.samples.size() == static_cast<Eigen::Index>(n_sym) * (cfg.nfft + cfg.cp));

    const MatXcd back = ofdm_demodulate(bb, cfg, 0, n_sym);
    CHECK((back - grid).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("multicarrier demodulation honors a sample offset") {
    OfdmConfig cfg;
    cfg.occupied = 40;
    Rng rng(8);
    MatXcd grid(cfg.occupied, 2);
    grid.col(0) = map_symbols(random_bits(rng, cfg.occupied * 4), Scheme::qam16).matrix();
    grid.col(1) = map_symbols(random_bits(rng, cfg.occupied * 4), Scheme::qam16).matrix();
    const BasebandSignal bb = ofdm_modulate(grid, cfg);

    BasebandSignal delayed;
    delayed.rate = bb.rate;
    delayed.samples = ArrXcd::Zero(bb.samples.size() + 100);
    delayed.samples.tail(bb.samples.size()) = bb.samples;

    const MatXcd back = ofdm_demodulate(delayed, cfg, 100, 2);
    CHECK((back - grid).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("multicarrier pilot covers every occupied bin with unit modulus") {
    OfdmConfig cfg;
    const ArrXcd p = ofdm_pilot(cfg);
    REQUIRE(p.size() == cfg.occupied);
    for (Eigen::Index i = 0; i < p.size(); ++i)
        CHECK(std::abs(p[i]) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("correlation search finds a planted shift") {
    Rng rng(9);
    const ArrXcd ref = rng.cgaussian_vector(128);
    ArrXcd x = ArrXcd::Zero(1024);
    x.segment(311, 128) = ref;
    x += 0.05 * rng.cgaussian_vector(1024);
    CHECK(correlate_offset(x, ref, 1024 - 128) == 311);
}
