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
#include "rofsim/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace rofsim;

namespace {

MatXcd random_matrix(int rows, int cols, Rng& rng) {
    MatXcd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.cgaussian();
    return m;
}

double offdiag_leak_db(const MatXcd& m) {
    double diag = 0.0, off = 0.0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            const double p = std::norm(m(i, j));
            if (i == j)
                diag += p;
            else
                off += p;
        }
    return 10.0 * std::log10(off / diag);
}

}  // namespace

TEST_CASE("least squares recovers an exact channel from clean pilots") {
    Rng rng(21);
    const MatXcd h = random_matrix(3, 2, rng);
    const MatXcd pilots = random_matrix(2, 64, rng);
    const MatXcd y = h * pilots;
    const MatXcd est = ls_channel_estimate(y, pilots);
    CHECK((est - h).norm() / h.norm() < 1e-12);
}

TEST_CASE("precoding nulls the cross streams and meets the power budget") {
    Rng rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        const MatXcd h = random_matrix(3, 2, rng);
        const double budget = 2.5;
        const MatXcd p = zf_precoder(h, budget);
        REQUIRE(p.rows() == 3);
        REQUIRE(p.cols() == 2);
        CHECK(p.squaredNorm() == Catch::Approx(budget).epsilon(1e-10));
        const MatXcd eff = h.transpose() * p;
        CHECK(offdiag_leak_db(eff) < -200.0);
    }
}

TEST_CASE("combining inverts the uplink mixture") {
    Rng rng(23);
    const MatXcd h = random_matrix(3, 2, rng);
    const MatXcd w = zf_combiner(h);
    REQUIRE(w.rows() == 2);
    REQUIRE(w.cols() == 3);
    const MatXcd eff = w * h;
    CHECK((eff - MatXcd::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("calibration scaling rotates rows and keeps the power") {
    Rng rng(24);
    const MatXcd p = random_matrix(3, 2, rng);
    ArrXcd c(3);
    c << cplx(1.0, 0.0), cplx(0.2, 1.1), cplx(-0.7, 0.4);
    const MatXcd q = apply_calibration(p, c);
    CHECK(q.squaredNorm() == Catch::Approx(p.squaredNorm()).epsilon(1e-12));
    // rows keep their direction relative to the coefficients
    const cplx r0 = q(0, 0) / (c(0) * p(0, 0));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(q(i, j) / (c(i) * p(i, j)) - r0) < 1e-12);
}

TEST_CASE("a single-tap equalizer inverts a complex gain") {
    Rng rng(25);
    ArrXcd ref(64);
    for (Eigen::Index i = 0; i < ref.size(); ++i) ref[i] = rng.cgaussian();
    const cplx g(0.4, -1.3);
    const ArrXcd rx = ref * g;
    const ArrXcd taps = ls_equalizer_taps(rx, ref, 1);
    REQUIRE(taps.size() == 1);
    CHECK(std::abs(taps[0] - 1.0 / g) < 1e-12);
}

TEST_CASE("a short equalizer flattens a leaky symbol channel") {
    Rng rng(26);
    ArrXcd ref(4096);
    for (Eigen::Index i = 0; i < ref.size(); ++i) ref[i] = rng.cgaussian();

    // causal three-tap smear applied at symbol rate
    ArrXcd rx = ref;
    for (Eigen::Index i = 1; i < ref.size(); ++i) rx[i] += 0.1 * ref[i - 1];
    for (Eigen::Index i = 2; i < ref.size(); ++i) rx[i] += -0.05 * ref[i - 2];

    const ArrXcd taps = ls_equalizer_taps(rx, ref, 11);
    const ArrXcd eq = apply_symbol_fir(rx, taps);
    const Eigen::Index skip = 16;
    const Eigen::Index n = ref.size() - 2 * skip;
    const double evm = evm_percent(eq.segment(skip, n), ref.segment(skip, n));
    CHECK(evm < 0.1);
}

TEST_CASE("error magnitude ignores a common complex scale") {
    Rng rng(27);
    ArrXcd ref(256);
    for (Eigen::Index i = 0; i < ref.size(); ++i) ref[i] = rng.cgaussian();
    CHECK(evm_percent(ref, ref) < 1e-12);
    const ArrXcd scaled = ref * cplx(1.1, -0.4);
    CHECK(evm_percent(scaled, ref) < 1e-10);
}

TEST_CASE("orthogonal error of one tenth reads ten percent") {
    // error sequence orthogonal to the reference leaves the scale at unity
    const Eigen::Index n = 512;
    ArrXcd ref(n), rx(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        ref[i] = (i % 2 == 0) ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        rx[i] = ref[i] + cplx(0.0, 0.1) * sign * ref[i];
    }
    CHECK(evm_percent(rx, ref) == Catch::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("measured error tracks the injected noise level") {
    Rng rng(28);
    const Eigen::Index n = 20000;
    ArrXcd ref(n);
    for (Eigen::Index i = 0; i < n; ++i) ref[i] = rng.cgaussian();
    for (double snr_db : {10.0, 20.0, 30.0}) {
        const double sigma = std::pow(10.0, -snr_db / 20.0);
        ArrXcd rx = ref;
        for (Eigen::Index i = 0; i < n; ++i) rx[i] += sigma * rng.cgaussian();
        const double want = 100.0 * sigma;
        CHECK(evm_percent(rx, ref) == Catch::Approx(want).epsilon(0.02));
    }
}

TEST_CASE("equalizer input checks reject unusable requests") {
    ArrXcd ref = ArrXcd::Ones(16);
    CHECK_THROWS(ls_equalizer_taps(ref, ref, 0));
    CHECK_THROWS(ls_equalizer_taps(ref, ref, 5));  // needs 4x taps of training
    ArrXcd longer = ArrXcd::Ones(17);
    CHECK_THROWS(ls_equalizer_taps(longer, ref, 4));
}
