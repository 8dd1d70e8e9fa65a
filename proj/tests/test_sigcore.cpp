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

#include "rofsim/rng.hpp"
#include "rofsim/sigcore.hpp"

#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <numeric>

using namespace rofsim;

TEST_CASE("power conversions follow the 50 ohm convention") {
    CHECK(dbm_to_watts(0.0) == Catch::Approx(1e-3).epsilon(1e-12));
    CHECK(dbm_to_watts(30.0) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(watts_to_dbm(1e-3) == Catch::Approx(0.0).margin(1e-12));
    CHECK(dbm_to_vrms(0.0) == Catch::Approx(0.223606797750).epsilon(1e-10));
    CHECK(dbm_to_vrms(-26.6) == Catch::Approx(1.045887571384e-2).epsilon(1e-10));
    for (double dbm : {-80.0, -26.6, 0.0, 17.3}) {
        CHECK(watts_to_dbm(dbm_to_watts(dbm)) == Catch::Approx(dbm).margin(1e-10));
    }
}

TEST_CASE("vector power measurement and rescale agree") {
    Rng rng(7);
    ArrXcd v = rng.cgaussian_vector(5000);
    const double before = power_dbm(v);
    const double gain = scale_to_power_dbm(v, -12.0);
    CHECK(power_dbm(v) == Catch::Approx(-12.0).margin(1e-9));
    // the returned factor is the one that was applied
    CHECK(20.0 * std::log10(gain) == Catch::Approx(-12.0 - before).margin(1e-9));

    ArrXd r = rng.gaussian_vector(5000);
    scale_to_power_dbm(r, -3.0);
    CHECK(power_dbm(r) == Catch::Approx(-3.0).margin(1e-9));
    CHECK(mean_square(r) == Catch::Approx(dbm_to_watts(-3.0) * 50.0).epsilon(1e-9));
}

TEST_CASE("byte hash matches the published test vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("derived seeds separate experiments, points and repeats") {
    const std::uint64_t s = derive_seed(1, "alpha", 0, 0);
    CHECK(s == derive_seed(1, "alpha", 0, 0));
    CHECK(s != derive_seed(2, "alpha", 0, 0));
    CHECK(s != derive_seed(1, "beta", 0, 0));
    CHECK(s != derive_seed(1, "alpha", 1, 0));
    CHECK(s != derive_seed(1, "alpha", 0, 1));
}

TEST_CASE("generator streams are reproducible and well scaled") {
    Rng a(42), b(42);
    for (int i = 0; i < 64; ++i) CHECK(a.next() == b.next());

    Rng rng(3);
    const Eigen::Index n = 200000;
    const ArrXd g = rng.gaussian_vector(n);
    CHECK(std::abs(g.mean()) < 0.01);
    CHECK(g.square().mean() == Catch::Approx(1.0).margin(0.02));
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    const ArrXcd c = rng.cgaussian_vector(n);
    CHECK(c.abs2().mean() == Catch::Approx(1.0).margin(0.02));
}

TEST_CASE("lowpass design meets its band edges") {
    FilterSpec spec;
    spec.kind = FilterSpec::Kind::lowpass;
    spec.pass_hi = 10e6;
    spec.transition = 5e6;
    spec.atten_db = 60.0;
    const double rate = 100e6;
    const ArrXd taps = design_fir(spec, rate);
    CHECK(taps.size() % 2 == 1);

    CHECK(std::abs(testsup::tap_response(taps, 0.0)) == Catch::Approx(1.0).margin(2e-3));
    CHECK(std::abs(testsup::tap_response(taps, 5e6 / rate)) ==
          Catch::Approx(1.0).margin(2e-3));
    for (double f : {15e6, 20e6, 30e6, 45e6}) {
        const double mag = std::abs(testsup::tap_response(taps, f / rate));
        CHECK(20.0 * std::log10(mag) < -58.0);
    }
}

TEST_CASE("filtering is zero phase inside the passband") {
    FilterSpec spec;
    spec.pass_hi = 10e6;
    spec.transition = 5e6;
    const ArrXd taps = design_fir(spec, 100e6);

    const Eigen::Index n = 4096;
    ArrXd x(n);
    for (Eigen::Index i = 0; i < n; ++i)
        x[i] = std::sin(2.0 * std::numbers::pi * 4e6 / 100e6 * static_cast<double>(i));
    const ArrXd y = apply_filter(x, taps);
    // interior samples line up with the input with no delay
    const Eigen::Index guard = taps.size();
    double worst = 0.0;
    for (Eigen::Index i = guard; i < n - guard; ++i)
        worst = std::max(worst, std::abs(y[i] - x[i]));
    CHECK(worst < 5e-3);
}

TEST_CASE("resampling preserves an in-band tone") {
    const double in_rate = 8e6, out_rate = 10e6, f = 1e6;
    const Eigen::Index n = 4000;
    BasebandSignal in;
    in.rate = in_rate;
    in.samples = carrier_phasor(f, in_rate, n, 1);
    const BasebandSignal out = resample(in, out_rate);
    CHECK(out.rate == out_rate);

    // output sample m sits at time m / out_rate
    const ArrXcd want = carrier_phasor(f, out_rate, out.samples.size(), 1);
    const Eigen::Index guard = 200;
    double worst = 0.0;
    for (Eigen::Index m = guard; m < out.samples.size() - guard; ++m)
        worst = std::max(worst, std::abs(out.samples[m] - want[m]));
    CHECK(worst < 1e-3);
}

TEST_CASE("rate ratios reduce to coprime integers") {
    const auto [p1, q1] = rate_ratio(10e6, 8e6);
    CHECK(p1 == 5);
    CHECK(q1 == 4);
    const auto [p2, q2] = rate_ratio(122.88e6, 10e9);
    CHECK(std::gcd(p2, q2) == 1);
    CHECK(static_cast<double>(p2) / static_cast<double>(q2) ==
          Catch::Approx(122.88e6 / 10e9).epsilon(1e-15));
}

TEST_CASE("mixing up and down returns the envelope") {
    Rng rng(11);
    const double bb_rate = 8e6, rf_rate = 64e6, fc = 20e6;
    BasebandSignal bb;
    bb.rate = bb_rate;
    bb.samples = rng.cgaussian_vector(2000);
    // confine the envelope inside the mixer's passband
    FilterSpec lp;
    lp.pass_hi = 2e6;
    lp.transition = 1e6;
    bb.samples = apply_filter(bb.samples, design_fir(lp, bb_rate));

    const PassbandSignal rf = upconvert(bb, fc, rf_rate);
    CHECK(rf.rate == rf_rate);
    // passband power equals envelope power
    CHECK(power_dbm(rf.samples) == Catch::Approx(power_dbm(bb.samples)).margin(0.1));

    const BasebandSignal back = downconvert(rf, fc, bb_rate);
    const Eigen::Index guard = 400;
    double err = 0.0, ref = 0.0;
    for (Eigen::Index i = guard; i < back.samples.size() - guard; ++i) {
        err += std::norm(back.samples[i] - bb.samples[i]);
        ref += std::norm(bb.samples[i]);
    }
    CHECK(std::sqrt(err / ref) < 1e-2);
}

TEST_CASE("carrier table is phase exact") {
    const ArrXcd ph = carrier_phasor(17e6, 10e9, 1000, -1);
    for (Eigen::Index i : {Eigen::Index(0), Eigen::Index(499), Eigen::Index(999)}) {
        const double ang = -2.0 * std::numbers::pi * 17e6 / 10e9 * static_cast<double>(i);
        CHECK(std::abs(ph[i] - std::polar(1.0, ang)) < 1e-12);
    }
}

TEST_CASE("spectral estimate integrates to the signal power") {
    Rng rng(5);
    ArrXd x = rng.gaussian_vector(1 << 16);
    x *= 0.5;
    const Psd psd = welch_psd(x, 1e6);
    const double total = band_power(psd, 0.0, 0.5e6);
    CHECK(total == Catch::Approx(mean_square(x)).epsilon(0.05));
}

TEST_CASE("spectral estimate localizes a tone") {
    const double rate = 1e6, f0 = 123e3;
    ArrXd x(1 << 15);
    for (Eigen::Index i = 0; i < x.size(); ++i)
        x[i] = std::cos(2.0 * std::numbers::pi * f0 / rate * static_cast<double>(i));
    const Psd psd = welch_psd(x, rate);
    Eigen::Index peak = 0;
    psd.pxx.maxCoeff(&peak);
    CHECK(std::abs(psd.freq[peak] - f0) < 2.0 * psd.df);
    // nearly all power concentrates around the tone
    CHECK(band_power(psd, f0 - 5e3, f0 + 5e3) ==
          Catch::Approx(mean_square(x)).epsilon(0.02));
}

TEST_CASE("welch output matches a direct transform on a short block") {
    // cross-check the estimator's frequency axis with the direct-sum oracle
    const Eigen::Index n = 256;
    ArrXcd x(n);
    for (Eigen::Index i = 0; i < n; ++i)
        x[i] = std::polar(1.0, 2.0 * std::numbers::pi * 32.0 * i / double(n));
    const ArrXcd spectrum = testsup::direct_dft(x);
    Eigen::Index kmax = 0;
    spectrum.abs().maxCoeff(&kmax);
    CHECK(kmax == 32);

    const Psd psd = welch_psd(x, 256.0, 256);
    Eigen::Index pmax = 0;
    psd.pxx.maxCoeff(&pmax);
    CHECK(psd.freq[pmax] == Catch::Approx(32.0).margin(1.01));
}
