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

#include "rofsim/sigcore.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace rofsim {

namespace {

constexpr double kPi = std::numbers::pi;

double bessel_i0(double x) {
    // power series; converges quickly for the beta range used here
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

double kaiser_beta(double atten_db) {
    if (atten_db > 50.0) return 0.1102 * (atten_db - 8.7);
    if (atten_db > 21.0)
        return 0.5842 * std::pow(atten_db - 21.0, 0.4) + 0.07886 * (atten_db - 21.0);
    return 0.0;
}

Eigen::Index kaiser_order(double atten_db, double delta_f, double rate) {
    const double dw = 2.0 * kPi * delta_f / rate;
    const double n = (std::max(atten_db, 21.0) - 7.95) / (2.285 * dw);
    return static_cast<Eigen::Index>(std::ceil(n)) + 1;
}

ArrXd kaiser_window(Eigen::Index n, double beta) {
    ArrXd w(n);
    const double denom = bessel_i0(beta);
    const double half = 0.5 * static_cast<double>(n - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r = (static_cast<double>(i) - half) / half;
        w[i] = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / denom;
    }
    return w;
}

// ideal lowpass impulse response sample, cutoff fc (Hz) at `rate`, offset k
double sinc_lp(double fc, double rate, double k) {
    const double x = 2.0 * fc / rate;
    if (k == 0.0) return x;
    const double a = kPi * k;
    return x * std::sin(a * x) / (a * x);
}

}  // namespace

// ------------------------------------------------------------------ power --

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double dbm_to_vrms(double dbm) { return std::sqrt(dbm_to_watts(dbm) * 50.0); }

double mean_square(const ArrXd& v) {
    if (v.size() == 0) throw std::invalid_argument("mean_square: empty signal");
    return v.square().mean();
}

double mean_square(const ArrXcd& v) {
    if (v.size() == 0) throw std::invalid_argument("mean_square: empty signal");
    return v.abs2().mean();
}

double power_dbm(const ArrXd& v) { return watts_to_dbm(mean_square(v) / 50.0); }

double power_dbm(const ArrXcd& v) { return watts_to_dbm(mean_square(v) / 50.0); }

double scale_to_power_dbm(ArrXd& v, double dbm) {
    const double ms = mean_square(v);
    if (ms <= 0.0) throw std::invalid_argument("scale_to_power_dbm: zero signal");
    const double g = std::sqrt(dbm_to_watts(dbm) * 50.0 / ms);
    v *= g;
    return g;
}

double scale_to_power_dbm(ArrXcd& v, double dbm) {
    const double ms = mean_square(v);
    if (ms <= 0.0) throw std::invalid_argument("scale_to_power_dbm: zero signal");
    const double g = std::sqrt(dbm_to_watts(dbm) * 50.0 / ms);
    v *= g;
    return g;
}

// -------------------------------------------------------------------- FIR --

ArrXd design_fir(const FilterSpec& spec, double rate) {
    if (rate <= 0.0) throw std::invalid_argument("design_fir: rate must be positive");
    if (spec.transition <= 0.0)
        throw std::invalid_argument("design_fir: transition width must be positive");
    const double nyq = 0.5 * rate;

    // cutoffs sit in the middle of each transition band
    double c_lo = 0.0, c_hi = 0.0;
    switch (spec.kind) {
        case FilterSpec::Kind::lowpass:
            c_hi = spec.pass_hi + 0.5 * spec.transition;
            if (spec.pass_hi <= 0.0 || c_hi >= nyq)
                throw std::invalid_argument("design_fir: lowpass edge out of range");
            break;
        case FilterSpec::Kind::highpass:
            c_lo = spec.pass_lo - 0.5 * spec.transition;
            if (c_lo <= 0.0 || spec.pass_lo >= nyq)
                throw std::invalid_argument("design_fir: highpass edge out of range");
            break;
        case FilterSpec::Kind::bandpass:
        case FilterSpec::Kind::bandstop:
            c_lo = spec.pass_lo - 0.5 * spec.transition;
            c_hi = spec.pass_hi + 0.5 * spec.transition;
            if (c_lo <= 0.0 || c_hi >= nyq || spec.pass_lo >= spec.pass_hi)
                throw std::invalid_argument("design_fir: band edges out of range");
            break;
    }

    Eigen::Index n = kaiser_order(spec.atten_db, spec.transition, rate);
    if (n % 2 == 0) ++n;
    const double beta = kaiser_beta(spec.atten_db);
    const ArrXd w = kaiser_window(n, beta);
    const Eigen::Index d = (n - 1) / 2;

    ArrXd h(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double k = static_cast<double>(i - d);
        double v = 0.0;
        switch (spec.kind) {
            case FilterSpec::Kind::lowpass:
                v = sinc_lp(c_hi, rate, k);
                break;
            case FilterSpec::Kind::highpass:
                v = (k == 0.0 ? 1.0 : 0.0) - sinc_lp(c_lo, rate, k);
                break;
            case FilterSpec::Kind::bandpass:
                v = sinc_lp(c_hi, rate, k) - sinc_lp(c_lo, rate, k);
                break;
            case FilterSpec::Kind::bandstop:
                v = (k == 0.0 ? 1.0 : 0.0) -
                    (sinc_lp(c_hi, rate, k) - sinc_lp(c_lo, rate, k));
                break;
        }
        h[i] = v * w[i];
    }
    return h;
}

namespace {

// y[i] = sum_j rev(h)[j] * xpad[i + j]; equals zero-phase "same" filtering
template <typename Arr>
Arr fir_same(const Arr& x, const ArrXd& taps) {
    if (taps.size() % 2 == 0) throw std::invalid_argument("apply_filter: taps must be odd");
    const Eigen::Index n = x.size();
    const Eigen::Index t = taps.size();
    const Eigen::Index d = (t - 1) / 2;
    Arr pad = Arr::Zero(n + t - 1);
    pad.segment(d, n) = x;
    const ArrXd hr = taps.reverse();
    Arr y(n);
    if constexpr (std::is_same_v<Arr, ArrXd>) {
        const auto hv = hr.matrix();
        for (Eigen::Index i = 0; i < n; ++i)
            y[i] = pad.segment(i, t).matrix().dot(hv);
    } else {
        ArrXd pr = pad.real();
        ArrXd pi = pad.imag();
        const auto hv = hr.matrix();
        for (Eigen::Index i = 0; i < n; ++i) {
            y[i] = cplx(pr.segment(i, t).matrix().dot(hv),
                        pi.segment(i, t).matrix().dot(hv));
        }
    }
    return y;
}

}  // namespace

ArrXd apply_filter(const ArrXd& x, const ArrXd& taps) { return fir_same(x, taps); }

ArrXcd apply_filter(const ArrXcd& x, const ArrXd& taps) { return fir_same(x, taps); }

// ------------------------------------------------------------- resampling --

std::pair<std::int64_t, std::int64_t> rate_ratio(double out_rate, double in_rate) {
    const auto oi = static_cast<std::int64_t>(std::llround(out_rate));
    const auto ii = static_cast<std::int64_t>(std::llround(in_rate));
    if (oi <= 0 || ii <= 0 || std::abs(out_rate - static_cast<double>(oi)) > 1e-6 ||
        std::abs(in_rate - static_cast<double>(ii)) > 1e-6)
        throw std::invalid_argument("rate_ratio: rates must be integral Hz");
    const std::int64_t g = std::gcd(oi, ii);
    return {oi / g, ii / g};
}

namespace {

struct PolyphaseBank {
    std::vector<ArrXd> branch;  // reversed branch taps, one per phase
    Eigen::Index half = 0;      // filter half span in input samples
    std::int64_t p = 1, q = 1;
};

// cache keyed by (p, q, pass, stop, atten, in_rate)
using BankKey = std::tuple<std::int64_t, std::int64_t, double, double, double, double>;
std::map<BankKey, std::shared_ptr<const PolyphaseBank>> g_bank_cache;
std::mutex g_bank_mutex;

std::shared_ptr<const PolyphaseBank> make_bank(std::int64_t p, std::int64_t q,
                                               double in_rate, const ResampleSpec& spec) {
    const double out_rate = in_rate * static_cast<double>(p) / static_cast<double>(q);
    const double f_low = std::min(in_rate, out_rate);
    double pass = spec.pass_hz > 0.0 ? spec.pass_hz : 0.45 * f_low;
    double stop = spec.stop_hz > 0.0 ? spec.stop_hz : f_low - pass;
    if (stop <= pass)
        throw std::invalid_argument("resample: stop edge must exceed pass edge");

    const BankKey key{p, q, pass, stop, spec.atten_db, in_rate};
    {
        std::lock_guard<std::mutex> lock(g_bank_mutex);
        auto it = g_bank_cache.find(key);
        if (it != g_bank_cache.end()) return it->second;
    }

    const double hi_rate = in_rate * static_cast<double>(p);
    FilterSpec fs;
    fs.kind = FilterSpec::Kind::lowpass;
    fs.pass_hi = pass;
    fs.transition = stop - pass;
    fs.atten_db = spec.atten_db;
    ArrXd h = design_fir(fs, hi_rate);

    // pad taps to t = 2*k*p + 1 so the group delay is an integer number of
    // input samples
    Eigen::Index t = h.size();
    const Eigen::Index k = (t - 1 + 2 * p - 1) / (2 * p);
    const Eigen::Index t_full = 2 * k * p + 1;
    ArrXd hp = ArrXd::Zero(t_full);
    hp.segment((t_full - t) / 2, t) = h * static_cast<double>(p);

    auto bank = std::make_shared<PolyphaseBank>();
    bank->p = p;
    bank->q = q;
    bank->half = k;
    bank->branch.resize(static_cast<size_t>(p));
    for (std::int64_t r = 0; r < p; ++r) {
        const Eigen::Index len = (t_full - 1 - r) / p + 1;
        ArrXd b(len);
        for (Eigen::Index s = 0; s < len; ++s) b[len - 1 - s] = hp[r + s * p];
        bank->branch[static_cast<size_t>(r)] = std::move(b);
    }

    std::lock_guard<std::mutex> lock(g_bank_mutex);
    g_bank_cache[key] = bank;
    return bank;
}

template <typename Arr>
Arr resample_core(const Arr& x, const PolyphaseBank& bank) {
    const std::int64_t p = bank.p;
    const std::int64_t q = bank.q;
    const Eigen::Index n = x.size();
    const Eigen::Index pad = bank.half;

    Arr xp = Arr::Zero(n + 2 * pad);
    xp.segment(pad, n) = x;

    const auto m_out = static_cast<Eigen::Index>((static_cast<std::int64_t>(n) * p + q - 1) / q);
    Arr y(m_out);

    std::optional<ArrXd> xr, xi;
    if constexpr (!std::is_same_v<Arr, ArrXd>) {
        xr = xp.real();
        xi = xp.imag();
    }

    for (Eigen::Index m = 0; m < m_out; ++m) {
        const std::int64_t mq = static_cast<std::int64_t>(m) * q;
        const auto r = static_cast<size_t>(mq % p);
        const ArrXd& b = bank.branch[r];
        const Eigen::Index len = b.size();
        // window ends at input index floor(mq/p) + half (padded coordinates)
        const Eigen::Index lo = static_cast<Eigen::Index>(mq / p) + 2 * pad - len + 1;
        if constexpr (std::is_same_v<Arr, ArrXd>) {
            y[m] = xp.segment(lo, len).matrix().dot(b.matrix());
        } else {
            y[m] = cplx(xr->segment(lo, len).matrix().dot(b.matrix()),
                        xi->segment(lo, len).matrix().dot(b.matrix()));
        }
    }
    return y;
}

}  // namespace

BasebandSignal resample(const BasebandSignal& in, double out_rate, const ResampleSpec& spec) {
    if (in.rate == out_rate) return in;
    const auto [p, q] = rate_ratio(out_rate, in.rate);
    const auto bank = make_bank(p, q, in.rate, spec);
    return {resample_core(in.samples, *bank), out_rate};
}

PassbandSignal resample(const PassbandSignal& in, double out_rate, const ResampleSpec& spec) {
    if (in.rate == out_rate) return in;
    const auto [p, q] = rate_ratio(out_rate, in.rate);
    const auto bank = make_bank(p, q, in.rate, spec);
    return {resample_core(in.samples, *bank), out_rate};
}

// ------------------------------------------------------------------ mixing --

ArrXcd carrier_phasor(double fc, double rate, Eigen::Index n, int sign) {
    // When fc/rate is rational with a modest denominator the phase pattern
    // repeats exactly; a lookup table keeps the phase drift-free over any
    // length. Otherwise fall back to long double accumulation.
    ArrXcd out(n);
    const auto fi = static_cast<std::int64_t>(std::llround(fc));
    const auto ri = static_cast<std::int64_t>(std::llround(rate));
    const bool integral = std::abs(fc - static_cast<double>(fi)) < 1e-6 &&
                          std::abs(rate - static_cast<double>(ri)) < 1e-6 && fi > 0 && ri > 0;
    if (integral) {
        const std::int64_t g = std::gcd(fi, ri);
        const std::int64_t den = ri / g;
        if (den <= (1 << 22)) {
            const std::int64_t num = fi / g;
            std::vector<cplx> table(static_cast<size_t>(den));
            for (std::int64_t k = 0; k < den; ++k) {
                const double ph = 2.0 * kPi * static_cast<double>((k * num) % den) /
                                  static_cast<double>(den);
                table[static_cast<size_t>(k)] = cplx(std::cos(ph), sign * std::sin(ph));
            }
            std::int64_t idx = 0;
            for (Eigen::Index i = 0; i < n; ++i) {
                out[i] = table[static_cast<size_t>(idx)];
                if (++idx == den) idx = 0;
            }
            return out;
        }
    }
    const long double step = 2.0L * static_cast<long double>(kPi) *
                             static_cast<long double>(fc) / static_cast<long double>(rate);
    long double acc = 0.0L;
    const long double two_pi = 2.0L * static_cast<long double>(kPi);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto ph = static_cast<double>(acc);
        out[i] = cplx(std::cos(ph), sign * std::sin(ph));
        acc += step;
        if (acc >= two_pi) acc -= two_pi;
    }
    return out;
}

PassbandSignal upconvert(const BasebandSignal& bb, double fc, double out_rate) {
    if (fc <= 0.0 || fc >= 0.5 * out_rate)
        throw std::invalid_argument("upconvert: carrier out of range");
    const BasebandSignal up = resample(bb, out_rate);
    const ArrXcd rot = carrier_phasor(fc, out_rate, up.samples.size(), +1);
    PassbandSignal out;
    out.rate = out_rate;
    out.samples = std::numbers::sqrt2 * (up.samples * rot).real();
    return out;
}

BasebandSignal downconvert(const PassbandSignal& pb, double fc, double out_rate,
                           const ResampleSpec& spec) {
    if (fc <= 0.0 || fc >= 0.5 * pb.rate)
        throw std::invalid_argument("downconvert: carrier out of range");
    const ArrXcd rot = carrier_phasor(fc, pb.rate, pb.samples.size(), -1);
    BasebandSignal mixed;
    mixed.rate = pb.rate;
    mixed.samples = std::numbers::sqrt2 * pb.samples.cast<cplx>() * rot;
    ResampleSpec rs = spec;
    if (rs.pass_hz <= 0.0) rs.pass_hz = 0.45 * out_rate;
    if (rs.stop_hz <= 0.0) rs.stop_hz = out_rate - rs.pass_hz;
    return resample(mixed, out_rate, rs);
}

// -------------------------------------------------------------------- PSD --

namespace {

Psd welch_core(const ArrXcd& x, double rate, int nfft, bool real_input) {
    if (nfft < 8) throw std::invalid_argument("welch_psd: nfft too small");
    const Eigen::Index n = x.size();
    const Eigen::Index seg = std::min<Eigen::Index>(nfft, n);
    const Eigen::Index hop = std::max<Eigen::Index>(1, seg / 2);

    ArrXd w(seg);
    for (Eigen::Index i = 0; i < seg; ++i)
        w[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) /
                                    static_cast<double>(seg));
    const double u = w.square().sum();

    Eigen::FFT<double> fft;
    ArrXd acc = ArrXd::Zero(seg);
    Eigen::Index count = 0;
    std::vector<cplx> in(static_cast<size_t>(seg)), out(static_cast<size_t>(seg));
    for (Eigen::Index start = 0; start + seg <= n; start += hop) {
        for (Eigen::Index i = 0; i < seg; ++i) in[static_cast<size_t>(i)] = x[start + i] * w[i];
        fft.fwd(out, in);
        for (Eigen::Index i = 0; i < seg; ++i) acc[i] += std::norm(out[static_cast<size_t>(i)]);
        ++count;
    }
    if (count == 0) throw std::invalid_argument("welch_psd: signal shorter than one segment");
    acc /= static_cast<double>(count) * rate * u;

    Psd psd;
    psd.df = rate / static_cast<double>(seg);
    if (real_input) {
        const Eigen::Index half = seg / 2 + 1;
        psd.freq.resize(half);
        psd.pxx.resize(half);
        for (Eigen::Index i = 0; i < half; ++i) {
            psd.freq[i] = psd.df * static_cast<double>(i);
            const bool inner = (i != 0) && !(seg % 2 == 0 && i == seg / 2);
            psd.pxx[i] = acc[i] * (inner ? 2.0 : 1.0);
        }
    } else {
        psd.freq.resize(seg);
        psd.pxx.resize(seg);
        const Eigen::Index half = seg / 2;
        for (Eigen::Index i = 0; i < seg; ++i) {
            const Eigen::Index k = (i + half) % seg;  // fftshift
            psd.freq[i] = psd.df * static_cast<double>(i - half);
            psd.pxx[i] = acc[k];
        }
    }
    return psd;
}

}  // namespace

Psd welch_psd(const ArrXd& x, double rate, int nfft) {
    return welch_core(x.cast<cplx>(), rate, nfft, true);
}

Psd welch_psd(const ArrXcd& x, double rate, int nfft) {
    return welch_core(x, rate, nfft, false);
}

double band_power(const Psd& psd, double f_lo, double f_hi) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < psd.freq.size(); ++i)
        if (psd.freq[i] >= f_lo && psd.freq[i] <= f_hi) acc += psd.pxx[i];
    return acc * psd.df;
}

}  // namespace rofsim
