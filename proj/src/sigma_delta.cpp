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

#include "rofsim/sigma_delta.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rofsim {

namespace {

constexpr double pi = std::numbers::pi;

// Gauss-Legendre nodes, the in-band zero spread per order
const std::vector<double>& legendre_nodes(int n) {
    static const std::vector<std::vector<double>> tbl = {
        {0.0},
        {-0.5773502691896258, 0.5773502691896258},
        {-0.7745966692414834, 0.0, 0.7745966692414834},
        {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526},
        {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
         0.9061798459386640},
        {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969, 0.2386191860831969,
         0.6612093864662645, 0.9324695142031521},
    };
    if (n < 1 || n > static_cast<int>(tbl.size()))
        throw std::invalid_argument("synthesize_ntf: order out of range");
    return tbl[n - 1];
}

cplx eval_rational(const std::vector<cplx>& zeros, const std::vector<cplx>& poles,
                   const cplx& z) {
    cplx num(1.0, 0.0), den(1.0, 0.0);
    for (const cplx& q : zeros) num *= z - q;
    for (const cplx& p : poles) den *= z - p;
    return num / den;
}

double grid_max_gain(const std::vector<cplx>& zeros, const std::vector<cplx>& poles,
                     int grid) {
    double best = 0.0;
    for (int i = 0; i <= grid; ++i) {
        const double w = pi * i / grid;
        const cplx z(std::cos(w), std::sin(w));
        best = std::max(best, std::abs(eval_rational(zeros, poles, z)));
    }
    return best;
}

cplx bilinear(const cplx& s) {
    return (2.0 + s) / (2.0 - s);
}

// z-domain Butterworth pole set for a lowpass NTF denominator
std::vector<cplx> lowpass_poles(int order, double omega_c) {
    std::vector<cplx> poles;
    for (int k = 1; k <= order; ++k) {
        const double ang = pi * (2.0 * k + order - 1.0) / (2.0 * order);
        const cplx s = omega_c * cplx(std::cos(ang), std::sin(ang));
        poles.push_back(bilinear(s));
    }
    return poles;
}

// Butterworth bandpass poles: order/2 prototype through s -> (s^2+w0^2)/(bw*s)
std::vector<cplx> bandpass_poles(int order, double omega0, double bw) {
    const int m = order / 2;
    std::vector<cplx> poles;
    for (int k = 1; k <= m; ++k) {
        const double ang = pi * (2.0 * k + m - 1.0) / (2.0 * m);
        const cplx sp = cplx(std::cos(ang), std::sin(ang)) * bw;
        const cplx disc = std::sqrt(sp * sp - 4.0 * omega0 * omega0);
        poles.push_back(bilinear((sp + disc) / 2.0));
        poles.push_back(bilinear((sp - disc) / 2.0));
    }
    return poles;
}

}  // namespace

NtfDesign synthesize_ntf(const NtfSpec& spec) {
    if (spec.osr <= 1.0) throw std::invalid_argument("synthesize_ntf: osr must exceed 1");
    if (spec.max_gain <= 1.0) throw std::invalid_argument("synthesize_ntf: max_gain must exceed 1");
    if (spec.f0 < 0.0 || spec.f0 >= 0.5)
        throw std::invalid_argument("synthesize_ntf: f0 must lie in [0, 0.5)");
    const bool bandpass = spec.f0 > 0.0;
    if (bandpass && spec.order % 2 != 0)
        throw std::invalid_argument("synthesize_ntf: bandpass order must be even");

    NtfDesign d;
    d.spec = spec;

    const double band_w = pi / spec.osr;  // band width in rad/sample
    if (bandpass) {
        const double w0 = 2.0 * pi * spec.f0;
        if (w0 - band_w / 2.0 <= 0.0 || w0 + band_w / 2.0 >= pi)
            throw std::invalid_argument("synthesize_ntf: band exceeds Nyquist range");
        for (double x : legendre_nodes(spec.order / 2)) {
            const double w = w0 + x * band_w / 2.0;
            d.zeros.emplace_back(std::cos(w), std::sin(w));
            d.zeros.emplace_back(std::cos(w), -std::sin(w));
        }
    } else {
        for (double x : legendre_nodes(spec.order)) {
            const double w = x * band_w;
            d.zeros.emplace_back(std::cos(w), std::sin(w));
        }
    }

    // Pole bandwidth up -> the NTF peak rises monotonically; bisect to the
    // requested peak gain.
    const double w0 = 2.0 * pi * spec.f0;
    const double omega0 = 2.0 * std::tan(w0 / 2.0);
    auto poles_for = [&](double knob) {
        return bandpass ? bandpass_poles(spec.order, omega0, knob)
                        : lowpass_poles(spec.order, knob);
    };
    double lo = 1e-6, hi = bandpass ? 2.0 * omega0 : 10.0;
    if (grid_max_gain(d.zeros, poles_for(hi), 2048) < spec.max_gain)
        throw std::runtime_error("synthesize_ntf: gain target out of reach");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (grid_max_gain(d.zeros, poles_for(mid), 2048) < spec.max_gain)
            lo = mid;
        else
            hi = mid;
    }
    d.poles = poles_for(0.5 * (lo + hi));
    return d;
}

cplx ntf_eval(const NtfDesign& d, double f) {
    const double w = 2.0 * pi * f;
    return eval_rational(d.zeros, d.poles, cplx(std::cos(w), std::sin(w)));
}

double ntf_max_gain(const NtfDesign& d) {
    return grid_max_gain(d.zeros, d.poles, 16384);
}

double ntf_band_rms_db(const NtfDesign& d) {
    const double bw = 0.5 / d.spec.osr;                  // normalized bandwidth
    const double f_lo = d.spec.f0 > 0.0 ? d.spec.f0 - bw / 2.0 : 0.0;
    const double f_hi = d.spec.f0 > 0.0 ? d.spec.f0 + bw / 2.0 : bw;
    const int n = 1024;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = f_lo + (f_hi - f_lo) * (i + 0.5) / n;
        acc += std::norm(ntf_eval(d, f));
    }
    return 10.0 * std::log10(acc / n);
}

SdModulator::SdModulator(const NtfDesign& design, double full_scale)
    : design_(design), full_scale_(full_scale) {
    if (full_scale <= 0.0) throw std::invalid_argument("SdModulator: full_scale must be positive");

    // Group unit-circle zeros into an optional z=1 accumulator plus conjugate
    // pairs; each pair becomes a plane-rotation section.
    std::vector<double> pair_angles;
    int dc_zeros = 0;
    for (const cplx& q : design.zeros) {
        const double ang = std::arg(q);
        if (std::abs(ang) < 1e-12)
            ++dc_zeros;
        else if (ang > 0.0)
            pair_angles.push_back(ang);
    }
    if (dc_zeros > 1)
        throw std::invalid_argument("SdModulator: repeated zeros at DC are not supported");
    const Eigen::Index n = dc_zeros + 2 * static_cast<Eigen::Index>(pair_angles.size());
    if (n != static_cast<Eigen::Index>(design.zeros.size()))
        throw std::invalid_argument("SdModulator: zeros must be conjugate-symmetric");

    // Chain: accumulator first (if any), then rotation sections; the output
    // of each section drives the first state of the next.
    a_mat_ = MatXd::Zero(n, n);
    Eigen::Index idx = 0;
    Eigen::Index prev_out = -1;
    if (dc_zeros) {
        a_mat_(0, 0) = 1.0;
        prev_out = 0;
        idx = 1;
    }
    for (double ang : pair_angles) {
        const double c = std::cos(ang), s = std::sin(ang);
        a_mat_(idx, idx) = c;
        a_mat_(idx, idx + 1) = -s;
        a_mat_(idx + 1, idx) = s;
        a_mat_(idx + 1, idx + 1) = c;
        if (prev_out >= 0) a_mat_(idx, prev_out) = 1.0;
        prev_out = idx + 1;
        idx += 2;
    }
    out_state_ = prev_out;

    // The linearized loop gives NTF = 1 / (1 + G), G(z) = c (zI - A)^-1 b
    // with b the feedback taps. G must equal (D - N)/N, so after clearing
    // the common denominator N(z) = det(zI - A) the taps satisfy
    //   sum_i b_i [inv(zI - A)]_(out, i) N(z) = D(z) - N(z)
    // at any z away from the zeros; a spread of unit-circle samples makes an
    // overdetermined real system with an exact solution.
    const Eigen::Index pts = 4 * n;
    Eigen::MatrixXd sys(2 * pts, n);
    Eigen::VectorXd rhs(2 * pts);
    for (Eigen::Index j = 0; j < pts; ++j) {
        double w = pi * (j + 0.5) / static_cast<double>(pts);
        for (const cplx& q : design.zeros)
            if (std::abs(w - std::abs(std::arg(q))) < 0.01) w += 0.013;
        const cplx z(std::cos(w), std::sin(w));

        cplx nf(1.0, 0.0), df(1.0, 0.0);
        for (const cplx& q : design.zeros) nf *= z - q;
        for (const cplx& p : design.poles) df *= z - p;

        Eigen::MatrixXcd zi = cplx(0, 0) * Eigen::MatrixXcd::Identity(n, n);
        zi = -a_mat_.cast<cplx>();
        zi.diagonal().array() += z;
        const Eigen::MatrixXcd inv = zi.partialPivLu().inverse();
        for (Eigen::Index i = 0; i < n; ++i) {
            const cplx t = inv(out_state_, i) * nf;
            sys(2 * j, i) = t.real();
            sys(2 * j + 1, i) = t.imag();
        }
        const cplx r = df - nf;
        rhs(2 * j) = r.real();
        rhs(2 * j + 1) = r.imag();
    }
    feedback_ = sys.colPivHouseholderQr().solve(rhs);

    // fit sanity check away from the band
    for (int i = 1; i <= 7; ++i) {
        const double w = pi * i / 8.0 + 0.003;
        const cplx z(std::cos(w), std::sin(w));
        const cplx want = eval_rational(design.zeros, design.poles, z);
        if (std::abs(realized_ntf(z) - want) > 1e-6 * std::max(1.0, std::abs(want)))
            throw std::runtime_error("SdModulator: loop fit failed");
    }

    state_ = VecXd::Zero(n);
}

void SdModulator::reset() {
    state_.setZero();
    overloads_ = 0;
}

cplx SdModulator::realized_ntf(const cplx& z) const {
    const Eigen::Index n = state_.size();
    Eigen::MatrixXcd zi = -a_mat_.cast<cplx>();
    zi.diagonal().array() += z;
    const Eigen::VectorXcd x = zi.partialPivLu().solve(feedback_.cast<cplx>());
    const cplx g = x(out_state_);
    return 1.0 / (1.0 + g);
}

ArrXd SdModulator::encode(const ArrXd& input) {
    const Eigen::Index n = state_.size();
    const double limit = 10.0 * full_scale_;
    ArrXd out(input.size());
    VecXd next(n);
    for (Eigen::Index i = 0; i < input.size(); ++i) {
        const double u = input[i];
        const double y = state_(out_state_) + u;
        const double v = y >= 0.0 ? full_scale_ : -full_scale_;
        const double d = u - v;
        next.noalias() = a_mat_ * state_;
        next.noalias() += feedback_ * d;
        state_.swap(next);
        if (state_.cwiseAbs().maxCoeff() > limit) {
            state_.setZero();
            ++overloads_;
        }
        out[i] = v;
    }
    return out;
}

}  // namespace rofsim
