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

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace rofsim {

BasebandSignal chips_to_baseband(const BinaryStream& chips, double fc, double out_rate,
                                 const ResampleSpec& spec) {
    PassbandSignal pb;
    pb.samples = chips.chips;
    pb.rate = chips.rate;
    return downconvert(pb, fc, out_rate, spec);
}

MatXcd ls_channel_estimate(const MatXcd& y, const MatXcd& pilots) {
    if (y.cols() != pilots.cols())
        throw std::invalid_argument("ls_channel_estimate: observation/pilot length mismatch");
    if (pilots.cols() < pilots.rows())
        throw std::invalid_argument("ls_channel_estimate: fewer pilot symbols than streams");
    const MatXcd gram = pilots * pilots.adjoint();
    return gram.llt().solve(pilots * y.adjoint()).adjoint();
}

MatXcd zf_precoder(const MatXcd& h, double power_budget) {
    if (h.rows() < h.cols())
        throw std::invalid_argument("zf_precoder: needs at least as many radio heads as streams");
    if (power_budget <= 0.0) throw std::invalid_argument("zf_precoder: budget must be positive");
    const MatXcd hc = h.conjugate();
    const MatXcd gram = h.transpose() * hc;  // n_ue x n_ue
    MatXcd p = hc * gram.inverse();
    p *= std::sqrt(power_budget / p.squaredNorm());
    return p;
}

MatXcd zf_combiner(const MatXcd& h) {
    if (h.rows() < h.cols())
        throw std::invalid_argument("zf_combiner: needs at least as many radio heads as streams");
    const MatXcd gram = h.adjoint() * h;
    return gram.llt().solve(h.adjoint());
}

MatXcd apply_calibration(const MatXcd& precoder, const ArrXcd& coeffs) {
    if (coeffs.size() != precoder.rows())
        throw std::invalid_argument("apply_calibration: coefficient count != rows");
    const double before = precoder.squaredNorm();
    MatXcd out = coeffs.matrix().asDiagonal() * precoder;
    out *= std::sqrt(before / out.squaredNorm());
    return out;
}

ArrXcd ls_equalizer_taps(const ArrXcd& rx, const ArrXcd& ref, int taps) {
    if (taps < 1)
        throw std::invalid_argument("ls_equalizer_taps: tap count must be positive");
    if (rx.size() != ref.size())
        throw std::invalid_argument("ls_equalizer_taps: length mismatch");
    if (ref.size() < 4 * taps)
        throw std::invalid_argument("ls_equalizer_taps: training must reach 4x the tap count");

    const int half = taps / 2;
    const Eigen::Index rows = ref.size() - 2 * half;
    Eigen::MatrixXcd a(rows, taps);
    Eigen::VectorXcd b(rows);
    for (Eigen::Index k = 0; k < rows; ++k) {
        for (int t = 0; t < taps; ++t) a(k, t) = rx[k + t];
        b(k) = ref[k + half];
    }
    const Eigen::VectorXcd w = (a.adjoint() * a).ldlt().solve(a.adjoint() * b);
    return w.array();
}

ArrXcd apply_symbol_fir(const ArrXcd& x, const ArrXcd& taps) {
    const int n = static_cast<int>(taps.size());
    const int half = n / 2;
    ArrXcd padded = ArrXcd::Zero(x.size() + 2 * half);
    padded.segment(half, x.size()) = x;
    ArrXcd out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        cplx acc(0.0, 0.0);
        for (int t = 0; t < n; ++t) acc += taps[t] * padded[i + t];
        out[i] = acc;
    }
    return out;
}

double evm_percent(const ArrXcd& rx, const ArrXcd& ref) {
    if (rx.size() != ref.size() || rx.size() == 0)
        throw std::invalid_argument("evm_percent: length mismatch");
    const cplx num = (ref.conjugate() * rx).sum();
    const double den = ref.abs2().sum();
    if (den <= 0.0) throw std::invalid_argument("evm_percent: empty reference");
    const cplx a = num / den;
    const double err = (rx - a * ref).abs2().sum();
    const double sig = std::norm(a) * den;
    return 100.0 * std::sqrt(err / sig);
}

}  // namespace rofsim
