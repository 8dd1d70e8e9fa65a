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

#include "rofsim/calibration.hpp"

#include "rofsim/sigcore.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace rofsim {

MatXcd simulate_sounding(const ArrXcd& tx_gains, const ArrXcd& rx_gains,
                         const MatXcd& h_mutual, double noise_power_dbm, Rng& rng) {
    const Eigen::Index n = tx_gains.size();
    if (rx_gains.size() != n || h_mutual.rows() != n || h_mutual.cols() != n)
        throw std::invalid_argument("simulate_sounding: size mismatch");
    const double sigma = noise_power_dbm > -300.0 ? dbm_to_vrms(noise_power_dbm) : 0.0;
    MatXcd y = MatXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            y(i, j) = tx_gains[i] * h_mutual(i, j) * rx_gains[j];
            if (sigma > 0.0) y(i, j) += sigma * rng.cgaussian();
        }
    return y;
}

CalibrationResult calibrate_reciprocity(const MatXcd& y, int max_iter, double tol) {
    const Eigen::Index n = y.rows();
    if (y.cols() != n || n < 2)
        throw std::invalid_argument("calibrate_reciprocity: need a square matrix, n >= 2");

    // cost = c^H Q c with one rank-one term per unordered pair
    MatXcd q = MatXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            Eigen::VectorXcd a = Eigen::VectorXcd::Zero(n);
            a(i) = y(i, j);
            a(j) = -y(j, i);
            q += a.conjugate() * a.transpose();
        }

    Eigen::SelfAdjointEigenSolver<MatXcd> es(q);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("calibrate_reciprocity: eigensolver failed");
    const double radius = std::sqrt(static_cast<double>(n));
    const double lambda_max = std::max(es.eigenvalues().maxCoeff(), 1e-300);
    Eigen::VectorXcd c = es.eigenvectors().col(0) * radius;

    const double step = 0.5 / lambda_max;
    double cost = std::real(c.dot(q * c));  // dot conjugates the left side
    int it = 0;
    for (; it < max_iter; ++it) {
        c -= step * 2.0 * (q * c);
        c *= radius / c.norm();
        const double next = std::real(c.dot(q * c));
        const bool done = std::abs(cost - next) <= tol * std::max(std::abs(cost), 1e-300);
        cost = next;
        if (done) break;
    }

    CalibrationResult res;
    if (std::abs(c(0)) == 0.0)
        throw std::runtime_error("calibrate_reciprocity: degenerate leading coefficient");
    res.coeffs = (c / c(0)).array();
    res.cost = cost;
    res.iterations = it + 1;
    return res;
}

}  // namespace rofsim
