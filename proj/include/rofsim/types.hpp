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

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>

namespace rofsim {

using cplx = std::complex<double>;

using ArrXd = Eigen::ArrayXd;
using ArrXcd = Eigen::ArrayXcd;
using VecXd = Eigen::VectorXd;
using VecXcd = Eigen::VectorXcd;
using MatXd = Eigen::MatrixXd;
using MatXcd = Eigen::MatrixXcd;

// Real-valued RF waveform sampled at `rate` Hz.
struct PassbandSignal {
    ArrXd samples;
    double rate = 0.0;
};

// Complex envelope sampled at `rate` Hz.
struct BasebandSignal {
    ArrXcd samples;
    double rate = 0.0;
};

// Hard-decided chip stream; every entry is +1.0 or -1.0.
struct BinaryStream {
    ArrXd chips;
    double rate = 0.0;
};

// Flat binary serialization. Header: magic "RSG1", u32 kind, f64 rate,
// u64 length, then little-endian f64 payload (complex stored interleaved).
enum class SignalKind : std::uint32_t { passband = 0, baseband = 1, binary = 2 };

void save_signal(const std::string& path, const PassbandSignal& s);
void save_signal(const std::string& path, const BasebandSignal& s);
void save_signal(const std::string& path, const BinaryStream& s);

PassbandSignal load_passband(const std::string& path);
BasebandSignal load_baseband(const std::string& path);
BinaryStream load_binary_stream(const std::string& path);

}  // namespace rofsim
