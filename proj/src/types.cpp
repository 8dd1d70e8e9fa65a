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

#include "rofsim/types.hpp"

#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <vector>

namespace rofsim {

namespace {

constexpr char kMagic[4] = {'R', 'S', 'G', '1'};

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};

void write_all(std::FILE* f, const void* p, size_t n) {
    if (std::fwrite(p, 1, n, f) != n) throw std::runtime_error("signal file write failed");
}

void read_all(std::FILE* f, void* p, size_t n) {
    if (std::fread(p, 1, n, f) != n) throw std::runtime_error("signal file truncated");
}

void save_raw(const std::string& path, SignalKind kind, double rate,
              const double* data, std::uint64_t count) {
    std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.c_str(), "wb"));
    if (!f) throw std::runtime_error("cannot open for write: " + path);
    write_all(f.get(), kMagic, 4);
    const auto k = static_cast<std::uint32_t>(kind);
    write_all(f.get(), &k, 4);
    write_all(f.get(), &rate, 8);
    write_all(f.get(), &count, 8);
    write_all(f.get(), data, count * 8);
}

void load_raw(const std::string& path, SignalKind expect, double& rate,
              std::vector<double>& data) {
    std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.c_str(), "rb"));
    if (!f) throw std::runtime_error("cannot open for read: " + path);
    char magic[4];
    read_all(f.get(), magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("bad signal file magic: " + path);
    std::uint32_t k = 0;
    read_all(f.get(), &k, 4);
    if (k != static_cast<std::uint32_t>(expect))
        throw std::runtime_error("signal kind mismatch: " + path);
    read_all(f.get(), &rate, 8);
    std::uint64_t count = 0;
    read_all(f.get(), &count, 8);
    data.resize(count);
    read_all(f.get(), data.data(), count * 8);
}

}  // namespace

void save_signal(const std::string& path, const PassbandSignal& s) {
    save_raw(path, SignalKind::passband, s.rate, s.samples.data(),
             static_cast<std::uint64_t>(s.samples.size()));
}

void save_signal(const std::string& path, const BasebandSignal& s) {
    save_raw(path, SignalKind::baseband, s.rate,
             reinterpret_cast<const double*>(s.samples.data()),
             static_cast<std::uint64_t>(s.samples.size()) * 2);
}

void save_signal(const std::string& path, const BinaryStream& s) {
    save_raw(path, SignalKind::binary, s.rate, s.chips.data(),
             static_cast<std::uint64_t>(s.chips.size()));
}

PassbandSignal load_passband(const std::string& path) {
    PassbandSignal s;
    std::vector<double> data;
    load_raw(path, SignalKind::passband, s.rate, data);
    s.samples = Eigen::Map<const ArrXd>(data.data(), static_cast<Eigen::Index>(data.size()));
    return s;
}

BasebandSignal load_baseband(const std::string& path) {
    BasebandSignal s;
    std::vector<double> data;
    load_raw(path, SignalKind::baseband, s.rate, data);
    if (data.size() % 2 != 0) throw std::runtime_error("odd payload in baseband file");
    const auto n = static_cast<Eigen::Index>(data.size() / 2);
    s.samples.resize(n);
    std::memcpy(reinterpret_cast<double*>(s.samples.data()), data.data(), data.size() * 8);
    return s;
}

BinaryStream load_binary_stream(const std::string& path) {
    BinaryStream s;
    std::vector<double> data;
    load_raw(path, SignalKind::binary, s.rate, data);
    s.chips = Eigen::Map<const ArrXd>(data.data(), static_cast<Eigen::Index>(data.size()));
    for (Eigen::Index i = 0; i < s.chips.size(); ++i) {
        if (s.chips[i] != 1.0 && s.chips[i] != -1.0)
            throw std::runtime_error("binary stream holds a value other than +-1");
    }
    return s;
}

}  // namespace rofsim
