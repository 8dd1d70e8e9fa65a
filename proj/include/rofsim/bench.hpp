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

#include "rofsim/modem.hpp"
#include "rofsim/rrh.hpp"
#include "rofsim/types.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace rofsim {

// ------------------------------------------------------------------ config

// INI-style file: [section] lines group keys, '#' or ';' start comments.
// Keys are addressed as "section.key". Every key must be consumed by the
// experiment that runs, otherwise the run is rejected.
class Config {
  public:
    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_str(const std::string& key, const std::string& def) const;
    double get_double(const std::string& key, double def) const;
    int get_int(const std::string& key, int def) const;
    bool get_bool(const std::string& key, bool def) const;
    std::vector<double> get_list(const std::string& key,
                                 const std::vector<double>& def) const;

    // throws listing keys that were never read
    void require_all_consumed() const;

    // order-independent content hash of the file contents
    std::uint64_t fingerprint() const;

    // hash over every value the run actually resolved, defaults included;
    // this is the fingerprint recorded in run summaries
    std::uint64_t effective_fingerprint() const;

  private:
    void note(const std::string& key, const std::string& resolved) const;

    std::map<std::string, std::string> kv_;
    mutable std::set<std::string> read_;
    mutable std::map<std::string, std::string> effective_;
};

// --------------------------------------------------------------------- csv

class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> columns);
    void add_row(const std::vector<std::string>& cells);
    void save(const std::string& path) const;
    size_t rows() const { return rows_.size(); }

    static std::string num(double v);  // %.10g
    static std::string integer(long long v);
    static std::string uinteger(unsigned long long v);

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

// ------------------------------------------------------------ registration

struct RunContext {
    Config config;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    int repeats = 0;  // 0 = experiment default
    int workers = 1;
};

struct ExperimentInfo {
    std::string name;
    std::string brief;
    std::function<void(const RunContext&)> run;
};

const std::vector<ExperimentInfo>& experiments();
const ExperimentInfo* find_experiment(const std::string& name);

// Runs fn(0..n-1) over a small thread pool. Work items must not depend on
// execution order; outputs land in caller-owned slots so results are stable
// for any worker count.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

// <out_dir>/<name>.json with the seed, config fingerprint and row count
void write_run_summary(const RunContext& ctx, const std::string& name, std::size_t rows,
                       const std::vector<std::pair<std::string, std::string>>& extra = {});

// --------------------------------------------------- measurement pipelines

// One terminal, one radio head, one-bit uplink into the central unit.
struct LinkSpec {
    WaveformConfig wf;
    RrhConfig rrh;
    double antenna_dbm = -36.0;
    int data_symbols = 2000;
    int eq_taps = 7;
    int eq_taps_alt = 0;  // optional second equalizer length on the same capture
    bool onebit = true;   // false: linear front end, the quantization-free reference

    // co-channel modulated interferer, decoded around as noise
    bool interferer = false;
    double interferer_offset_hz = 0.0;  // from the carrier
    double interferer_sir_db = 1e9;     // desired over interferer, measured powers
};

struct LinkResult {
    double evm_pct = 0.0;
    double evm_alt_pct = 0.0;     // from eq_taps_alt, 0 when unused
    double agc_gain_db = 0.0;
    double comparator_dbm = 0.0;  // drive level before noise and slicing
    double sync_peak = 0.0;
};

LinkResult run_uplink_link(const LinkSpec& spec, std::uint64_t seed);

// Two same-rate signals on adjacent carriers into one radio head; each is
// decoded in turn with the other acting as noise.
struct AdjacentPairSpec {
    WaveformConfig wf;
    RrhConfig rrh;
    double antenna_dbm = -36.0;   // first signal, carrier - offset
    double sir_db = 0.0;          // first over second, measured powers
    double freq_offset_hz = 2.5e6;
    int data_symbols = 2000;
    int eq_taps = 7;
};

struct AdjacentPairResult {
    double evm_fixed_pct = 0.0;   // signal with the fixed power
    double evm_varied_pct = 0.0;  // signal whose power tracks the ratio
    double agc_gain_db = 0.0;
};

AdjacentPairResult run_adjacent_pair(const AdjacentPairSpec& spec, std::uint64_t seed);

// OFDM variant of the uplink link; the grid carries one pilot symbol and
// data_symbols further columns.
struct OfdmLinkSpec {
    OfdmConfig ofdm;
    RrhConfig rrh;
    Scheme scheme = Scheme::qam16;
    double antenna_dbm = -36.0;
    int data_symbols = 20;
    int denoise_window = 20;  // channel impulse window kept after the pilot fit
};

LinkResult run_uplink_ofdm(const OfdmLinkSpec& spec, std::uint64_t seed);

// One-bit downlink: waveform encoded at the central unit, reconstructed and
// radiated by the radio head, demodulated at a terminal 2 m away. The
// encoder band is the radio head's band filter; osr and center follow from
// the chip rate.
struct DownlinkSpec {
    WaveformConfig wf;
    RrhConfig rrh;
    int sd_order = 4;
    double sd_max_gain = 1.5;
    double tx_power_dbm = 10.0;
    double distance_m = 2.0;
    double ue_noise_dbm = -112.0;
    double backoff = 0.5;  // encoder drive: peak input as a fraction of full scale
    int data_symbols = 2000;
    int eq_taps = 7;
    double fronthaul_rise_ps = 0.0;
};

LinkResult run_downlink_link(const DownlinkSpec& spec, std::uint64_t seed);

// --------------------------------------------------------- multi-head runs

struct DmimoSpec {
    int n_rrh = 3;
    int n_ue = 2;
    WaveformConfig wf;
    RrhConfig rrh;
    double ue_tx_dbm = 10.0;
    double rrh_tx_dbm = 10.0;
    double ue_noise_dbm = -112.0;
    double gain_spread_db = 2.0;  // transmit/receive electronics mismatch
    double backoff = 0.5;
    int sd_order = 4;
    double sd_max_gain = 1.5;
    int data_symbols = 1000;
    int eq_taps = 7;
    bool calibrate = true;
};

struct DmimoResult {
    std::vector<double> evm_pct;       // per terminal
    double calibration_cost = 0.0;
    int calibration_iterations = 0;
};

DmimoResult run_dmimo_downlink(const DmimoSpec& spec, std::uint64_t seed);
DmimoResult run_dmimo_uplink(const DmimoSpec& spec, std::uint64_t seed);

}  // namespace rofsim
