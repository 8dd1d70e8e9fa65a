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

#include "rofsim/bench.hpp"

#include "rofsim/rng.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace rofsim {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

// ------------------------------------------------------------------ config

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config: bad section at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw std::runtime_error("config: empty section at line " + std::to_string(lineno));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: expected key=value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config: empty key at line " + std::to_string(lineno));
        const std::string full = section.empty() ? key : section + "." + key;
        if (cfg.kv_.count(full))
            throw std::runtime_error("config: duplicate key " + full);
        cfg.kv_[full] = value;
    }
    return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
    kv_[key] = value;
}

bool Config::has(const std::string& key) const {
    const bool present = kv_.count(key) != 0;
    if (present) read_.insert(key);
    return present;
}

void Config::note(const std::string& key, const std::string& resolved) const {
    effective_[key] = resolved;
}

std::string Config::get_str(const std::string& key, const std::string& def) const {
    read_.insert(key);
    auto it = kv_.find(key);
    const std::string v = it == kv_.end() ? def : it->second;
    note(key, v);
    return v;
}

double Config::get_double(const std::string& key, double def) const {
    read_.insert(key);
    auto it = kv_.find(key);
    if (it == kv_.end()) {
        note(key, num17(def));
        return def;
    }
    size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(it->second, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != it->second.size())
        throw std::runtime_error("config: bad number for " + key + ": " + it->second);
    note(key, num17(v));
    return v;
}

int Config::get_int(const std::string& key, int def) const {
    read_.insert(key);
    auto it = kv_.find(key);
    if (it == kv_.end()) {
        note(key, std::to_string(def));
        return def;
    }
    size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(it->second, &pos, 10);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != it->second.size())
        throw std::runtime_error("config: bad integer for " + key + ": " + it->second);
    note(key, std::to_string(v));
    return static_cast<int>(v);
}

bool Config::get_bool(const std::string& key, bool def) const {
    read_.insert(key);
    auto it = kv_.find(key);
    if (it == kv_.end()) {
        note(key, def ? "true" : "false");
        return def;
    }
    const std::string& v = it->second;
    bool out;
    if (v == "true" || v == "1" || v == "yes" || v == "on") out = true;
    else if (v == "false" || v == "0" || v == "no" || v == "off") out = false;
    else throw std::runtime_error("config: bad boolean for " + key + ": " + v);
    note(key, out ? "true" : "false");
    return out;
}

std::vector<double> Config::get_list(const std::string& key,
                                     const std::vector<double>& def) const {
    read_.insert(key);
    auto it = kv_.find(key);
    std::vector<double> out;
    if (it == kv_.end()) {
        out = def;
    } else {
        // an explicitly empty value is an empty sweep
        std::string item;
        std::istringstream in(it->second);
        while (std::getline(in, item, ',')) {
            item = trim(item);
            if (item.empty())
                throw std::runtime_error("config: empty list entry for " + key);
            size_t pos = 0;
            double v = 0.0;
            try {
                v = std::stod(item, &pos);
            } catch (const std::exception&) {
                pos = std::string::npos;
            }
            if (pos != item.size())
                throw std::runtime_error("config: bad list entry for " + key + ": " + item);
            out.push_back(v);
        }
    }
    std::string joined;
    for (const double v : out) joined += (joined.empty() ? "" : ",") + num17(v);
    note(key, joined);
    return out;
}

void Config::require_all_consumed() const {
    std::string missing;
    for (const auto& [k, v] : kv_)
        if (!read_.count(k)) missing += (missing.empty() ? "" : ", ") + k;
    if (!missing.empty())
        throw std::runtime_error("config: unknown keys: " + missing);
}

std::uint64_t Config::fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& [k, v] : kv_) {  // map order is deterministic
        h = fnv1a64(k, h);
        h = fnv1a64("=", h);
        h = fnv1a64(v, h);
        h = fnv1a64("\n", h);
    }
    return h;
}

std::uint64_t Config::effective_fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& [k, v] : effective_) {
        h = fnv1a64(k, h);
        h = fnv1a64("=", h);
        h = fnv1a64(v, h);
        h = fnv1a64("\n", h);
    }
    return h;
}

// --------------------------------------------------------------------- csv

CsvWriter::CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw std::invalid_argument("csv: no columns");
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size())
        throw std::invalid_argument("csv: cell count does not match columns");
    rows_.push_back(cells);
}

void CsvWriter::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("csv: cannot write " + path);
    for (size_t i = 0; i < columns_.size(); ++i)
        out << columns_[i] << (i + 1 < columns_.size() ? "," : "\n");
    for (const auto& row : rows_)
        for (size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "\n");
}

std::string CsvWriter::num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string CsvWriter::integer(long long v) {
    return std::to_string(v);
}

std::string CsvWriter::uinteger(unsigned long long v) {
    return std::to_string(v);
}

// ------------------------------------------------------------ parallel map

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const int use = std::max(1, std::min<int>(workers, static_cast<int>(n)));
    if (use == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    std::string error;
    std::mutex error_mutex;
    for (int w = 0; w < use; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    fn(i);
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    error = e.what();
                    failed.store(true);
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (failed.load()) throw std::runtime_error("parallel task failed: " + error);
}

// ----------------------------------------------------------------- summary

void write_run_summary(const RunContext& ctx, const std::string& name, std::size_t rows,
                       const std::vector<std::pair<std::string, std::string>>& extra) {
    nlohmann::ordered_json j;
    j["experiment"] = name;
    j["seed"] = ctx.seed;
    j["repeats"] = ctx.repeats;
    j["config_fingerprint"] = ctx.config.effective_fingerprint();
    j["rows"] = rows;
    for (const auto& [k, v] : extra) {
        // values parse as JSON where possible so numbers stay numbers
        auto parsed = nlohmann::ordered_json::parse(v, nullptr, false);
        if (parsed.is_discarded()) j[k] = v;
        else j[k] = parsed;
    }
    const std::filesystem::path p = std::filesystem::path(ctx.out_dir) / (name + ".json");
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("summary: cannot write " + p.string());
    out << j.dump(2) << "\n";
}

const ExperimentInfo* find_experiment(const std::string& name) {
    for (const auto& e : experiments())
        if (e.name == name) return &e;
    return nullptr;
}

}  // namespace rofsim
