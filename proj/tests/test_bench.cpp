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

#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>
#include <vector>

using namespace rofsim;

TEST_CASE("configs parse sections, comments and scalar types") {
    const Config c = Config::from_string(
        "top = 1\n"
        "[link]\n"
        "distance_m = 2.5   # trailing comment\n"
        "; full-line comment\n"
        "name = short range\n"
        "active = true\n"
        "count = 42\n");
    CHECK(c.get_double("top", 0.0) == 1.0);
    CHECK(c.get_double("link.distance_m", 0.0) == 2.5);
    CHECK(c.get_str("link.name", "") == "short range");
    CHECK(c.get_bool("link.active", false));
    CHECK(c.get_int("link.count", 0) == 42);
    CHECK(c.get_double("link.absent", -7.0) == -7.0);
}

TEST_CASE("malformed configs are rejected with line numbers") {
    CHECK_THROWS(Config::from_string("[link\nx = 1\n"));
    CHECK_THROWS(Config::from_string("just a bare line\n"));
    CHECK_THROWS(Config::from_string("= 3\n"));
    CHECK_THROWS(Config::from_string("a = 1\na = 2\n"));  // duplicate key
    CHECK_THROWS(Config::from_string("[]\n"));
}

TEST_CASE("unread keys are caught before a run starts") {
    Config c = Config::from_string("[link]\ndistance_m = 1\ntypo_key = 3\n");
    c.get_double("link.distance_m", 0.0);
    CHECK_THROWS_WITH(c.require_all_consumed(),
                      Catch::Matchers::ContainsSubstring("link.typo_key"));
    c.get_double("link.typo_key", 0.0);
    CHECK_NOTHROW(c.require_all_consumed());
}

TEST_CASE("lists split on commas and honor explicit emptiness") {
    const Config c = Config::from_string("[s]\nvals = 1, 2.5 ,3e1\nnone =\n");
    const std::vector<double> v = c.get_list("s.vals", {});
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 1.0);
    CHECK(v[1] == 2.5);
    CHECK(v[2] == 30.0);
    CHECK(c.get_list("s.none", {4.0}).empty());
    CHECK(c.get_list("s.absent", {4.0}) == std::vector<double>{4.0});
}

TEST_CASE("bad entries name the offending key and value") {
    const Config c = Config::from_string("vals = 1,,2\nbad = 1,abc\nnum = zz\nint = 1.5\n");
    CHECK_THROWS_WITH(c.get_list("vals", {}), Catch::Matchers::ContainsSubstring("vals"));
    CHECK_THROWS_WITH(c.get_list("bad", {}), Catch::Matchers::ContainsSubstring("abc"));
    CHECK_THROWS_WITH(c.get_double("num", 0.0), Catch::Matchers::ContainsSubstring("num"));
    CHECK_THROWS_WITH(c.get_int("int", 0), Catch::Matchers::ContainsSubstring("1.5"));
}

TEST_CASE("fingerprint covers keys and values in a stable order") {
    const Config a = Config::from_string("[x]\na = 1\nb = 2\n");
    const Config b = Config::from_string("[x]\nb = 2\na = 1\n");
    const Config c = Config::from_string("[x]\na = 1\nb = 3\n");
    CHECK(a.fingerprint() == b.fingerprint());
    CHECK(a.fingerprint() != c.fingerprint());
}

TEST_CASE("resolved settings hash treats explicit defaults as equal") {
    Config a = Config::from_string("[link]\ndistance_m = 2\n");
    Config b = Config::from_string("");
    CHECK(a.fingerprint() != b.fingerprint());
    a.get_double("link.distance_m", 2.0);
    b.get_double("link.distance_m", 2.0);
    // same resolved values, whether written out or defaulted
    CHECK(a.effective_fingerprint() == b.effective_fingerprint());
}

TEST_CASE("csv cells render numbers compactly and exactly") {
    CHECK(CsvWriter::num(2.5) == "2.5");
    CHECK(CsvWriter::num(0.1) == "0.1");
    CHECK(CsvWriter::num(123456789.0) == "123456789");
    CHECK(CsvWriter::num(1e-4) == "0.0001");
    CHECK(CsvWriter::integer(-17) == "-17");
    CHECK(CsvWriter::uinteger(18446744073709551615ull) == "18446744073709551615");
}

TEST_CASE("csv files carry a header and one line per row") {
    CsvWriter w({"a", "b"});
    w.add_row({"1", "x"});
    w.add_row({"2", "y"});
    CHECK(w.rows() == 2);
    CHECK_THROWS(w.add_row({"only one"}));
    const std::string path = "test_bench_tmp.csv";
    w.save(path);
    std::ifstream in(path);
    std::string l1, l2, l3, l4;
    std::getline(in, l1);
    std::getline(in, l2);
    std::getline(in, l3);
    const bool more = static_cast<bool>(std::getline(in, l4));
    CHECK(l1 == "a,b");
    CHECK(l2 == "1,x");
    CHECK(l3 == "2,y");
    CHECK_FALSE(more);
    std::remove(path.c_str());
}

TEST_CASE("parallel map covers every index exactly once at any width") {
    for (int workers : {1, 3, 8}) {
        const std::size_t n = 100;
        std::vector<int> hits(n, 0);
        std::atomic<int> total{0};
        parallel_for(n, workers, [&](std::size_t i) {
            hits[i] += 1;
            total.fetch_add(1);
        });
        CHECK(total.load() == 100);
        for (std::size_t i = 0; i < n; ++i) CHECK(hits[i] == 1);
    }
}

TEST_CASE("a failing work item surfaces as an error") {
    CHECK_THROWS(parallel_for(4, 2, [](std::size_t i) {
        if (i == 2) throw std::runtime_error("boom");
    }));
}

TEST_CASE("experiment registry has unique findable names") {
    const auto& all = experiments();
    CHECK(all.size() >= 10);
    std::set<std::string> names;
    for (const auto& e : all) {
        CHECK(!e.name.empty());
        CHECK(!e.brief.empty());
        CHECK(e.run != nullptr);
        names.insert(e.name);
        const ExperimentInfo* found = find_experiment(e.name);
        REQUIRE(found != nullptr);
        CHECK(found->name == e.name);
    }
    CHECK(names.size() == all.size());
    CHECK(find_experiment("no-such-experiment") == nullptr);
}

TEST_CASE("waveform validation fires before any simulation") {
    RunContext ctx;
    ctx.config = Config::from_string("[waveform]\nrolloff = 1.5\n");
    ctx.seed = 1;
    ctx.out_dir = ".";
    const ExperimentInfo* e = find_experiment("uplink-p2p");
    REQUIRE(e != nullptr);
    CHECK_THROWS_WITH(e->run(ctx), Catch::Matchers::ContainsSubstring("rolloff") &&
                                        Catch::Matchers::ContainsSubstring("(0, 1]"));
}
