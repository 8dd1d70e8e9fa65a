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

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"rofsim: one-bit radio-over-fiber distributed MIMO link simulator"};
    app.require_subcommand(1);

    CLI::App* list_cmd = app.add_subcommand("list", "print the registered experiments");

    std::string name, config_path, out_dir = ".";
    std::uint64_t seed = 1;
    int repeats = 0;
    int workers = 1;
    CLI::App* run_cmd = app.add_subcommand("run", "run one experiment");
    run_cmd->add_option("experiment", name, "experiment name, see `list`")->required();
    run_cmd->add_option("--config", config_path, "INI style config file");
    run_cmd->add_option("--seed", seed, "master seed for all random draws");
    run_cmd->add_option("--out", out_dir, "directory for csv and summary output");
    run_cmd->add_option("--repeats", repeats, "repeats per sweep point, 0 keeps default");
    run_cmd->add_option("--workers", workers, "worker threads, results do not depend on it");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_cmd->parsed()) {
            for (const auto& e : rofsim::experiments())
                std::printf("%-22s %s\n", e.name.c_str(), e.brief.c_str());
            return 0;
        }

        const rofsim::ExperimentInfo* exp = rofsim::find_experiment(name);
        if (!exp) {
            std::fprintf(stderr, "unknown experiment '%s', try `rofsim list`\n",
                         name.c_str());
            return 1;
        }

        rofsim::RunContext ctx;
        if (!config_path.empty()) ctx.config = rofsim::Config::from_file(config_path);
        ctx.seed = seed;
        ctx.out_dir = out_dir;
        ctx.repeats = repeats;
        ctx.workers = workers;
        std::filesystem::create_directories(out_dir);

        exp->run(ctx);
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
