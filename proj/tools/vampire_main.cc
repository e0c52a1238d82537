// Copyright 2026 The Vampire Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Command-line front end: profile, scan, verify, analyze.

#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "vampire/commands.h"
#include "vampire/error.h"

namespace {

using namespace vampire;

struct Options {
    std::string config;
    std::string seed;
    std::string out = ".";
    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::string input;
    std::string reference;
};

KeyValues load_values(const Options &opt) {
    KeyValues values = default_config();
    if (!opt.config.empty()) {
        values = merge_config(values, read_key_values(opt.config));
    }
    values = apply_env_overrides(values);
    if (!opt.seed.empty()) {
        values = merge_config(values, {{"scan.seed", opt.seed}});
    }
    return values;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Heralded photon subtraction: analytic profiles, Monte Carlo scans, exact verification"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_option("--config", opt.config, "key=value configuration file");
    app.add_option("--seed", opt.seed, "RNG seed (overrides scan.seed)");
    app.add_option("--out", opt.out, "output directory");
    app.add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);

    auto *profile = app.add_subcommand("profile", "write the analytic intensity map of the scenario");
    auto *scan = app.add_subcommand("scan", "run the Monte Carlo raster scan");
    auto *verify = app.add_subcommand("verify", "run the exact three-mode verification sweep");
    auto *analyze = app.add_subcommand("analyze", "ratio map, flatness and shadow statistics of a scan");
    analyze->add_option("--input", opt.input, "scan CSV")->required();
    analyze->add_option("--reference", opt.reference, "unmasked singles scan for loss runs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    }

    try {
        const KeyValues values = load_values(opt);
        const CommandContext ctx{opt.out, opt.threads, &std::cout};
        if (*profile) {
            return cmd_profile(build_scenario(values), ctx);
        }
        if (*scan) {
            return cmd_scan(build_scenario(values), ctx);
        }
        if (*verify) {
            return cmd_verify(build_verify_settings(values), ctx);
        }
        if (*analyze) {
            std::optional<std::filesystem::path> reference;
            if (!opt.reference.empty()) {
                reference = opt.reference;
            }
            return cmd_analyze(opt.input, reference, values, ctx);
        }
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitValidation;
}
