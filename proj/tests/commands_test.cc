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

#include "vampire/commands.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "gtest/gtest.h"
#include "vampire/analysis.h"
#include "vampire/error.h"
#include "vampire/grid_io.h"

using namespace vampire;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(const std::function<void()> &fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "expected vampire::Error";
    return ErrorCode::kInvalidArgument;
}

fs::path fresh_dir(const std::string &name) {
    const fs::path dir = fs::temp_directory_path() / ("vampire_commands_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string first_line(const fs::path &path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    return line;
}

KeyValues config_with(const KeyValues &overrides) {
    return merge_config(default_config(), overrides);
}

// Small, quick scan setup on an 8 x 6 superpixel grid.
KeyValues smoke(const std::string &scenario, const std::string &seed) {
    return config_with({{"scenario", scenario},
                        {"scan.superpixel", "8"},
                        {"scan.bins_per_superpixel", "10000"},
                        {"scan.seed", seed}});
}

CommandContext quiet(const fs::path &dir, int threads = 1) {
    static std::ostringstream sink;
    return CommandContext{dir, threads, &sink};
}

int run_cli(const std::string &args) {
    const std::string cmd = std::string(VAMPIRE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, defaults_are_unique_and_mergeable) {
    const KeyValues defaults = default_config();
    std::set<std::string> keys;
    for (const auto &[k, v] : defaults) {
        EXPECT_TRUE(keys.insert(k).second) << k;
    }
    EXPECT_EQ(code_of([] { config_with({{"source.nbarr", "1"}}); }), ErrorCode::kParseError);
    EXPECT_NO_THROW(config_with({{"derived.r_eff", "0.3"}}));
    EXPECT_EQ(env_var_name("source.nbar"), "QVAMP_SOURCE_NBAR");
}

TEST(Config, environment_overrides) {
    const std::map<std::string, std::string> env = {{"QVAMP_SOURCE_NBAR", "2.5"}, {"QVAMP_SCAN_SEED", "44"}};
    const KeyValues values = apply_env_overrides(default_config(), [&](const char *name) -> const char * {
        auto it = env.find(name);
        return it == env.end() ? nullptr : it->second.c_str();
    });
    const ScenarioConfig cfg = build_scenario(values);
    EXPECT_EQ(cfg.source.nbar, 2.5);
    EXPECT_EQ(cfg.scan.seed, 44u);
    EXPECT_TRUE(cfg.seed_given);
}

TEST(Config, malformed_values) {
    EXPECT_EQ(code_of([] { build_scenario(config_with({{"source.nbar", "one"}})); }), ErrorCode::kParseError);
    EXPECT_EQ(code_of([] { build_scenario(config_with({{"scenario", "shadow"}})); }), ErrorCode::kParseError);
    EXPECT_EQ(code_of([] { build_scenario(config_with({{"mask.region", "circle"}})); }), ErrorCode::kParseError);
    EXPECT_EQ(code_of([] { build_scenario(config_with({{"mask.low_contrast", "1.5"}})); }),
              ErrorCode::kInvalidArgument);
    EXPECT_EQ(code_of([] {
                  build_scenario(config_with({{"scenario", "loss_high_contrast"}, {"mask.rate_scale", "5"}}));
              }),
              ErrorCode::kInvalidArgument);
    EXPECT_EQ(code_of([] { parse_state("squeezed:1", 10); }), ErrorCode::kParseError);
}

TEST(Scenario, forced_settings) {
    const ScenarioConfig sub =
        build_scenario(config_with({{"scenario", "subtraction"}, {"scan.trigger_mode", "singles"}}));
    EXPECT_EQ(sub.scan.trigger_mode, TriggerMode::kCoincidence);
    const ScenarioConfig init = build_scenario(config_with({{"scenario", "initial"}, {"mask.low_contrast", "0.9"}}));
    EXPECT_EQ(init.scan.mask.transmission().minCoeff(), 1.0);
    EXPECT_EQ(init.scan.trigger_mode, TriggerMode::kSingles);
    EXPECT_FALSE(init.seed_given);
    bool recorded = false;
    for (const auto &[k, v] : init.values) {
        recorded |= k == "scan.seed" && v == std::to_string(init.scan.seed);
    }
    EXPECT_TRUE(recorded);
}

TEST(Scenario, herald_rate_targets) {
    for (const char *name : {"loss_high_contrast", "loss_low_contrast"}) {
        const ScenarioConfig cfg = build_scenario(config_with({{"scenario", name}, {"source.nbar", "3"}}));
        const double target = (std::string(name) == "loss_high_contrast" ? 1.0 : 0.13) * 0.15;
        EXPECT_NEAR(herald_rate(cfg.source.profile, cfg.scan.mask, cfg.source.nbar), target, 1e-12);
        EXPECT_NEAR(cfg.herald_rate, target, 1e-12);
    }
    const ScenarioConfig fixed =
        build_scenario(config_with({{"scenario", "loss_high_contrast"}, {"mask.high_contrast", "0.7"}}));
    EXPECT_EQ(fixed.contrast, 0.7);
}

TEST(CmdProfile, analytic_maps) {
    const fs::path dir = fresh_dir("profile");
    const ScenarioConfig init = build_scenario(config_with({{"scenario", "initial"}, {"source.nbar", "2"}}));
    ASSERT_EQ(cmd_profile(init, quiet(dir / "init")), kExitOk);
    const PixelMap initial = read_matrix_csv(dir / "init" / "profile.csv");
    EXPECT_LE((initial - 2.0 * init.source.profile.power()).cwiseAbs().maxCoeff(), 1e-15);

    ASSERT_EQ(cmd_profile(build_scenario(config_with({{"scenario", "loss_low_contrast"}})), quiet(dir / "low")), 0);
    ASSERT_EQ(cmd_profile(build_scenario(config_with({{"scenario", "subtraction"}})), quiet(dir / "sub")), 0);
    const PixelMap low = read_matrix_csv(dir / "low" / "profile.csv");
    const PixelMap sub = read_matrix_csv(dir / "sub" / "profile.csv");
    EXPECT_LE((sub - 2.0 * low).cwiseAbs().maxCoeff(), 1e-15);

    const ScenarioConfig high = build_scenario(config_with({{"scenario", "loss_high_contrast"}}));
    ASSERT_EQ(cmd_profile(high, quiet(dir / "high")), 0);
    const PixelMap shadowed = read_matrix_csv(dir / "high" / "profile.csv");
    const PixelMap bare = high.source.profile.power();
    for (Eigen::Index i = 0; i < shadowed.size(); ++i) {
        const double t = high.scan.mask.transmission()(i);
        EXPECT_NEAR(shadowed(i), t * t * bare(i), 1e-15);
    }
    EXPECT_TRUE(fs::exists(dir / "high" / "profile.pgm"));
    EXPECT_TRUE(fs::exists(dir / "high" / "mask.pgm"));
    EXPECT_EQ(first_line(dir / "high" / "profile.csv"), "64,48");
}

TEST(CmdScan, smoke_round_trip_and_headers) {
    const fs::path dir = fresh_dir("scan");
    ASSERT_EQ(cmd_scan(build_scenario(smoke("subtraction", "3")), quiet(dir)), kExitOk);
    EXPECT_EQ(first_line(dir / "scan.csv"), "row,col,n_bins,camera_counts,herald_counts,coincidence_counts");
    const ScanResult res = read_scan_csv(dir / "scan.csv");
    EXPECT_EQ(res.rows, 6);
    EXPECT_EQ(res.cols, 8);
    EXPECT_EQ(res.trigger_mode, TriggerMode::kCoincidence);
    std::int64_t coincidences = 0;
    for (const auto &c : res.records) {
        EXPECT_EQ(c.n_bins, 10000);
        coincidences += c.coincidence_counts;
    }
    EXPECT_GT(coincidences, 0);
    EXPECT_EQ(first_line(dir / "scan.config"), "scenario=subtraction");
}

TEST(CmdScan, byte_identical_and_reproducible_from_sidecar) {
    const fs::path dir = fresh_dir("determinism");
    const ScenarioConfig cfg = build_scenario(smoke("subtraction", "12345"));
    ASSERT_EQ(cmd_scan(cfg, quiet(dir / "t1", 1)), 0);
    ASSERT_EQ(cmd_scan(cfg, quiet(dir / "t4", 4)), 0);
    ASSERT_EQ(cmd_scan(cfg, quiet(dir / "t8", 8)), 0);
    const std::string reference = slurp(dir / "t1" / "scan.csv");
    EXPECT_EQ(slurp(dir / "t4" / "scan.csv"), reference);
    EXPECT_EQ(slurp(dir / "t8" / "scan.csv"), reference);
    EXPECT_EQ(slurp(dir / "t8" / "scan.config"), slurp(dir / "t1" / "scan.config"));

    // Generated seeds are recorded, so the sidecar alone reproduces a run.
    ASSERT_EQ(cmd_scan(build_scenario(smoke("loss_low_contrast", "")), quiet(dir / "a")), 0);
    const KeyValues echoed = merge_config(default_config(), read_key_values(dir / "a" / "scan.config"));
    ASSERT_EQ(cmd_scan(build_scenario(echoed), quiet(dir / "b")), 0);
    EXPECT_EQ(slurp(dir / "a" / "scan.csv"), slurp(dir / "b" / "scan.csv"));
    EXPECT_EQ(slurp(dir / "a" / "scan.config"), slurp(dir / "b" / "scan.config"));
}

TEST(CmdVerify, small_sweep_passes_and_writes_report) {
    const fs::path dir = fresh_dir("verify");
    const VerifySettings settings = build_verify_settings(config_with({{"verify.states", "thermal:0.5,fock:2"},
                                                                       {"verify.c_a", "0.5"},
                                                                       {"verify.r", "0.2"},
                                                                       {"verify.nmax", "25"}}));
    ASSERT_EQ(cmd_verify(settings, quiet(dir)), kExitOk);
    EXPECT_EQ(first_line(dir / "verify.csv"), "state,c_A,r,herald_model,fidelity,herald_prob,complement_population");
    std::ifstream in(dir / "verify.csv");
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
    }
    EXPECT_EQ(rows, 1 + 2 * 2);
    VerifySettings empty = settings;
    empty.states.clear();
    EXPECT_EQ(code_of([&] { cmd_verify(empty, quiet(dir)); }), ErrorCode::kInvalidArgument);
}

TEST(CmdAnalyze, separates_loss_from_subtraction) {
    const fs::path dir = fresh_dir("analyze");
    auto setup = [](const std::string &scenario, const std::string &seed) {
        return config_with({{"scenario", scenario},
                            {"scan.superpixel", "8"},
                            {"scan.bins_per_superpixel", "2000000"},
                            {"scan.seed", seed}});
    };
    ASSERT_EQ(cmd_scan(build_scenario(setup("initial", "1")), quiet(dir / "ref")), 0);
    ASSERT_EQ(cmd_scan(build_scenario(setup("loss_high_contrast", "2")), quiet(dir / "loss")), 0);
    ASSERT_EQ(cmd_scan(build_scenario(setup("subtraction", "3")), quiet(dir / "sub")), 0);

    ASSERT_EQ(cmd_analyze(dir / "loss" / "scan.csv", dir / "ref" / "scan.csv", default_config(),
                          quiet(dir / "loss_report")),
              0);
    ASSERT_EQ(cmd_analyze(dir / "sub" / "scan.csv", std::nullopt, default_config(), quiet(dir / "sub_report")), 0);
    auto report = [&](const std::string &name) {
        std::map<std::string, std::string> out;
        for (const auto &[k, v] : read_key_values(dir / name / "analysis_report.txt")) {
            out[k] = v;
        }
        return out;
    };
    auto loss = report("loss_report");
    auto sub = report("sub_report");
    EXPECT_EQ(loss["verdict"], "SHADOW");
    EXPECT_EQ(sub["verdict"], "NO_SHADOW");
    EXPECT_NEAR(std::stod(sub["best_const"]), 2.0, 0.1);
    EXPECT_EQ(first_line(dir / "sub_report" / "ratio_map.csv"), "row,col,ratio,sigma,region,exclusion");
    EXPECT_EQ(first_line(dir / "sub_report" / "profile_cut.csv"),
              "x,numerator,numerator_sigma,denominator,denominator_sigma");
    EXPECT_EQ(first_line(dir / "sub_report" / "analysis_report.txt"), "mode=subtraction");

    const std::vector<std::string> expected_keys = {"mode",  "verdict",      "chi2",    "dof",         "p_value",
                                                    "best_const", "best_const_sigma", "depth", "depth_sigma",
                                                    "z_score", "g2", "sigma", "superpixels", "used"};
    const KeyValues keys = read_key_values(dir / "sub_report" / "analysis_report.txt");
    ASSERT_EQ(keys.size(), expected_keys.size());
    for (size_t i = 0; i < keys.size(); ++i) {
        EXPECT_EQ(keys[i].first, expected_keys[i]);
    }
}

TEST(CmdAnalyze, grid_mismatch) {
    const fs::path dir = fresh_dir("mismatch");
    ASSERT_EQ(cmd_scan(build_scenario(smoke("initial", "1")), quiet(dir / "ref")), 0);
    KeyValues other = smoke("loss_high_contrast", "2");
    other = merge_config(other, {{"scan.superpixel", "16"}});
    ASSERT_EQ(cmd_scan(build_scenario(other), quiet(dir / "loss")), 0);
    EXPECT_EQ(code_of([&] {
                  cmd_analyze(dir / "loss" / "scan.csv", dir / "ref" / "scan.csv", default_config(), quiet(dir));
              }),
              ErrorCode::kGridMismatch);
}

TEST(Cli, exit_codes) {
    const fs::path dir = fresh_dir("cli");
    EXPECT_EQ(run_cli("--help"), 0);
    EXPECT_EQ(run_cli(""), 1);
    EXPECT_EQ(run_cli("frobnicate"), 1);
    {
        std::ofstream cfg(dir / "bad.cfg");
        cfg << "source.nbar=1\nno.such.key=3\n";
    }
    EXPECT_EQ(run_cli("profile --config " + (dir / "bad.cfg").string() + " --out " + dir.string()), 1);
    {
        std::ofstream cfg(dir / "empty_sweep.cfg");
        cfg << "verify.states=\n";
    }
    EXPECT_EQ(run_cli("verify --config " + (dir / "empty_sweep.cfg").string() + " --out " + dir.string()), 1);
    {
        std::ofstream cfg(dir / "tiny.cfg");
        cfg << "scenario=subtraction\nscan.superpixel=16\nscan.bins_per_superpixel=1000\n"
               "verify.states=fock:1\nverify.c_a=0.5\nverify.r=0.1\nverify.nmax=6\n";
    }
    const std::string common = " --config " + (dir / "tiny.cfg").string() + " --out " + dir.string();
    EXPECT_EQ(run_cli("verify" + common), 0);
    EXPECT_EQ(run_cli("profile" + common), 0);
    EXPECT_EQ(run_cli("scan --seed 9 --threads 2" + common), 0);
    EXPECT_EQ(read_scan_csv(dir / "scan.csv").config_echo.size() > 0, true);
    EXPECT_EQ(run_cli("analyze --input " + (dir / "missing.csv").string() + common), 1);
}
