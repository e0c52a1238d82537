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


// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "vampire/analysis.h"
#include "vampire/commands.h"
#include "vampire/error.h"
#include "vampire/fock.h"
#include "vampire/montecarlo.h"
#include "vampire/scenario.h"
#include "vampire/verify.h"

using namespace vampire;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int threads() {
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::string fmt(const char *format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char *format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

// Desk-scale raster: 4-pixel superpixels give a 16 x 12 grid on 64 x 48.
KeyValues raster(const std::string &scenario, std::int64_t bins, std::uint64_t seed) {
    return merge_config(default_config(), {{"scenario", scenario},
                                           {"scan.superpixel", "4"},
                                           {"scan.bins_per_superpixel", std::to_string(bins)},
                                           {"scan.seed", std::to_string(seed)}});
}

Outcome thermal_doubling() {
    double worst = 0.0;
    for (double nbar : {0.2, 0.5, 1.0}) {
        const double mean = mean_photon_number(subtract_photon(make_thermal(nbar, 60)).state);
        worst = std::max(worst, std::abs(mean - 2.0 * nbar));
    }
    return {worst <= 1e-6, fmt("max |<n>_s - 2 nbar| = %.2e (tol 1e-6)", worst)};
}

Outcome statistics_identity() {
    const std::vector<DensityMatrix> states = {make_thermal(1.0, 60), make_coherent(1.0, 60), make_fock(5, 60),
                                               mix(make_thermal(1.0, 60), make_coherent(1.0, 60), 0.5)};
    double worst = 0.0;
    for (const DensityMatrix &rho : states) {
        const double ratio = mean_photon_number(subtract_photon(rho).state) / mean_photon_number(rho);
        worst = std::max(worst, std::abs(ratio - stats(rho).g2));
    }
    return {worst <= 1e-8, fmt("max |<n>_s/<n>_0 - g2| = %.2e (tol 1e-8)", worst)};
}

Outcome linear_growth() {
    const DensityMatrix rho = make_thermal(0.5, 80);
    double worst = 0.0;
    for (int k = 1; k <= 5; ++k) {
        worst = std::max(worst, std::abs(mean_photon_number(subtract_k(rho, k)) / 0.5 - (k + 1)));
    }
    return {worst <= 1e-4, fmt("max |<n>_k/nbar - (k+1)| = %.2e for k=1..5 (tol 1e-4)", worst)};
}

Outcome vampire_theorem() {
    VerifySweep sweep;
    sweep.states = default_verify_states();
    sweep.models = {HeraldModel::kOperator};
    const auto rows = run_verify_sweep(sweep, threads());
    double worst_f = 1.0, worst_c = 0.0;
    for (const VerifyRow &row : rows) {
        worst_f = std::min(worst_f, row.fidelity);
        worst_c = std::max(worst_c, row.complement_population);
    }
    const bool pass = rows.size() >= 36 && worst_f >= 1 - 1e-9 && worst_c <= 1e-10;
    return {pass, fmt("%zu cases, min fidelity 1-%.1e (tol 1e-9), max complement %.1e (tol 1e-10)", rows.size(),
                      1 - worst_f, worst_c)};
}

Outcome coherent_invariance() {
    const DensityMatrix direct_in = make_coherent(1.0, 40);
    double worst = 1.0 - fidelity(subtract_photon(direct_in).state, direct_in);
    const DensityMatrix rho = make_coherent(1.0, kVerifyNmax);
    for (double c_a : {0.1, 0.5, 0.9}) {
        for (double r : {0.05, 0.1, 0.2, 0.5}) {
            const RegionalResult res = regional_subtraction(rho, {c_a, r, HeraldModel::kOperator});
            worst = std::max(worst, 1.0 - fidelity(res.state, rho));
        }
    }
    return {worst <= 1e-9, fmt("max 1-F(subtracted, input) = %.1e over direct and 12 regional cases (tol 1e-9)",
                               worst)};
}

Outcome herald_gap() {
    const auto points = herald_model_gap(make_thermal(1.0, kVerifyNmax), std::sqrt(0.3), {0.02, 0.05, 0.1, 0.2});
    const double slope = log_log_slope(points);
    std::string detail = fmt("log-log slope %.3f (target 2.0 +- 0.3); sqrt(1-F):", slope);
    for (const GapPoint &p : points) {
        detail += fmt(" %.2e", p.deviation);
    }
    return {std::abs(slope - 2.0) <= 0.3, detail};
}

Outcome loss_shadow() {
    const ScenarioConfig ref = build_scenario(raster("initial", 1000000, 71));
    const ScenarioConfig loss = build_scenario(raster("loss_high_contrast", 1000000, 72));
    const ScanResult ref_scan = run_scan(ref.source, ref.scan, threads());
    const ScanResult loss_scan = run_scan(loss.source, loss.scan, threads());
    const PixelSet inside = superpixel_region(loss.source.profile, loss.region, loss.scan.superpixel);
    const RatioMap map = ratio_map(unconditional_rates(loss_scan), unconditional_rates(ref_scan), inside);
    const FlatnessResult flat = flatness_test(map);
    const ShadowResult shadow = shadow_depth(map);
    return {shadow.z_score > 5 && flat.p_value < 1e-6 && loss_scan.rows * loss_scan.cols == 192,
            fmt("16x12 grid, contrast %.3f, <n_R> %.3f: depth %.3f, z %.1f (need > 5), flatness p %.1e (need < 1e-6)",
                loss.contrast, loss.herald_rate, shadow.depth, shadow.z_score, flat.p_value)};
}

Outcome subtraction_no_shadow() {
    const ScenarioConfig cfg = build_scenario(raster("subtraction", 10000000, 81));
    const ScanResult scan = run_scan(cfg.source, cfg.scan, threads());
    const PixelSet inside = superpixel_region(cfg.source.profile, cfg.region, cfg.scan.superpixel);
    const RatioMap map = ratio_map(conditional_rates(scan), unconditional_rates(scan), inside);
    const FlatnessResult flat = flatness_test(map);
    const ShadowResult shadow = shadow_depth(map);
    const bool pass = flat.p_value > 0.01 && std::abs(shadow.z_score) < 3 && std::abs(flat.best_const - 2.0) <= 0.05;
    return {pass, fmt("<n_R> %.4f: flatness p %.3f (need > 0.01), z %.2f (need |z| < 3), best_const %.4f +- %.4f "
                      "(need 2.0 +- 0.05), %d dof",
                      cfg.herald_rate, flat.p_value, shadow.z_score, flat.best_const, flat.best_const_sigma, flat.dof)};
}

Outcome mc_analytic_consistency() {
    int outliers = 0, total = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const ScenarioConfig cfg = build_scenario(raster("loss_high_contrast", 1000000, 900 + seed));
        const ScanResult scan = run_scan(cfg.source, cfg.scan, threads());
        const PixelMap w = camera_weights(cfg.source.profile, cfg.scan.mask, cfg.scan.superpixel);
        const std::int64_t block = bins_per_block(cfg.source, cfg.scan);
        const DetectorConfig &det = cfg.scan.camera_detector;
        for (const SuperpixelCounts &c : scan.records) {
            // Thermal average of 1 - (1-d) exp(-eta I) over exponential I.
            const double a = det.efficiency * cfg.source.nbar * w(c.row, c.col);
            const double q = 1.0 - det.dark_prob;
            const double p = 1.0 - q / (1.0 + a);
            const double p2 = 1.0 - 2.0 * q / (1.0 + a) + q * q / (1.0 + 2.0 * a);
            // Clicks within one coherence block share the intensity draw.
            const double n = static_cast<double>(c.n_bins);
            const double var = n * (p - p2) + n * static_cast<double>(block) * (p2 - p * p);
            const double dev = std::abs(static_cast<double>(c.camera_counts) - n * p);
            outliers += var > 0 ? dev > 3 * std::sqrt(var) : dev > 0;
            ++total;
        }
    }
    const double fraction = static_cast<double>(outliers) / total;
    return {fraction <= 0.01 && total == 1920,
            fmt("%d of %d superpixels beyond 3 sigma over 10 seeds (%.2f%%, need <= 1%%)", outliers, total,
                100 * fraction)};
}

Outcome determinism() {
    const auto dir = std::filesystem::temp_directory_path() / "vampire_acceptance_determinism";
    std::filesystem::remove_all(dir);
    const ScenarioConfig cfg = build_scenario(raster("subtraction", 100000, 2024));
    std::ostringstream sink;
    std::vector<std::string> files;
    for (int t : {1, 4, 8}) {
        const auto out = dir / ("threads_" + std::to_string(t));
        cmd_scan(cfg, CommandContext{out, t, &sink});
        std::ifstream in(out / "scan.csv", std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        files.push_back(ss.str());
    }
    const bool same = files[0] == files[1] && files[0] == files[2] && !files[0].empty();
    return {same, fmt("scan.csv at 1, 4, 8 threads: %s (%zu bytes)", same ? "byte-identical" : "DIFFERENT",
                      files[0].size())};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char *name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "thermal doubling", 1, thermal_doubling},
        {2, "statistics identity", 1, statistics_identity},
        {3, "linear growth", 5, linear_growth},
        {4, "regional subtraction theorem", 300, vampire_theorem},
        {5, "coherent invariance", 0, coherent_invariance},
        {6, "herald-model gap", 0, herald_gap},
        {7, "loss shadow", 600, loss_shadow},
        {8, "subtraction without shadow", 900, subtraction_no_shadow},
        {9, "MC-analytic consistency", 0, mc_analytic_consistency},
        {10, "determinism", 0, determinism},
    };
    int failures = 0;
    for (const Criterion &c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception &e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::string timing = fmt("%.2f s", elapsed);
        if (c.budget_s > 0) {
            timing += fmt(" of %.0f s", c.budget_s);
            if (elapsed > c.budget_s) {
                outcome.pass = false;
            }
        }
        failures += !outcome.pass;
        std::printf("criterion %2d %s  %s: %s [%s]\n", c.id, outcome.pass ? "PASS" : "FAIL", c.name,
                    outcome.detail.c_str(), timing.c_str());
        std::fflush(stdout);
    }
    std::printf("%s: %d of %zu criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
