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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>

#include "vampire/analysis.h"
#include "vampire/error.h"
#include "vampire/grid_io.h"

namespace vampire {

namespace {

std::ostream &log_of(const CommandContext &ctx) {
    return ctx.log ? *ctx.log : std::cout;
}

void ensure_dir(const std::filesystem::path &dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorCode::kIoError, "cannot create " + dir.string() + ": " + ec.message());
    }
}

KeyValues derived_values(const ScenarioConfig &cfg) {
    const double r_eff = std::sqrt(cfg.herald_rate / std::max(cfg.source.nbar, std::numeric_limits<double>::min()));
    return {
        {"derived.region_fraction", format_number(cfg.region_fraction)},
        {"derived.contrast", format_number(cfg.contrast)},
        {"derived.r_eff", format_number(cfg.source.nbar > 0 ? r_eff : 0.0)},
        {"derived.herald_rate", format_number(cfg.herald_rate)},
        {"derived.n_bins", std::to_string(cfg.scan.n_bins())},
        {"derived.bins_per_block", std::to_string(bins_per_block(cfg.source, cfg.scan))},
    };
}

}  // namespace

int cmd_profile(const ScenarioConfig &cfg, const CommandContext &ctx) {
    ensure_dir(ctx.out_dir);
    PixelMap map;
    bool weak_violated = false;
    double r_eff = 0.0;
    if (cfg.scenario == Scenario::kSubtraction) {
        const double g2 = cfg.source.kind == SourceKind::kThermal ? 2.0 : 1.0;
        const AnalyticProfile prof =
            subtracted_profile_analytic(cfg.source.profile, cfg.scan.mask, {cfg.source.nbar, g2}, cfg.source.nbar);
        map = prof.intensity;
        weak_violated = prof.weak_coupling_violated;
        r_eff = prof.r_eff;
    } else {
        map = loss_profile(cfg.source.profile, cfg.scan.mask, cfg.source.nbar);
        r_eff = std::sqrt((cfg.scan.mask.reflectivity().array().square() * cfg.source.profile.power().array()).sum());
    }
    write_matrix_csv(ctx.out_dir / "profile.csv", map);
    write_pgm(ctx.out_dir / "profile.pgm", map, map.maxCoeff() > 0 ? map.maxCoeff() : 1.0);
    write_mask_pgm(ctx.out_dir / "mask.pgm", cfg.scan.mask);
    std::ostream &out = log_of(ctx);
    out << "scenario=" << scenario_name(cfg.scenario) << '\n';
    out << "herald_rate=" << format_number(herald_rate(cfg.source.profile, cfg.scan.mask, cfg.source.nbar)) << '\n';
    out << "r_eff=" << format_number(r_eff) << '\n';
    out << "contrast=" << format_number(cfg.contrast) << '\n';
    if (weak_violated) {
        out << "warning: r_eff above " << kDefaultWeakCouplingThreshold
            << "; the weak-coupling map is only indicative\n";
    }
    return kExitOk;
}

int cmd_scan(const ScenarioConfig &cfg, const CommandContext &ctx) {
    ensure_dir(ctx.out_dir);
    ScanResult result = run_scan(cfg.source, cfg.scan, ctx.threads);
    result.config_echo = cfg.values;
    const KeyValues derived = derived_values(cfg);
    result.config_echo.insert(result.config_echo.end(), derived.begin(), derived.end());
    const auto path = ctx.out_dir / "scan.csv";
    write_scan_csv(path, result);
    std::int64_t camera = 0, herald = 0, coincidences = 0;
    for (const SuperpixelCounts &c : result.records) {
        camera += c.camera_counts;
        herald += c.herald_counts;
        coincidences += c.coincidence_counts;
    }
    std::ostream &out = log_of(ctx);
    out << "wrote " << path.string() << " (" << result.rows << "x" << result.cols << " superpixels, seed "
        << cfg.scan.seed << ")\n";
    out << "camera_counts=" << camera << " herald_counts=" << herald << " coincidence_counts=" << coincidences
        << '\n';
    return kExitOk;
}

int cmd_verify(const VerifySettings &settings, const CommandContext &ctx) {
    if (settings.states.empty() || settings.c_a_values.empty() || settings.r_values.empty() ||
        settings.models.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "verification sweep is empty");
    }
    ensure_dir(ctx.out_dir);
    VerifySweep sweep{settings.states, settings.c_a_values, settings.r_values, settings.models};
    const std::vector<VerifyRow> rows = run_verify_sweep(sweep, ctx.threads);
    write_verify_csv(ctx.out_dir / "verify.csv", rows);

    int operator_cases = 0, failures = 0;
    double worst_fidelity = 1.0, worst_complement = 0.0, worst_click = 1.0;
    for (const VerifyRow &row : rows) {
        if (row.herald_model == HeraldModel::kOperator) {
            ++operator_cases;
            worst_fidelity = std::min(worst_fidelity, row.fidelity);
            worst_complement = std::max(worst_complement, row.complement_population);
            failures += row.fidelity < kVerifyFidelityFloor || row.complement_population > kComplementTolerance;
        } else {
            worst_click = std::min(worst_click, row.fidelity);
        }
    }
    std::ostream &out = log_of(ctx);
    out << "cases=" << rows.size() << " operator_cases=" << operator_cases << '\n';
    if (operator_cases > 0) {
        out << "operator_min_fidelity=" << format_number(worst_fidelity)
            << " operator_max_complement=" << format_number(worst_complement) << '\n';
    }
    if (static_cast<size_t>(operator_cases) < rows.size()) {
        out << "click_min_fidelity=" << format_number(worst_click) << '\n';
    }
    out << (failures == 0 ? "PASS" : "FAIL") << '\n';
    return failures == 0 ? kExitOk : kExitScientific;
}

int cmd_analyze(const std::filesystem::path &input, const std::optional<std::filesystem::path> &reference,
                const KeyValues &values, const CommandContext &ctx) {
    const ScanResult scan = read_scan_csv(input);
    KeyValues merged = values;
    if (!scan.config_echo.empty()) {
        KeyValues geometry;
        for (const auto &kv : scan.config_echo) {
            if (!kv.first.starts_with("analyze.")) {
                geometry.push_back(kv);
            }
        }
        merged = merge_config(values, geometry);
    }
    const ScenarioConfig cfg = build_scenario(merged);
    const SuperpixelGrid grid{cfg.scan.superpixel, cfg.source.profile.width(), cfg.source.profile.height()};
    if (grid.rows() != scan.rows || grid.cols() != scan.cols) {
        throw Error(ErrorCode::kGridMismatch, "scan grid does not match the configured superpixel layout");
    }
    const PixelSet inside = superpixel_region(cfg.source.profile, cfg.region, cfg.scan.superpixel);

    RateMap numerator, denominator;
    std::string mode;
    if (reference) {
        const ScanResult ref = read_scan_csv(*reference);
        if (ref.rows != scan.rows || ref.cols != scan.cols) {
            throw Error(ErrorCode::kGridMismatch, "input and reference scans use different superpixel grids");
        }
        numerator = unconditional_rates(scan);
        denominator = unconditional_rates(ref);
        mode = "loss";
    } else if (scan.trigger_mode == TriggerMode::kCoincidence) {
        numerator = conditional_rates(scan);
        denominator = unconditional_rates(scan);
        mode = "subtraction";
    } else {
        throw Error(ErrorCode::kInvalidArgument, "a singles scan needs --reference to form a ratio map");
    }

    const RatioMap map = ratio_map(numerator, denominator, inside, cfg.max_relative_error);
    const FlatnessResult flat = flatness_test(map);
    const ShadowResult shadow = shadow_depth(map);
    const Verdict verdict = shadow_verdict(flat, shadow);
    int used = 0;
    for (const RatioEntry &e : map.entries) {
        used += e.tag != RegionTag::kExcluded;
    }

    ensure_dir(ctx.out_dir);
    write_ratio_csv(ctx.out_dir / "ratio_map.csv", map);
    PixelMap ratios(map.rows, map.cols);
    for (int r = 0; r < map.rows; ++r) {
        for (int c = 0; c < map.cols; ++c) {
            ratios(r, c) = map.at(r, c).tag == RegionTag::kExcluded ? 0.0 : map.at(r, c).ratio;
        }
    }
    write_pgm(ctx.out_dir / "ratio_map.pgm", ratios, ratios.maxCoeff() > 0 ? ratios.maxCoeff() : 1.0);

    const auto [band_begin, band_end] = cfg.band.value_or(
        scan.rows >= 3 ? std::pair{scan.rows / 3, (2 * scan.rows) / 3 - 1} : std::pair{0, scan.rows - 1});
    const auto num_cut = profile_cut(numerator, band_begin, band_end);
    const auto den_cut = profile_cut(denominator, band_begin, band_end);
    {
        std::ofstream out(ctx.out_dir / "profile_cut.csv");
        out << "x,numerator,numerator_sigma,denominator,denominator_sigma\n";
        for (size_t i = 0; i < num_cut.size(); ++i) {
            out << num_cut[i].x << ',' << format_number(num_cut[i].value) << ',' << format_number(num_cut[i].sigma)
                << ',' << format_number(den_cut[i].value) << ',' << format_number(den_cut[i].sigma) << '\n';
        }
    }

    std::string g2 = "nan", g2_sigma = "nan";
    try {
        const G2Estimate est = pooled_g2(scan);
        g2 = format_number(est.g2);
        g2_sigma = format_number(est.sigma);
    } catch (const Error &) {
        // Singles scans without herald clicks have no g2.
    }
    const KeyValues report = {
        {"mode", mode},
        {"verdict", std::string(verdict_name(verdict))},
        {"chi2", format_number(flat.chi2)},
        {"dof", std::to_string(flat.dof)},
        {"p_value", format_number(flat.p_value)},
        {"best_const", format_number(flat.best_const)},
        {"best_const_sigma", format_number(flat.best_const_sigma)},
        {"depth", format_number(shadow.depth)},
        {"depth_sigma", format_number(shadow.sigma)},
        {"z_score", format_number(shadow.z_score)},
        {"g2", g2},
        {"sigma", g2_sigma},
        {"superpixels", std::to_string(map.entries.size())},
        {"used", std::to_string(used)},
    };
    write_key_values(ctx.out_dir / "analysis_report.txt", report);
    std::ostream &out = log_of(ctx);
    for (const auto &[k, v] : report) {
        out << k << '=' << v << '\n';
    }
    return kExitOk;
}

}  // namespace vampire
