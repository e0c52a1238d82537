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


#include "vampire/montecarlo.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

#include "vampire/error.h"
#include "vampire/scan_io.h"

namespace vampire {

namespace {

void check_detector(const DetectorConfig &det, const char *name) {
    if (!(det.efficiency >= 0.0 && det.efficiency <= 1.0) || !(det.dark_prob >= 0.0 && det.dark_prob < 1.0) ||
        !(det.bin_width_ns > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, std::string(name) + " detector parameters out of range");
    }
}

void validate(const SourceConfig &src, const ScanConfig &scan) {
    check_detector(scan.herald_detector, "herald");
    check_detector(scan.camera_detector, "camera");
    if (!(src.nbar >= 0.0) || !std::isfinite(src.nbar)) {
        throw Error(ErrorCode::kInvalidArgument, "source nbar must be a finite non-negative number");
    }
    if (scan.mask.width() != src.profile.width() || scan.mask.height() != src.profile.height()) {
        std::ostringstream os;
        os << "mask is " << scan.mask.width() << "x" << scan.mask.height() << " but the beam profile is "
           << src.profile.width() << "x" << src.profile.height();
        throw Error(ErrorCode::kConfigMismatch, os.str());
    }
    if (scan.superpixel < 1) {
        throw Error(ErrorCode::kConfigMismatch, "superpixel side must be at least one pixel");
    }
    if (scan.herald_detector.bin_width_ns != scan.camera_detector.bin_width_ns) {
        throw Error(ErrorCode::kConfigMismatch, "herald and camera detectors must share one time bin");
    }
    if (scan.n_bins() < 1) {
        throw Error(ErrorCode::kConfigMismatch, "dwell is shorter than one time bin");
    }
    bins_per_block(src, scan);
}

}  // namespace

std::int64_t ScanConfig::n_bins() const {
    if (bins_per_superpixel > 0) {
        return bins_per_superpixel;
    }
    return static_cast<std::int64_t>(std::floor(dwell_ns / camera_detector.bin_width_ns));
}

std::int64_t bins_per_block(const SourceConfig &src, const ScanConfig &scan) {
    const double ratio = src.coherence_time_ns / scan.camera_detector.bin_width_ns;
    if (!(ratio >= 1.0)) {
        throw Error(ErrorCode::kConfigMismatch, "coherence time is shorter than a time bin");
    }
    return static_cast<std::int64_t>(std::floor(ratio));
}

Complex sample_block_amplitude(const BlockStream &stream, double nbar) {
    if (nbar == 0.0) {
        return 0.0;
    }
    const auto bits = stream.draw(0);
    // |alpha|^2 is exponential with mean nbar; the phase is uniform.
    const double modulus = std::sqrt(-nbar * std::log1p(-to_unit(bits[0])));
    const double phase = 2.0 * std::numbers::pi * to_unit(bits[1]);
    return std::polar(modulus, phase);
}

double click_probability(double intensity, const DetectorConfig &det) {
    return 1.0 - (1.0 - det.dark_prob) * std::exp(-det.efficiency * intensity);
}

ClickMoments thermal_click_moments(double mean_intensity, const DetectorConfig &det) {
    const double a = det.efficiency * mean_intensity;
    const double q = 1.0 - det.dark_prob;
    return ClickMoments{1.0 - q / (1.0 + a), 1.0 - 2.0 * q / (1.0 + a) + q * q / (1.0 + 2.0 * a)};
}

double thermal_count_variance(std::int64_t n_bins, std::int64_t bins_per_block, double mean_intensity,
                              const DetectorConfig &det) {
    const ClickMoments m = thermal_click_moments(mean_intensity, det);
    const double var_p = std::max(0.0, m.second - m.mean * m.mean);
    auto block_variance = [&](double len) { return len * (m.mean - m.second) + len * len * var_p; };
    const std::int64_t full = n_bins / bins_per_block;
    const std::int64_t rest = n_bins % bins_per_block;
    return static_cast<double>(full) * block_variance(static_cast<double>(bins_per_block)) +
           block_variance(static_cast<double>(rest));
}

PixelMap camera_weights(const BeamProfile &profile, const MaskSpec &mask, int superpixel) {
    const PixelMap transmitted = (mask.transmission().array().square() * profile.power().array()).matrix();
    return SuperpixelGrid{superpixel, profile.width(), profile.height()}.sums(transmitted);
}

ScanResult run_scan(const SourceConfig &src, const ScanConfig &scan, int threads) {
    validate(src, scan);
    const PixelMap weights = camera_weights(src.profile, scan.mask, scan.superpixel);
    const double r_eff2 = (scan.mask.reflectivity().array().square() * src.profile.power().array()).sum();
    const std::int64_t n_bins = scan.n_bins();
    const std::int64_t block_len = bins_per_block(src, scan);

    ScanResult result;
    result.rows = static_cast<int>(weights.rows());
    result.cols = static_cast<int>(weights.cols());
    result.trigger_mode = scan.trigger_mode;
    result.records.resize(static_cast<size_t>(result.rows) * result.cols);

    auto simulate = [&](size_t index) {
        const int row = static_cast<int>(index / result.cols);
        const int col = static_cast<int>(index % result.cols);
        const double w = weights(row, col);
        SuperpixelCounts counts{row, col, n_bins, 0, 0, 0};
        for (std::int64_t block = 0, start = 0; start < n_bins; ++block, start += block_len) {
            const std::int64_t len = std::min(block_len, n_bins - start);
            const BlockStream stream(scan.seed, index, static_cast<std::uint64_t>(block));
            const double intensity =
                src.kind == SourceKind::kThermal ? std::norm(sample_block_amplitude(stream, src.nbar)) : src.nbar;
            const double p_cam = click_probability(intensity * w, scan.camera_detector);
            const double p_her = click_probability(intensity * r_eff2, scan.herald_detector);
            // Each draw covers two bins: words (0, 1) and (2, 3) are the
            // (camera, herald) uniforms of consecutive bins.
            for (std::int64_t j = 0; j < len; j += 2) {
                const auto bits = stream.draw(1 + static_cast<std::uint64_t>(j / 2));
                for (int half = 0; half < 2 && j + half < len; ++half) {
                    const bool cam = to_unit(bits[2 * half]) < p_cam;
                    const bool her = to_unit(bits[2 * half + 1]) < p_her;
                    counts.camera_counts += cam;
                    counts.herald_counts += her;
                    counts.coincidence_counts += cam && her;
                }
            }
        }
        result.records[index] = counts;
    };

    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr failure;
    auto worker = [&] {
        for (size_t i = next++; i < result.records.size() && !failed; i = next++) {
            try {
                simulate(i);
            } catch (...) {
                if (!failed.exchange(true)) {
                    failure = std::current_exception();
                }
            }
        }
    };
    const int n_threads = std::clamp(threads, 1, std::max(1, static_cast<int>(result.records.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n_threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (std::thread &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    result.config_echo = {
        {"scan.seed", std::to_string(scan.seed)},
        {"source.kind", std::string(source_kind_name(src.kind))},
        {"source.nbar", format_number(src.nbar)},
        {"source.coherence_time_ns", format_number(src.coherence_time_ns)},
        {"derived.grid_width", std::to_string(src.profile.width())},
        {"derived.grid_height", std::to_string(src.profile.height())},
        {"scan.superpixel", std::to_string(scan.superpixel)},
        {"derived.n_bins", std::to_string(n_bins)},
        {"derived.bins_per_block", std::to_string(block_len)},
        {"scan.trigger_mode", std::string(trigger_mode_name(scan.trigger_mode))},
        {"detector.bin_width_ns", format_number(scan.camera_detector.bin_width_ns)},
        {"herald.efficiency", format_number(scan.herald_detector.efficiency)},
        {"herald.dark_prob", format_number(scan.herald_detector.dark_prob)},
        {"camera.efficiency", format_number(scan.camera_detector.efficiency)},
        {"camera.dark_prob", format_number(scan.camera_detector.dark_prob)},
        {"derived.r_eff", format_number(std::sqrt(r_eff2))},
    };
    return result;
}

ConditionalMap conditional_profile_mc(const ScanResult &result) {
    if (result.trigger_mode != TriggerMode::kCoincidence) {
        throw Error(ErrorCode::kInvalidArgument, "conditional profile needs coincidence-mode data");
    }
    ConditionalMap out{PixelMap(result.rows, result.cols), PixelMap(result.rows, result.cols),
                       PixelMap(result.rows, result.cols), PixelMap(result.rows, result.cols)};
    for (const SuperpixelCounts &c : result.records) {
        if (c.herald_counts <= 0 || c.n_bins <= 0) {
            std::ostringstream os;
            os << "superpixel (" << c.row << ", " << c.col << ") recorded no heralds";
            throw Error(ErrorCode::kNoHeralds, os.str());
        }
        const double h = static_cast<double>(c.herald_counts);
        const double n = static_cast<double>(c.n_bins);
        const double pc = static_cast<double>(c.coincidence_counts) / h;
        const double pu = static_cast<double>(c.camera_counts) / n;
        out.conditional(c.row, c.col) = pc;
        out.conditional_err(c.row, c.col) = std::sqrt(pc * (1.0 - pc) / h);
        out.unconditional(c.row, c.col) = pu;
        out.unconditional_err(c.row, c.col) = std::sqrt(pu * (1.0 - pu) / n);
    }
    return out;
}

std::string_view trigger_mode_name(TriggerMode mode) {
    return mode == TriggerMode::kSingles ? "singles" : "coincidence";
}

TriggerMode parse_trigger_mode(std::string_view name) {
    if (name == "singles") {
        return TriggerMode::kSingles;
    }
    if (name == "coincidence") {
        return TriggerMode::kCoincidence;
    }
    throw Error(ErrorCode::kInvalidArgument, "unknown trigger mode '" + std::string(name) + "'");
}

std::string_view source_kind_name(SourceKind kind) {
    return kind == SourceKind::kThermal ? "thermal" : "coherent";
}

SourceKind parse_source_kind(std::string_view name) {
    if (name == "thermal") {
        return SourceKind::kThermal;
    }
    if (name == "coherent") {
        return SourceKind::kCoherent;
    }
    throw Error(ErrorCode::kInvalidArgument, "unknown source kind '" + std::string(name) + "'");
}

}  // namespace vampire
