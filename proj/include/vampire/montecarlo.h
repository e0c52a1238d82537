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


#ifndef VAMPIRE_MONTECARLO_H
#define VAMPIRE_MONTECARLO_H

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vampire/philox.h"
#include "vampire/spatial.h"

namespace vampire {

struct DetectorConfig {
    double efficiency = 0.6;
    /// Dark-click probability per time bin.
    double dark_prob = 0.0;
    double bin_width_ns = 12.0;
};

enum class SourceKind {
    /// Complex Gaussian field amplitude redrawn every coherence time.
    kThermal,
    /// Fixed |alpha|^2 = nbar.
    kCoherent,
};

struct SourceConfig {
    /// Mean photons per time bin in the whole beam.
    double nbar = 1.0;
    double coherence_time_ns = 1000.0;
    SourceKind kind = SourceKind::kThermal;
    BeamProfile profile = make_profile({});
};

enum class TriggerMode { kSingles, kCoincidence };

struct ScanConfig {
    int superpixel = 11;
    /// Time spent on each superpixel.
    double dwell_ns = 1e7;
    /// If positive, overrides dwell_ns as the number of bins per superpixel.
    std::int64_t bins_per_superpixel = 0;
    MaskSpec mask = MaskSpec::from_transmission(PixelMap::Ones(kDefaultGridHeight, kDefaultGridWidth));
    TriggerMode trigger_mode = TriggerMode::kCoincidence;
    std::uint64_t seed = 0;
    DetectorConfig herald_detector;
    DetectorConfig camera_detector;

    std::int64_t n_bins() const;
};

struct SuperpixelCounts {
    int row;
    int col;
    std::int64_t n_bins;
    std::int64_t camera_counts;
    std::int64_t herald_counts;
    std::int64_t coincidence_counts;
};

struct ScanResult {
    int rows;
    int cols;
    /// Row-major over (row, col).
    std::vector<SuperpixelCounts> records;
    /// Parameters that determine the counts, as key=value pairs.
    std::vector<std::pair<std::string, std::string>> config_echo;
    TriggerMode trigger_mode;

    const SuperpixelCounts &at(int row, int col) const {
        return records[static_cast<size_t>(row) * cols + col];
    }
};

/// Random stream for one (superpixel, coherence block).
class BlockStream {
   public:
    BlockStream(std::uint64_t seed, std::uint64_t superpixel, std::uint64_t block)
        : key_{seed, kStreamTag}, superpixel_(superpixel), block_(block) {
    }

    /// Four 64-bit words for draw index `draw`.
    Philox4x64::Counter draw(std::uint64_t index) const {
        return Philox4x64::generate({superpixel_, block_, index, 0}, key_);
    }

   private:
    static constexpr std::uint64_t kStreamTag = 0x56414d5049524531ULL;
    Philox4x64::Key key_;
    std::uint64_t superpixel_;
    std::uint64_t block_;
};

/// Circular complex Gaussian with E|alpha|^2 = nbar, from draw 0 of `stream`.
Complex sample_block_amplitude(const BlockStream &stream, double nbar);

/// 1 - (1 - dark) exp(-efficiency * intensity).
double click_probability(double intensity, const DetectorConfig &det);

/// Mean and second moment of the click probability when the intensity is
/// exponentially distributed with the given mean (thermal light).
struct ClickMoments {
    double mean;
    double second;
};
ClickMoments thermal_click_moments(double mean_intensity, const DetectorConfig &det);

/// Variance of the click count over n_bins when the intensity is redrawn every
/// bins_per_block bins; clicks within a block are correlated through it.
double thermal_count_variance(std::int64_t n_bins, std::int64_t bins_per_block, double mean_intensity,
                              const DetectorConfig &det);

std::int64_t bins_per_block(const SourceConfig &src, const ScanConfig &scan);

/// Raster scan over superpixels. Superpixels are independent and are shared
/// among `threads` workers; the result does not depend on the thread count.
/// Throws kConfigMismatch for inconsistent dimensions or timing.
ScanResult run_scan(const SourceConfig &src, const ScanConfig &scan, int threads = 1);

/// Per-superpixel transmitted power weight sum t_i^2 u_i^2 (rows x cols).
PixelMap camera_weights(const BeamProfile &profile, const MaskSpec &mask, int superpixel);

struct ConditionalMap {
    PixelMap conditional;  // coincidences / heralds
    PixelMap conditional_err;
    PixelMap unconditional;  // camera counts / bins
    PixelMap unconditional_err;
};

/// Throws kNoHeralds if any superpixel has no herald clicks and
/// kInvalidArgument for singles-mode data.
ConditionalMap conditional_profile_mc(const ScanResult &result);

std::string_view trigger_mode_name(TriggerMode mode);
TriggerMode parse_trigger_mode(std::string_view name);
std::string_view source_kind_name(SourceKind kind);
SourceKind parse_source_kind(std::string_view name);

}  // namespace vampire

#endif  // VAMPIRE_MONTECARLO_H
