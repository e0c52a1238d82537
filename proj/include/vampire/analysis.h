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


#ifndef VAMPIRE_ANALYSIS_H
#define VAMPIRE_ANALYSIS_H

#include <cstdint>
#include <string_view>
#include <vector>

#include "vampire/montecarlo.h"
#include "vampire/spatial.h"

namespace vampire {

/// Relative error above which a superpixel is left out of a ratio map.
inline constexpr double kDefaultMaxRelativeError = 0.3;
/// Significance used by the shadow verdict.
inline constexpr double kShadowZThreshold = 3.0;
inline constexpr double kFlatnessAlpha = 0.01;

struct G2Estimate {
    double g2;
    double sigma;
};

/// Normalized coincidence rate coincidences * n_bins / (camera * herald), with
/// Poisson errors on all three counts. Throws kInsufficientCounts if either
/// singles count is zero.
G2Estimate g2_estimate(std::int64_t camera_counts, std::int64_t herald_counts, std::int64_t coincidences,
                       std::int64_t n_bins);

/// g2 pooled over superpixels: total coincidences over the total expected
/// for independent streams, sum(camera * herald / n_bins).
G2Estimate pooled_g2(const ScanResult &result);

/// Value and one-sigma error per superpixel.
struct RateMap {
    PixelMap value;
    PixelMap sigma;
};

/// camera_counts / n_bins with Poisson errors.
RateMap unconditional_rates(const ScanResult &result);
/// coincidences / heralds with binomial errors. Throws kNoHeralds.
RateMap conditional_rates(const ScanResult &result);

enum class RegionTag { kInside, kOutside, kExcluded };

enum class Exclusion {
    kNone,
    /// Denominator missing or noisier than the allowed relative error.
    kLowSignal,
    /// Ratio itself noisier than the allowed relative error.
    kImpreciseRatio,
};

struct RatioEntry {
    double ratio;
    double sigma;
    RegionTag tag;
    Exclusion exclusion;
};

struct RatioMap {
    int rows;
    int cols;
    std::vector<RatioEntry> entries;  // row-major

    const RatioEntry &at(int row, int col) const {
        return entries[static_cast<size_t>(row) * cols + col];
    }
};

/// A superpixel is inside the region when at least half of the beam power it
/// collects falls on region pixels.
PixelSet superpixel_region(const BeamProfile &profile, const PixelSet &region, int superpixel);

/// numerator / denominator per superpixel. Throws kGridMismatch.
RatioMap ratio_map(const RateMap &numerator, const RateMap &denominator, const PixelSet &inside,
                   double max_relative_error = kDefaultMaxRelativeError);

struct FlatnessResult {
    double chi2;
    int dof;
    double p_value;
    double best_const;
    double best_const_sigma;
};

/// Weighted fit of a constant to the non-excluded entries; throws
/// kInsufficientData with fewer than two of them.
FlatnessResult flatness_test(const RatioMap &map);

struct ShadowResult {
    double depth;
    double sigma;
    double z_score;
};

/// 1 - mean(inside) / mean(outside) with inverse-variance weighted means.
/// Throws kEmptyRegion.
ShadowResult shadow_depth(const RatioMap &map);

enum class Verdict { kShadow, kNoShadow, kInconclusive };

Verdict shadow_verdict(const FlatnessResult &flatness, const ShadowResult &shadow);
std::string_view verdict_name(Verdict verdict);
std::string_view region_tag_name(RegionTag tag);
std::string_view exclusion_name(Exclusion exclusion);

struct CutPoint {
    int x;
    double value;
    double sigma;
};

/// Column-wise mean over rows [row_begin, row_end]. Throws kBandOutOfRange.
std::vector<CutPoint> profile_cut(const RateMap &map, int row_begin, int row_end);

/// chi-square upper tail probability.
double chi2_survival(double chi2, int dof);

}  // namespace vampire

#endif  // VAMPIRE_ANALYSIS_H
