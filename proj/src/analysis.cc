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


#include "vampire/analysis.h"

#include <cmath>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "vampire/error.h"

namespace vampire {

namespace {

struct WeightedMean {
    double mean;
    double sigma;
};

template <typename Pred>
WeightedMean weighted_mean(const RatioMap &map, Pred keep) {
    double sw = 0.0, swx = 0.0;
    for (const RatioEntry &e : map.entries) {
        if (e.tag != RegionTag::kExcluded && keep(e)) {
            const double w = 1.0 / (e.sigma * e.sigma);
            sw += w;
            swx += w * e.ratio;
        }
    }
    return WeightedMean{sw > 0.0 ? swx / sw : 0.0, sw > 0.0 ? 1.0 / std::sqrt(sw) : 0.0};
}

}  // namespace

G2Estimate g2_estimate(std::int64_t camera_counts, std::int64_t herald_counts, std::int64_t coincidences,
                       std::int64_t n_bins) {
    if (camera_counts < 0 || herald_counts < 0 || coincidences < 0 || n_bins <= 0) {
        throw Error(ErrorCode::kInvalidArgument, "counts must be non-negative and n_bins positive");
    }
    if (camera_counts == 0 || herald_counts == 0) {
        throw Error(ErrorCode::kInsufficientCounts, "g2 needs clicks on both detectors");
    }
    const double a = static_cast<double>(camera_counts);
    const double b = static_cast<double>(herald_counts);
    const double c = static_cast<double>(coincidences);
    const double scale = static_cast<double>(n_bins) / (a * b);
    const double g2 = c * scale;
    // With no coincidences the Poisson error on c is taken as one count.
    const double var = scale * scale * std::max(c, 1.0) + g2 * g2 * (1.0 / a + 1.0 / b);
    return G2Estimate{g2, std::sqrt(var)};
}

G2Estimate pooled_g2(const ScanResult &result) {
    double a = 0.0, b = 0.0, c = 0.0, expected = 0.0;
    for (const SuperpixelCounts &s : result.records) {
        a += static_cast<double>(s.camera_counts);
        b += static_cast<double>(s.herald_counts);
        c += static_cast<double>(s.coincidence_counts);
        if (s.n_bins > 0) {
            expected += static_cast<double>(s.camera_counts) * static_cast<double>(s.herald_counts) /
                        static_cast<double>(s.n_bins);
        }
    }
    if (a == 0.0 || b == 0.0 || expected == 0.0) {
        throw Error(ErrorCode::kInsufficientCounts, "g2 needs clicks on both detectors");
    }
    const double g2 = c / expected;
    return G2Estimate{g2, g2 * std::sqrt(1.0 / std::max(c, 1.0) + 1.0 / a + 1.0 / b)};
}

RateMap unconditional_rates(const ScanResult &result) {
    RateMap out{PixelMap::Zero(result.rows, result.cols), PixelMap::Zero(result.rows, result.cols)};
    for (const SuperpixelCounts &c : result.records) {
        const double n = static_cast<double>(c.n_bins);
        out.value(c.row, c.col) = static_cast<double>(c.camera_counts) / n;
        out.sigma(c.row, c.col) = std::sqrt(static_cast<double>(c.camera_counts)) / n;
    }
    return out;
}

RateMap conditional_rates(const ScanResult &result) {
    const ConditionalMap m = conditional_profile_mc(result);
    return RateMap{m.conditional, m.conditional_err};
}

PixelSet superpixel_region(const BeamProfile &profile, const PixelSet &region, int superpixel) {
    if (region.rows() != profile.height() || region.cols() != profile.width()) {
        throw Error(ErrorCode::kGridMismatch, "region and beam profile differ in size");
    }
    const SuperpixelGrid grid{superpixel, profile.width(), profile.height()};
    const PixelMap power = profile.power();
    const PixelMap total = grid.sums(power);
    const PixelMap in_region = grid.sums(region.select(power, 0.0));
    return (total.array() > 0.0) && (in_region.array() >= 0.5 * total.array());
}

RatioMap ratio_map(const RateMap &numerator, const RateMap &denominator, const PixelSet &inside,
                   double max_relative_error) {
    const Eigen::Index rows = denominator.value.rows();
    const Eigen::Index cols = denominator.value.cols();
    auto same = [&](Eigen::Index r, Eigen::Index c) { return r == rows && c == cols; };
    if (!same(numerator.value.rows(), numerator.value.cols()) || !same(numerator.sigma.rows(), numerator.sigma.cols()) ||
        !same(denominator.sigma.rows(), denominator.sigma.cols()) || !same(inside.rows(), inside.cols())) {
        throw Error(ErrorCode::kGridMismatch, "ratio map inputs are on different superpixel grids");
    }
    RatioMap map{static_cast<int>(rows), static_cast<int>(cols), {}};
    map.entries.reserve(static_cast<size_t>(rows * cols));
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            const double num = numerator.value(r, c);
            const double den = denominator.value(r, c);
            const double rel_den = den > 0.0 ? denominator.sigma(r, c) / den : INFINITY;
            const double rel_num = num > 0.0 ? numerator.sigma(r, c) / num : INFINITY;
            RatioEntry e{den > 0.0 ? num / den : 0.0, 0.0, inside(r, c) ? RegionTag::kInside : RegionTag::kOutside,
                         Exclusion::kNone};
            e.sigma = std::abs(e.ratio) * std::hypot(rel_num, rel_den);
            if (!(rel_den <= max_relative_error)) {
                e.exclusion = Exclusion::kLowSignal;
            } else if (!(std::hypot(rel_num, rel_den) <= max_relative_error) || !(e.sigma > 0.0)) {
                e.exclusion = Exclusion::kImpreciseRatio;
            }
            if (e.exclusion != Exclusion::kNone) {
                e.tag = RegionTag::kExcluded;
            }
            map.entries.push_back(e);
        }
    }
    return map;
}

double chi2_survival(double chi2, int dof) {
    if (dof < 1 || !(chi2 >= 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, "chi-square survival needs dof >= 1 and chi2 >= 0");
    }
    return boost::math::gamma_q(0.5 * dof, 0.5 * chi2);
}

FlatnessResult flatness_test(const RatioMap &map) {
    int used = 0;
    for (const RatioEntry &e : map.entries) {
        used += e.tag != RegionTag::kExcluded;
    }
    if (used < 2) {
        std::ostringstream os;
        os << "flatness test needs two usable superpixels, found " << used;
        throw Error(ErrorCode::kInsufficientData, os.str());
    }
    const WeightedMean fit = weighted_mean(map, [](const RatioEntry &) { return true; });
    double chi2 = 0.0;
    for (const RatioEntry &e : map.entries) {
        if (e.tag != RegionTag::kExcluded) {
            const double z = (e.ratio - fit.mean) / e.sigma;
            chi2 += z * z;
        }
    }
    return FlatnessResult{chi2, used - 1, chi2_survival(chi2, used - 1), fit.mean, fit.sigma};
}

ShadowResult shadow_depth(const RatioMap &map) {
    const WeightedMean in = weighted_mean(map, [](const RatioEntry &e) { return e.tag == RegionTag::kInside; });
    const WeightedMean out = weighted_mean(map, [](const RatioEntry &e) { return e.tag == RegionTag::kOutside; });
    if (in.sigma == 0.0 || out.sigma == 0.0 || out.mean == 0.0) {
        throw Error(ErrorCode::kEmptyRegion, "shadow depth needs usable superpixels inside and outside the region");
    }
    const double q = in.mean / out.mean;
    const double sigma = std::abs(q) * std::hypot(in.sigma / in.mean, out.sigma / out.mean);
    const double depth = 1.0 - q;
    return ShadowResult{depth, sigma, depth / sigma};
}

Verdict shadow_verdict(const FlatnessResult &flatness, const ShadowResult &shadow) {
    if (shadow.z_score >= kShadowZThreshold && flatness.p_value <= kFlatnessAlpha) {
        return Verdict::kShadow;
    }
    if (flatness.p_value > kFlatnessAlpha && std::abs(shadow.z_score) < kShadowZThreshold) {
        return Verdict::kNoShadow;
    }
    return Verdict::kInconclusive;
}

std::string_view verdict_name(Verdict verdict) {
    switch (verdict) {
        case Verdict::kShadow:
            return "SHADOW";
        case Verdict::kNoShadow:
            return "NO_SHADOW";
        case Verdict::kInconclusive:
            break;
    }
    return "INCONCLUSIVE";
}

std::string_view region_tag_name(RegionTag tag) {
    switch (tag) {
        case RegionTag::kInside:
            return "inside_mask_region";
        case RegionTag::kOutside:
            return "outside";
        case RegionTag::kExcluded:
            break;
    }
    return "excluded_low_signal";
}

std::string_view exclusion_name(Exclusion exclusion) {
    switch (exclusion) {
        case Exclusion::kNone:
            return "";
        case Exclusion::kLowSignal:
            return "low_signal";
        case Exclusion::kImpreciseRatio:
            break;
    }
    return "imprecise_ratio";
}

std::vector<CutPoint> profile_cut(const RateMap &map, int row_begin, int row_end) {
    if (row_begin < 0 || row_end < row_begin || row_end >= map.value.rows()) {
        std::ostringstream os;
        os << "band [" << row_begin << ", " << row_end << "] outside rows 0.." << map.value.rows() - 1;
        throw Error(ErrorCode::kBandOutOfRange, os.str());
    }
    const int n = row_end - row_begin + 1;
    std::vector<CutPoint> cut;
    cut.reserve(static_cast<size_t>(map.value.cols()));
    for (int x = 0; x < map.value.cols(); ++x) {
        const double mean = map.value.col(x).segment(row_begin, n).mean();
        const double sigma = map.sigma.col(x).segment(row_begin, n).norm() / n;
        cut.push_back(CutPoint{x, mean, sigma});
    }
    return cut;
}

}  // namespace vampire
