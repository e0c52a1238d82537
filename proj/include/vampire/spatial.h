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

#ifndef VAMPIRE_SPATIAL_H
#define VAMPIRE_SPATIAL_H

#include <optional>

#include <Eigen/Dense>

#include "vampire/fock.h"

namespace vampire {

/// Real-valued pixel map. Rows index y (height), columns index x (width).
using PixelMap = Eigen::MatrixXd;
using PixelSet = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr int kDefaultGridWidth = 64;
inline constexpr int kDefaultGridHeight = 48;
inline constexpr double kDefaultWeakCouplingThreshold = 0.2;

/// Transverse amplitude u_i of the single beam mode, normalized so that
/// sum u_i^2 = 1. Phase is uniform, so amplitudes are real and non-negative.
class BeamProfile {
   public:
    /// Normalizes `amplitude`. Throws kDegenerateShape if it is all zero and
    /// kInvalidArgument for negative or non-finite entries.
    static BeamProfile from_amplitudes(const PixelMap &amplitude);

    int width() const {
        return static_cast<int>(amplitude_.cols());
    }
    int height() const {
        return static_cast<int>(amplitude_.rows());
    }
    const PixelMap &amplitude() const {
        return amplitude_;
    }
    /// u_i^2; sums to one.
    PixelMap power() const {
        return amplitude_.array().square().matrix();
    }

   private:
    explicit BeamProfile(PixelMap amplitude) : amplitude_(std::move(amplitude)) {
    }
    PixelMap amplitude_;
};

enum class ProfileKind { kUniformEllipse, kUniformEllipseWithRing, kGaussian };

struct ProfileParams {
    ProfileKind kind = ProfileKind::kUniformEllipseWithRing;
    int width = kDefaultGridWidth;
    int height = kDefaultGridHeight;
    // Pixel-centre coordinates; negative means "centre of the grid".
    double center_x = -1.0;
    double center_y = -1.0;
    // Ellipse semi-axes or Gaussian standard deviations, in pixels; negative
    // means 0.45 of the grid extent.
    double axis_x = -1.0;
    double axis_y = -1.0;
    /// Amplitude of the one-pixel rim relative to the interior (ring kind only).
    double ring_gain = 1.5;
};

BeamProfile make_profile(const ProfileParams &params);

/// Per-pixel amplitude transmission t_i in [0, 1] of the SLM + PBS tap. The
/// reflected amplitude towards the herald detector is r_i = sqrt(1 - t_i^2).
class MaskSpec {
   public:
    static MaskSpec from_transmission(const PixelMap &transmission);

    int width() const {
        return static_cast<int>(transmission_.cols());
    }
    int height() const {
        return static_cast<int>(transmission_.rows());
    }
    const PixelMap &transmission() const {
        return transmission_;
    }
    PixelMap reflectivity() const;
    /// Pixels that reflect anything (t_i < 1).
    PixelSet active_region() const;

   private:
    explicit MaskSpec(PixelMap transmission) : transmission_(std::move(transmission)) {
    }
    PixelMap transmission_;
};

enum class MaskKind { kWhite, kVampire };

/// White: t = 1 everywhere. Vampire: r_i = contrast inside `region`, t = 1 outside.
MaskSpec make_mask(MaskKind kind, double contrast, const PixelSet &region);

/// A bat-like pixel set centred on the grid, for figure parity only.
PixelSet vampire_silhouette(int width, int height);
PixelSet rectangle_region(int width, int height, int x0, int y0, int x1, int y1);

struct ModeReduction {
    /// Amplitude fraction of the beam mode inside the reflecting region.
    double c_a;
    /// Coupling of the beam mode to the herald channel, r_eff^2 = sum r_i^2 u_i^2.
    double r_eff;
    BeamProfile transmitted_profile;
    std::optional<BeamProfile> reflected_profile;
};

ModeReduction reduce(const BeamProfile &profile, const MaskSpec &mask);

/// Mean herald-channel photon number per time mode, r_eff^2 * nbar.
double herald_rate(const BeamProfile &profile, const MaskSpec &mask, double nbar);

/// Unconditional transmitted intensity t_i^2 u_i^2 nbar.
PixelMap loss_profile(const BeamProfile &profile, const MaskSpec &mask, double nbar);

struct AnalyticProfile {
    PixelMap intensity;
    double r_eff;
    /// Raised when r_eff exceeds the weak-coupling threshold; the map is still
    /// produced but the first-order formula is no longer trustworthy.
    bool weak_coupling_violated;
};

/// Heralded intensity in the weak-coupling limit, g2 * t_i^2 u_i^2 * nbar.
AnalyticProfile subtracted_profile_analytic(const BeamProfile &profile, const MaskSpec &mask,
                                            const StateStats &input_stats, double nbar,
                                            double weak_coupling_threshold = kDefaultWeakCouplingThreshold);

/// Raster of square superpixels tiling a pixel grid; edge tiles may be partial.
struct SuperpixelGrid {
    int superpixel;
    int width;
    int height;

    int rows() const {
        return (height + superpixel - 1) / superpixel;
    }
    int cols() const {
        return (width + superpixel - 1) / superpixel;
    }
    int count() const {
        return rows() * cols();
    }
    /// Sum of `map` over the pixels of superpixel (row, col).
    double sum(const PixelMap &map, int row, int col) const;
    /// rows() x cols() map of per-superpixel sums.
    PixelMap sums(const PixelMap &map) const;
};

}  // namespace vampire

#endif  // VAMPIRE_SPATIAL_H
