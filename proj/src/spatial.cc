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

#include "vampire/spatial.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "vampire/error.h"

namespace vampire {
namespace {

void require(bool condition, ErrorCode code, const std::string &message) {
    if (!condition) {
        throw Error(code, message);
    }
}

void require_same_grid(const BeamProfile &profile, const MaskSpec &mask) {
    if (profile.width() != mask.width() || profile.height() != mask.height()) {
        std::ostringstream os;
        os << "profile is " << profile.width() << "x" << profile.height() << " but mask is " << mask.width() << "x"
           << mask.height();
        throw Error(ErrorCode::kDimensionMismatch, os.str());
    }
}

bool in_ellipse(double x, double y, double cx, double cy, double ax, double ay) {
    const double dx = (x - cx) / ax;
    const double dy = (y - cy) / ay;
    return dx * dx + dy * dy <= 1.0;
}

// Point-in-triangle by sign of the three edge cross products.
bool in_triangle(double px, double py, double ax, double ay, double bx, double by, double cx, double cy) {
    auto cross = [](double x0, double y0, double x1, double y1, double x2, double y2) {
        return (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0);
    };
    const double d1 = cross(ax, ay, bx, by, px, py);
    const double d2 = cross(bx, by, cx, cy, px, py);
    const double d3 = cross(cx, cy, ax, ay, px, py);
    const bool negative = d1 < 0 || d2 < 0 || d3 < 0;
    const bool positive = d1 > 0 || d2 > 0 || d3 > 0;
    return !(negative && positive);
}

}  // namespace

BeamProfile BeamProfile::from_amplitudes(const PixelMap &amplitude) {
    require(amplitude.size() > 0, ErrorCode::kDegenerateShape, "profile grid is empty");
    require(amplitude.allFinite() && amplitude.minCoeff() >= 0.0, ErrorCode::kInvalidArgument,
            "profile amplitudes must be finite and non-negative");
    const double norm = amplitude.norm();
    require(norm > 0.0, ErrorCode::kDegenerateShape, "profile has no active pixels");
    return BeamProfile(amplitude / norm);
}

BeamProfile make_profile(const ProfileParams &params) {
    require(params.width >= 1 && params.height >= 1, ErrorCode::kInvalidArgument, "grid dimensions must be positive");
    const double cx = params.center_x < 0 ? 0.5 * (params.width - 1) : params.center_x;
    const double cy = params.center_y < 0 ? 0.5 * (params.height - 1) : params.center_y;
    const double ax = params.axis_x < 0 ? 0.45 * params.width : params.axis_x;
    const double ay = params.axis_y < 0 ? 0.45 * params.height : params.axis_y;
    require(ax > 0 && ay > 0, ErrorCode::kDegenerateShape, "profile axes must be positive");

    PixelMap amp = PixelMap::Zero(params.height, params.width);
    switch (params.kind) {
        case ProfileKind::kGaussian:
            for (int y = 0; y < params.height; ++y) {
                for (int x = 0; x < params.width; ++x) {
                    const double dx = (x - cx) / ax;
                    const double dy = (y - cy) / ay;
                    amp(y, x) = std::exp(-0.5 * (dx * dx + dy * dy));
                }
            }
            break;
        case ProfileKind::kUniformEllipse:
        case ProfileKind::kUniformEllipseWithRing: {
            auto inside = [&](int x, int y) {
                return x >= 0 && y >= 0 && x < params.width && y < params.height &&
                       in_ellipse(x, y, cx, cy, ax, ay);
            };
            const bool ring = params.kind == ProfileKind::kUniformEllipseWithRing;
            require(!ring || (std::isfinite(params.ring_gain) && params.ring_gain >= 0.0),
                    ErrorCode::kInvalidArgument, "ring gain must be finite and non-negative");
            for (int y = 0; y < params.height; ++y) {
                for (int x = 0; x < params.width; ++x) {
                    if (!inside(x, y)) {
                        continue;
                    }
                    const bool rim = !inside(x - 1, y) || !inside(x + 1, y) || !inside(x, y - 1) || !inside(x, y + 1);
                    amp(y, x) = (ring && rim) ? params.ring_gain : 1.0;
                }
            }
            break;
        }
    }
    if (amp.maxCoeff() <= 0.0) {
        throw Error(ErrorCode::kDegenerateShape, "profile shape covers no pixel of the grid");
    }
    return BeamProfile::from_amplitudes(amp);
}

MaskSpec MaskSpec::from_transmission(const PixelMap &transmission) {
    require(transmission.size() > 0, ErrorCode::kInvalidArgument, "mask grid is empty");
    require(transmission.allFinite() && transmission.minCoeff() >= 0.0 && transmission.maxCoeff() <= 1.0,
            ErrorCode::kInvalidArgument, "mask transmissions must lie in [0, 1]");
    return MaskSpec(transmission);
}

PixelMap MaskSpec::reflectivity() const {
    return (1.0 - transmission_.array().square()).max(0.0).sqrt().matrix();
}

PixelSet MaskSpec::active_region() const {
    return transmission_.array() < 1.0;
}

MaskSpec make_mask(MaskKind kind, double contrast, const PixelSet &region) {
    require(region.size() > 0, ErrorCode::kInvalidArgument, "mask region grid is empty");
    PixelMap t = PixelMap::Ones(region.rows(), region.cols());
    if (kind == MaskKind::kVampire) {
        require(std::isfinite(contrast) && contrast >= 0.0 && contrast <= 1.0, ErrorCode::kInvalidArgument,
                "mask contrast must lie in [0, 1]");
        const double inside = std::sqrt(1.0 - contrast * contrast);
        t = region.select(PixelMap::Constant(region.rows(), region.cols(), inside), t);
    }
    return MaskSpec::from_transmission(t);
}

PixelSet vampire_silhouette(int width, int height) {
    require(width >= 1 && height >= 1, ErrorCode::kInvalidArgument, "grid dimensions must be positive");
    PixelSet set = PixelSet::Constant(height, width, false);
    const double cx = 0.5 * (width - 1);
    const double cy = 0.5 * (height - 1);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            // Normalized coordinates: +-1 at the grid edges, v grows downwards.
            const double u = (x - cx) / (0.5 * width);
            const double v = (y - cy) / (0.5 * height);
            const double au = std::abs(u);
            bool hit = in_ellipse(u, v, 0.0, 0.05, 0.09, 0.3);  // body
            hit = hit || in_ellipse(u, v, 0.0, -0.3, 0.1, 0.13);  // head
            hit = hit || in_triangle(au, v, 0.02, -0.33, 0.11, -0.33, 0.09, -0.56);  // ears
            if (!hit && au >= 0.05 && au <= 0.65) {
                const double s = (au - 0.05) / 0.6;
                const double top = -0.2 - 0.2 * s;
                const double bottom = 0.2 - 0.25 * s - 0.12 * std::abs(std::sin(3.0 * std::numbers::pi * s));
                hit = v >= top && v <= bottom;
            }
            set(y, x) = hit;
        }
    }
    return set;
}

PixelSet rectangle_region(int width, int height, int x0, int y0, int x1, int y1) {
    require(width >= 1 && height >= 1, ErrorCode::kInvalidArgument, "grid dimensions must be positive");
    require(0 <= x0 && x0 <= x1 && x1 < width && 0 <= y0 && y0 <= y1 && y1 < height, ErrorCode::kInvalidArgument,
            "rectangle must lie inside the grid (inclusive corners)");
    PixelSet set = PixelSet::Constant(height, width, false);
    set.block(y0, x0, y1 - y0 + 1, x1 - x0 + 1).setConstant(true);
    return set;
}

ModeReduction reduce(const BeamProfile &profile, const MaskSpec &mask) {
    require_same_grid(profile, mask);
    const auto u = profile.amplitude().array();
    const auto t = mask.transmission().array();
    const PixelMap r = mask.reflectivity();
    const PixelSet active = r.array() > 0.0;

    const double c_a2 = active.select(u.square(), 0.0).sum();
    const double r_eff2 = (r.array() * u).square().sum();

    const PixelMap transmitted = (t * u).matrix();
    if (transmitted.maxCoeff() <= 0.0) {
        throw Error(ErrorCode::kDegenerateShape, "mask blocks the whole beam");
    }
    std::optional<BeamProfile> reflected;
    if (r_eff2 > 0.0) {
        reflected = BeamProfile::from_amplitudes((r.array() * u).matrix());
    }
    return {std::sqrt(c_a2), std::sqrt(r_eff2), BeamProfile::from_amplitudes(transmitted), std::move(reflected)};
}

double herald_rate(const BeamProfile &profile, const MaskSpec &mask, double nbar) {
    require(std::isfinite(nbar) && nbar >= 0.0, ErrorCode::kInvalidArgument, "nbar must be finite and >= 0");
    require_same_grid(profile, mask);
    return (mask.reflectivity().array() * profile.amplitude().array()).square().sum() * nbar;
}

PixelMap loss_profile(const BeamProfile &profile, const MaskSpec &mask, double nbar) {
    require(std::isfinite(nbar) && nbar >= 0.0, ErrorCode::kInvalidArgument, "nbar must be finite and >= 0");
    require_same_grid(profile, mask);
    return ((mask.transmission().array() * profile.amplitude().array()).square() * nbar).matrix();
}

AnalyticProfile subtracted_profile_analytic(const BeamProfile &profile, const MaskSpec &mask,
                                            const StateStats &input_stats, double nbar,
                                            double weak_coupling_threshold) {
    const double r_eff = std::sqrt(herald_rate(profile, mask, 1.0));
    return {input_stats.g2 * loss_profile(profile, mask, nbar), r_eff, r_eff > weak_coupling_threshold};
}

double SuperpixelGrid::sum(const PixelMap &map, int row, int col) const {
    const int y0 = row * superpixel;
    const int x0 = col * superpixel;
    const int h = std::min(superpixel, height - y0);
    const int w = std::min(superpixel, width - x0);
    return map.block(y0, x0, h, w).sum();
}

PixelMap SuperpixelGrid::sums(const PixelMap &map) const {
    require(map.rows() == height && map.cols() == width, ErrorCode::kDimensionMismatch,
            "map does not match the superpixel grid");
    PixelMap out(rows(), cols());
    for (int row = 0; row < rows(); ++row) {
        for (int col = 0; col < cols(); ++col) {
            out(row, col) = sum(map, row, col);
        }
    }
    return out;
}

}  // namespace vampire
