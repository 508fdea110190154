// Copyright (c) 2026 The uhdr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Brightness amplification: random elliptical highlight patches are turned
// into a soft mask M and a gain field g, and the lighted image is
//
//   I_L = I * (1 + M * (g - 1))
//
// M is the binary patch union, smoothed by a bilateral filter guided by the
// image luminance and then feathered with a Gaussian.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "json.hpp"
#include "uhdr/errors.hpp"
#include "uhdr/filters.hpp"
#include "uhdr/random.hpp"
#include "uhdr/raw.hpp"
#include "uhdr/tensor.hpp"

namespace uhdr {

struct IntRange {
    int lo = 0;
    int hi = 0;
    friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct RealRange {
    double lo = 0.0;
    double hi = 0.0;
    friend bool operator==(const RealRange&, const RealRange&) = default;
};

/// Parameters of the amplification operator. Radii and sigmas are in packed
/// plane pixels; `gain` is drawn log-uniformly.
struct HighlightSpec {
    IntRange n_patches{1, 3};
    RealRange patch_radius{3.0, 12.0};
    RealRange gain{2.0, 10.0};
    double bilateral_spatial_sigma = 8.0;
    double bilateral_range_sigma = 0.1;
    double feather_sigma = 12.0;
    uint64_t seed = 0;

    friend bool operator==(const HighlightSpec&, const HighlightSpec&) = default;
};

inline void validate(const HighlightSpec& s) {
    if (s.n_patches.lo < 0 || s.n_patches.lo > s.n_patches.hi) throw ConfigError("highlight n_patches range invalid");
    if (!(s.patch_radius.lo > 0.0) || s.patch_radius.lo > s.patch_radius.hi) {
        throw ConfigError("highlight patch_radius range invalid");
    }
    if (!(s.gain.lo >= 1.0) || s.gain.lo > s.gain.hi) throw ConfigError("highlight gain range must satisfy 1 <= lo <= hi");
    if (!(s.bilateral_spatial_sigma > 0.0) || !(s.bilateral_range_sigma > 0.0) || !(s.feather_sigma > 0.0)) {
        throw ConfigError("highlight sigmas must be positive");
    }
}

/// One elliptical patch. Centre and radii in plane pixels, angle in radians.
struct HighlightPatch {
    double cy = 0.0;
    double cx = 0.0;
    double ry = 1.0;
    double rx = 1.0;
    double angle = 0.0;
    double gain = 1.0;

    /// Squared normalized elliptical distance; <= 1 inside the patch.
    double distance2(double y, double x) const {
        const double dy = y - cy;
        const double dx = x - cx;
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        const double u = (c * dx + s * dy) / rx;
        const double v = (-s * dx + c * dy) / ry;
        return u * u + v * v;
    }

    friend bool operator==(const HighlightPatch&, const HighlightPatch&) = default;
};

/// Draws every random quantity of one amplification up front, in a fixed order.
inline std::vector<HighlightPatch> draw_patches(const HighlightSpec& spec, int height, int width, Rng& rng) {
    validate(spec);
    const int n = spec.n_patches.lo == spec.n_patches.hi
                      ? spec.n_patches.lo
                      : std::uniform_int_distribution<int>(spec.n_patches.lo, spec.n_patches.hi)(rng);
    auto radius = [&] {
        return spec.patch_radius.lo == spec.patch_radius.hi ? spec.patch_radius.lo
                                                            : uniform(rng, spec.patch_radius.lo, spec.patch_radius.hi);
    };
    std::vector<HighlightPatch> patches(n);
    for (auto& p : patches) {
        p.cy = uniform(rng, 0.0, height);
        p.cx = uniform(rng, 0.0, width);
        p.ry = radius();
        p.rx = radius();
        p.angle = uniform(rng, 0.0, std::numbers::pi);
        p.gain = log_uniform(rng, spec.gain.lo, spec.gain.hi);
    }
    return patches;
}

struct HighlightLayers {
    Tensor<float> mask;  // 1 x H x W, binary union of patches
    Tensor<float> gain;  // 1 x H x W, gain of the covering (or nearest) patch
};

/// Rasterizes patches at pixel centres. Where patches overlap the larger gain
/// wins; outside every patch the nearest patch (in elliptical distance)
/// supplies the gain so feathered halos inherit it.
inline HighlightLayers rasterize_patches(const std::vector<HighlightPatch>& patches, int height, int width) {
    HighlightLayers layers{Tensor<float>(1, height, width, 0.0f), Tensor<float>(1, height, width, 1.0f)};
    if (patches.empty()) return layers;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double inside_gain = 0.0;
            double nearest = std::numeric_limits<double>::infinity();
            double nearest_gain = 1.0;
            for (const auto& p : patches) {
                const double d2 = p.distance2(y + 0.5, x + 0.5);
                if (d2 <= 1.0) inside_gain = std::max(inside_gain, p.gain);
                if (d2 < nearest) {
                    nearest = d2;
                    nearest_gain = p.gain;
                }
            }
            const bool inside = inside_gain > 0.0;
            layers.mask(0, y, x) = inside ? 1.0f : 0.0f;
            layers.gain(0, y, x) = static_cast<float>(inside ? inside_gain : nearest_gain);
        }
    }
    return layers;
}

struct MaskSmoothing {
    bool bilateral = true;
    bool feather = true;
    double bilateral_spatial_sigma = 8.0;
    double bilateral_range_sigma = 0.1;
    double feather_sigma = 12.0;
};

inline MaskSmoothing smoothing_of(const HighlightSpec& s) {
    return {true, true, s.bilateral_spatial_sigma, s.bilateral_range_sigma, s.feather_sigma};
}

/// Mean of the four planes; guides the bilateral pass so highlights follow
/// image structure.
inline Tensor<float> luminance_guide(const PackedRaw& image) {
    Tensor<float> g(1, image.height(), image.width());
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x)
            g(0, y, x) = 0.25f * (image.planes(0, y, x) + image.planes(1, y, x) + image.planes(2, y, x) +
                                  image.planes(3, y, x));
    return g;
}

/// Soft mask M in [0,1] after the configured smoothing passes.
inline Tensor<float> soft_mask(const Tensor<float>& binary, const Tensor<float>& guide, const MaskSmoothing& smoothing) {
    Tensor<float> m = binary;
    if (smoothing.bilateral) {
        m = bilateral_filter(m, guide, smoothing.bilateral_spatial_sigma, smoothing.bilateral_range_sigma);
    }
    if (smoothing.feather) m = gaussian_feather(m, smoothing.feather_sigma);
    return clipped(std::move(m));
}

/// Applies I * (1 + M (g - 1)) to all four planes.
inline PackedRaw apply_highlights(const PackedRaw& clean, const Tensor<float>& mask, const Tensor<float>& gain) {
    if (mask.channels() != 1 || mask.height() != clean.height() || mask.width() != clean.width()) {
        throw DimensionError("highlight mask does not match image");
    }
    require_same_shape(mask, gain, "apply_highlights");
    PackedRaw out = clean;
    for (int c = 0; c < 4; ++c) {
        for (int y = 0; y < clean.height(); ++y) {
            for (int x = 0; x < clean.width(); ++x) {
                const double factor = 1.0 + static_cast<double>(mask(0, y, x)) * (static_cast<double>(gain(0, y, x)) - 1.0);
                out.planes(c, y, x) = static_cast<float>(clean.planes(c, y, x) * factor);
            }
        }
    }
    return out;
}

inline PackedRaw composite_highlights(const PackedRaw& clean, const std::vector<HighlightPatch>& patches,
                                      const MaskSmoothing& smoothing) {
    if (patches.empty()) return clean;
    auto layers = rasterize_patches(patches, clean.height(), clean.width());
    auto mask = soft_mask(layers.mask, luminance_guide(clean), smoothing);
    return apply_highlights(clean, mask, layers.gain);
}

/// Returns the lighted image I_L. Never darkens; values may exceed 1.
inline PackedRaw amplify(const PackedRaw& clean, const HighlightSpec& spec, Rng& rng,
                         std::vector<HighlightPatch>* drawn = nullptr) {
    validate(spec);
    for (float v : clean.planes.values()) {
        if (!(v >= 0.0f && v <= 1.0f)) throw DomainError("amplify expects clean values in [0, 1]");
    }
    auto patches = draw_patches(spec, clean.height(), clean.width(), rng);
    auto out = composite_highlights(clean, patches, smoothing_of(spec));
    if (drawn) *drawn = std::move(patches);
    return out;
}

inline nlohmann::json to_json(const HighlightSpec& s) {
    return {
        {"n_patches", {s.n_patches.lo, s.n_patches.hi}},
        {"patch_radius", {s.patch_radius.lo, s.patch_radius.hi}},
        {"gain", {s.gain.lo, s.gain.hi}},
        {"bilateral_spatial_sigma", s.bilateral_spatial_sigma},
        {"bilateral_range_sigma", s.bilateral_range_sigma},
        {"feather_sigma", s.feather_sigma},
        {"seed", s.seed},
    };
}

inline HighlightSpec highlight_spec_from_json(const nlohmann::json& j, HighlightSpec s = {}) {
    try {
        if (j.contains("n_patches")) s.n_patches = {j["n_patches"].at(0).get<int>(), j["n_patches"].at(1).get<int>()};
        if (j.contains("patch_radius")) {
            s.patch_radius = {j["patch_radius"].at(0).get<double>(), j["patch_radius"].at(1).get<double>()};
        }
        if (j.contains("gain")) s.gain = {j["gain"].at(0).get<double>(), j["gain"].at(1).get<double>()};
        s.bilateral_spatial_sigma = j.value("bilateral_spatial_sigma", s.bilateral_spatial_sigma);
        s.bilateral_range_sigma = j.value("bilateral_range_sigma", s.bilateral_range_sigma);
        s.feather_sigma = j.value("feather_sigma", s.feather_sigma);
        s.seed = j.value("seed", s.seed);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed highlight spec: ") + e.what());
    }
    validate(s);
    return s;
}

inline nlohmann::json to_json(const HighlightPatch& p) {
    return {{"cy", p.cy}, {"cx", p.cx}, {"ry", p.ry}, {"rx", p.rx}, {"angle", p.angle}, {"gain", p.gain}};
}

}  // namespace uhdr
