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

// Pseudo multi-exposure stack, Mertens exposure fusion in encoded RGB, and
// the clean ratio map
//
//   EV-i = clip(I_L / 2^i, 0, 1)
//   S    = I_L / (I_LF + eps_r)

#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "json.hpp"
#include "uhdr/errors.hpp"
#include "uhdr/isp.hpp"
#include "uhdr/profile.hpp"
#include "uhdr/pyramid.hpp"
#include "uhdr/raw.hpp"
#include "uhdr/tensor.hpp"

namespace uhdr {

struct FusionParams {
    int n_stops = 9;
    std::array<double, 3> exponents{1.0, 1.0, 1.0};  // contrast, saturation, well-exposedness
    double well_exposed_sigma = 0.2;
    double weight_epsilon = 1e-12;
    int levels = 0;  // 0 selects default_pyramid_levels

    friend bool operator==(const FusionParams&, const FusionParams&) = default;
};

inline constexpr double kRatioEpsilon = 1e-6;

inline void validate(const FusionParams& p) {
    if (p.n_stops < 1) throw ConfigError("n_stops must be at least 1");
    if (p.levels < 0) throw ConfigError("pyramid levels must be non-negative");
    if (!(p.well_exposed_sigma > 0.0)) throw ConfigError("well-exposedness sigma must be positive");
    for (double e : p.exponents) {
        if (!(e >= 0.0)) throw ConfigError("fusion exponents must be non-negative");
    }
}

struct ExposureStack {
    std::vector<PackedRaw> frames;  // frames[i] is EV-i
    int n_stops() const { return static_cast<int>(frames.size()); }
};

inline ExposureStack make_exposure_stack(const PackedRaw& lighted, int n_stops) {
    if (n_stops < 1) throw ConfigError("n_stops must be at least 1");
    ExposureStack stack;
    stack.frames.reserve(n_stops);
    for (int i = 0; i < n_stops; ++i) {
        PackedRaw frame = lighted;
        for (float& v : frame.planes.values()) {
            if (v < 0.0f) throw DomainError("exposure stack expects non-negative input");
            // Scaling by 2^-i is exact in binary floating point.
            v = std::min(std::ldexp(v, -i), 1.0f);
        }
        stack.frames.push_back(std::move(frame));
    }
    return stack;
}

inline double well_exposedness(double r, double g, double b, double sigma = 0.2) {
    const double inv = 1.0 / (2.0 * sigma * sigma);
    return std::exp(-(r - 0.5) * (r - 0.5) * inv) * std::exp(-(g - 0.5) * (g - 0.5) * inv) *
           std::exp(-(b - 0.5) * (b - 0.5) * inv);
}

/// Rec.601 luma, used by the contrast measure.
inline double luma(double r, double g, double b) { return 0.2989 * r + 0.5870 * g + 0.1140 * b; }

/// Mertens quality weight of one encoded frame:
/// |laplacian(luma)|^wc * std(R,G,B)^ws * well_exposedness^we + eps.
inline Tensor<double> fusion_weights(const RgbImage& frame, const std::array<double, 3>& exponents,
                                     double well_exposed_sigma = 0.2, double epsilon = 1e-12) {
    const int h = frame.height();
    const int w = frame.width();
    const auto& p = frame.planes;
    Tensor<double> gray(1, h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) gray(0, y, x) = luma(p(0, y, x), p(1, y, x), p(2, y, x));

    Tensor<double> weight(1, h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double lap = gray(0, std::clamp(y - 1, 0, h - 1), x) + gray(0, std::clamp(y + 1, 0, h - 1), x) +
                               gray(0, y, std::clamp(x - 1, 0, w - 1)) + gray(0, y, std::clamp(x + 1, 0, w - 1)) -
                               4.0 * gray(0, y, x);
            const double contrast = std::abs(lap);
            const double r = p(0, y, x), g = p(1, y, x), b = p(2, y, x);
            const double mu = (r + g + b) / 3.0;
            const double saturation = std::sqrt(((r - mu) * (r - mu) + (g - mu) * (g - mu) + (b - mu) * (b - mu)) / 3.0);
            const double exposure = well_exposedness(r, g, b, well_exposed_sigma);
            weight(0, y, x) = std::pow(contrast, exponents[0]) * std::pow(saturation, exponents[1]) *
                                  std::pow(exposure, exponents[2]) +
                              epsilon;
        }
    }
    return weight;
}

/// Divides every weight by the per-pixel sum over frames (fixed summation order).
inline void normalize_weights(std::vector<Tensor<double>>& weights) {
    if (weights.empty()) return;
    for (const auto& w : weights) require_same_shape(w, weights.front(), "normalize_weights");
    const size_t n = weights.front().size();
    for (size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (const auto& w : weights) sum += w.values()[i];
        for (auto& w : weights) w.values()[i] /= sum;
    }
}

/// Blends Laplacian pyramids of the frames with Gaussian pyramids of their
/// (normalized) weights and collapses the result, clipped to [0,1].
/// With levels == 1 this is the per-pixel weighted mean.
inline RgbImage pyramid_fuse(const std::vector<RgbImage>& frames, const std::vector<Tensor<double>>& weights,
                             int levels) {
    if (frames.empty() || frames.size() != weights.size()) {
        throw DimensionError("pyramid_fuse needs one weight plane per frame");
    }
    const int h = frames.front().height();
    const int w = frames.front().width();
    for (size_t k = 0; k < frames.size(); ++k) {
        if (frames[k].height() != h || frames[k].width() != w || frames[k].planes.channels() != 3 ||
            weights[k].channels() != 1 || weights[k].height() != h || weights[k].width() != w) {
            throw DimensionError("pyramid_fuse: frame/weight shapes differ");
        }
    }
    levels = std::clamp(levels, 1, max_pyramid_levels(h, w));

    std::vector<Tensor<double>> blended;
    for (size_t k = 0; k < frames.size(); ++k) {
        const auto lap = laplacian_pyramid(Tensor<double>::converted(frames[k].planes), levels);
        const auto gw = gaussian_pyramid(weights[k], levels);
        if (blended.empty()) {
            for (const auto& l : lap) blended.emplace_back(l.channels(), l.height(), l.width(), 0.0);
        }
        for (size_t l = 0; l < lap.size(); ++l) {
            for (int c = 0; c < 3; ++c)
                for (int y = 0; y < lap[l].height(); ++y)
                    for (int x = 0; x < lap[l].width(); ++x) blended[l](c, y, x) += gw[l](0, y, x) * lap[l](c, y, x);
        }
    }
    const auto fused = collapse_pyramid(blended);
    RgbImage out{Tensor<float>(3, h, w), frames.front().encoded};
    for (size_t i = 0; i < fused.size(); ++i) {
        out.planes.values()[i] = static_cast<float>(std::clamp(fused.values()[i], 0.0, 1.0));
    }
    return out;
}

/// Produces the fused reference I_LF from the lighted image I_L: every EV
/// frame is rendered, weighted, pyramid-fused and unprocessed back to RAW.
/// The result is clamped to [0,1]. A single stop is the identity fusion and
/// returns clip(I_L) directly.
inline PackedRaw fuse_to_raw(const PackedRaw& lighted, const CameraProfile& profile, const FusionParams& params = {}) {
    validate(params);
    if (params.n_stops == 1) {
        PackedRaw out = lighted;
        out.planes = clipped(std::move(out.planes));
        return out;
    }
    const auto stack = make_exposure_stack(lighted, params.n_stops);
    std::vector<RgbImage> rendered;
    std::vector<Tensor<double>> weights;
    for (const auto& frame : stack.frames) {
        rendered.push_back(render(frame, profile));
        weights.push_back(
            fusion_weights(rendered.back(), params.exponents, params.well_exposed_sigma, params.weight_epsilon));
    }
    normalize_weights(weights);
    const int levels = params.levels > 0 ? params.levels : default_pyramid_levels(lighted.height(), lighted.width());
    const auto fused = pyramid_fuse(rendered, weights, levels);
    auto out = unprocess(fused, profile, lighted.meta);
    out.planes = clipped(std::move(out.planes));
    return out;
}

struct RatioMap {
    Tensor<float> values;  // same shape as the packed planes

    friend bool operator==(const RatioMap&, const RatioMap&) = default;
};

/// S = I_L / (I_LF + eps), evaluated in double and rounded once.
inline RatioMap ratio_map(const PackedRaw& lighted, const PackedRaw& fused, double epsilon = kRatioEpsilon) {
    require_same_shape(lighted.planes, fused.planes, "ratio_map");
    RatioMap s{Tensor<float>(lighted.planes.channels(), lighted.height(), lighted.width())};
    const auto l = lighted.planes.values();
    const auto f = fused.planes.values();
    auto out = s.values.values();
    for (size_t i = 0; i < l.size(); ++i) {
        if (f[i] < 0.0f) throw DomainError("ratio_map expects a non-negative fused image");
        out[i] = static_cast<float>(static_cast<double>(l[i]) / (static_cast<double>(f[i]) + epsilon));
    }
    return s;
}

/// Largest |S (I_LF + eps) - I_L| over all pixels, evaluated in double.
inline double ratio_reconstruction_error(const RatioMap& s, const PackedRaw& fused, const PackedRaw& lighted,
                                         double epsilon = kRatioEpsilon) {
    require_same_shape(s.values, fused.planes, "ratio_reconstruction_error");
    require_same_shape(s.values, lighted.planes, "ratio_reconstruction_error");
    double worst = 0.0;
    for (size_t i = 0; i < s.values.size(); ++i) {
        const double rec = static_cast<double>(s.values.values()[i]) * (static_cast<double>(fused.planes.values()[i]) + epsilon);
        worst = std::max(worst, std::abs(rec - static_cast<double>(lighted.planes.values()[i])));
    }
    return worst;
}

/// Counts pixels where I_LF <= I_L yet S < 1 - 1e-6 (possible only for very
/// dark pixels, where eps dominates).
inline size_t ratio_below_one_count(const RatioMap& s, const PackedRaw& fused, const PackedRaw& lighted) {
    size_t n = 0;
    for (size_t i = 0; i < s.values.size(); ++i) {
        if (fused.planes.values()[i] <= lighted.planes.values()[i] && s.values.values()[i] < 1.0f - 1e-6f) ++n;
    }
    return n;
}

inline nlohmann::json to_json(const FusionParams& p) {
    return {{"n_stops", p.n_stops},
            {"exponents", p.exponents},
            {"well_exposed_sigma", p.well_exposed_sigma},
            {"weight_epsilon", p.weight_epsilon},
            {"levels", p.levels}};
}

inline FusionParams fusion_params_from_json(const nlohmann::json& j, FusionParams p = {}) {
    try {
        p.n_stops = j.value("n_stops", p.n_stops);
        if (j.contains("exponents")) p.exponents = j["exponents"].get<std::array<double, 3>>();
        p.well_exposed_sigma = j.value("well_exposed_sigma", p.well_exposed_sigma);
        p.weight_epsilon = j.value("weight_epsilon", p.weight_epsilon);
        p.levels = j.value("levels", p.levels);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed fusion parameters: ") + e.what());
    }
    validate(p);
    return p;
}

}  // namespace uhdr
