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

// Minimal half-resolution ISP. One RGB pixel per CFA tile, so render and
// unprocess are exact algebraic inverses on unclipped data:
//
//   render:    clip[0,1] -> white balance -> (R, (G1+G2)/2, B) -> ccm -> clip[0,1] -> sRGB
//   unprocess: sRGB^-1 -> ccm^-1 -> white balance^-1 -> (R, G, G, B)

#pragma once

#include <algorithm>
#include <cmath>

#include "uhdr/errors.hpp"
#include "uhdr/profile.hpp"
#include "uhdr/raw.hpp"
#include "uhdr/tensor.hpp"

namespace uhdr {

struct RgbImage {
    Tensor<float> planes;  // 3 x H x W
    bool encoded = false;  // true once the transfer curve has been applied

    int height() const { return planes.height(); }
    int width() const { return planes.width(); }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

inline double srgb_encode(double linear) {
    if (linear <= 0.0031308) return 12.92 * linear;
    return 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

inline double srgb_decode(double encoded) {
    if (encoded <= 0.04045) return encoded / 12.92;
    return std::pow((encoded + 0.055) / 1.055, 2.4);
}

inline RgbImage render(const PackedRaw& packed, const CameraProfile& profile) {
    if (packed.planes.channels() != 4) throw DimensionError("render expects 4 packed planes");
    const int h = packed.height();
    const int w = packed.width();
    const auto& m = profile.ccm;
    const auto& wb = profile.wb_gains;
    RgbImage out{Tensor<float>(3, h, w), true};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            auto in = [&](int c) { return std::clamp(static_cast<double>(packed.planes(c, y, x)), 0.0, 1.0); };
            const double cam[3] = {in(kR) * wb[0], 0.5 * (in(kG1) + in(kG2)) * wb[1], in(kB) * wb[2]};
            for (int c = 0; c < 3; ++c) {
                const double lin = m[c][0] * cam[0] + m[c][1] * cam[1] + m[c][2] * cam[2];
                out.planes(c, y, x) = static_cast<float>(srgb_encode(std::clamp(lin, 0.0, 1.0)));
            }
        }
    }
    return out;
}

/// Maps encoded RGB back to packed RAW. Never clips; G1 == G2 on output.
inline PackedRaw unprocess(const RgbImage& rgb, const CameraProfile& profile, const RawMetadata& meta = {}) {
    if (!rgb.encoded) throw DomainError("unprocess expects a transfer-encoded RGB image");
    if (rgb.planes.channels() != 3) throw DimensionError("unprocess expects 3 RGB planes");
    const auto inv = inverse(profile.ccm);
    const auto& wb = profile.wb_gains;
    PackedRaw out(rgb.height(), rgb.width(), meta);
    for (int y = 0; y < rgb.height(); ++y) {
        for (int x = 0; x < rgb.width(); ++x) {
            double lin[3];
            for (int c = 0; c < 3; ++c) lin[c] = srgb_decode(rgb.planes(c, y, x));
            double cam[3];
            for (int c = 0; c < 3; ++c) cam[c] = inv[c][0] * lin[0] + inv[c][1] * lin[1] + inv[c][2] * lin[2];
            const auto g = static_cast<float>(cam[1] / wb[1]);
            out.planes(kR, y, x) = static_cast<float>(cam[0] / wb[0]);
            out.planes(kG1, y, x) = g;
            out.planes(kG2, y, x) = g;
            out.planes(kB, y, x) = static_cast<float>(cam[2] / wb[2]);
        }
    }
    return out;
}

}  // namespace uhdr
