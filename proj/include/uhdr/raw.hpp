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

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "uhdr/errors.hpp"
#include "uhdr/tensor.hpp"

namespace uhdr {

enum class BayerPattern : uint8_t { RGGB = 0, BGGR = 1, GRBG = 2, GBRG = 3 };

inline std::string_view to_string(BayerPattern p) {
    switch (p) {
        case BayerPattern::RGGB: return "RGGB";
        case BayerPattern::BGGR: return "BGGR";
        case BayerPattern::GRBG: return "GRBG";
        case BayerPattern::GBRG: return "GBRG";
    }
    return "?";
}

inline BayerPattern bayer_from_u8(uint8_t v) {
    if (v > 3) throw FormatError("unknown bayer pattern code " + std::to_string(v));
    return static_cast<BayerPattern>(v);
}

/// Packed channel order is always (R, G1, G2, B).
enum PackedChannel : int { kR = 0, kG1 = 1, kG2 = 2, kB = 3 };

struct CfaSite {
    int dy;
    int dx;
};

/// Position of each packed channel inside the 2x2 CFA tile. G1 is the first
/// green site in raster order, G2 the second.
inline std::array<CfaSite, 4> cfa_sites(BayerPattern p) {
    switch (p) {
        case BayerPattern::RGGB: return {{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
        case BayerPattern::BGGR: return {{{1, 1}, {0, 1}, {1, 0}, {0, 0}}};
        case BayerPattern::GRBG: return {{{0, 1}, {0, 0}, {1, 1}, {1, 0}}};
        case BayerPattern::GBRG: return {{{1, 0}, {0, 0}, {1, 1}, {0, 1}}};
    }
    throw FormatError("unknown bayer pattern");
}

/// Acquisition metadata carried alongside both mosaic and packed images.
/// `black_level` is indexed by packed channel (R, G1, G2, B).
struct RawMetadata {
    BayerPattern bayer = BayerPattern::RGGB;
    std::array<float, 4> black_level{0, 0, 0, 0};
    float white_level = 65535;
    float iso = 100;
    float exposure_time = 0.01f;
    /// Set by unpack when values outside [0, 1] had to be clamped.
    bool clip_warning = false;

    friend bool operator==(const RawMetadata&, const RawMetadata&) = default;
};

inline void validate_levels(const RawMetadata& m) {
    for (float b : m.black_level) {
        if (!(b < m.white_level)) {
            throw ProfileError("black level " + std::to_string(b) + " not below white level " +
                               std::to_string(m.white_level));
        }
    }
}

/// Bayer mosaic in sensor digital numbers.
struct RawImage {
    int width = 0;
    int height = 0;
    RawMetadata meta;
    std::vector<uint16_t> data;  // height x width, row-major

    RawImage() = default;
    RawImage(int w, int h, RawMetadata m, uint16_t fill = 0)
        : width(w), height(h), meta(m), data(static_cast<size_t>(w) * h, fill) {}

    uint16_t& at(int y, int x) { return data[static_cast<size_t>(y) * width + x]; }
    uint16_t at(int y, int x) const { return data[static_cast<size_t>(y) * width + x]; }

    void validate() const {
        if (width <= 0 || height <= 0 || width % 2 != 0 || height % 2 != 0) {
            throw DimensionError("mosaic dimensions must be positive and even, got " + std::to_string(width) + "x" +
                                 std::to_string(height));
        }
        if (data.size() != static_cast<size_t>(width) * height) {
            throw DimensionError("mosaic payload size does not match dimensions");
        }
        validate_levels(meta);
        for (uint16_t v : data) {
            if (v > meta.white_level) {
                throw DomainError("pixel value " + std::to_string(v) + " exceeds white level");
            }
        }
    }

    friend bool operator==(const RawImage&, const RawImage&) = default;
};

/// Half-resolution 4-plane normalized RAW. Values may exceed 1 for
/// highlight-amplified images; nothing here clips implicitly.
struct PackedRaw {
    Tensor<float> planes;  // 4 x H/2 x W/2
    RawMetadata meta;

    PackedRaw() = default;
    PackedRaw(int plane_height, int plane_width, RawMetadata m = {}, float fill = 0.0f)
        : planes(4, plane_height, plane_width, fill), meta(m) {}
    PackedRaw(Tensor<float> t, RawMetadata m) : planes(std::move(t)), meta(m) {
        if (planes.channels() != 4) throw DimensionError("packed RAW needs exactly 4 planes");
    }

    int height() const { return planes.height(); }
    int width() const { return planes.width(); }
    /// Mosaic dimensions this packed image corresponds to.
    int mosaic_height() const { return 2 * planes.height(); }
    int mosaic_width() const { return 2 * planes.width(); }

    friend bool operator==(const PackedRaw&, const PackedRaw&) = default;
};

/// Normalizes each CFA site as (DN - black) / (white - black) into its packed plane.
inline PackedRaw pack(const RawImage& raw) {
    if (raw.width % 2 != 0 || raw.height % 2 != 0 || raw.width <= 0 || raw.height <= 0) {
        throw DimensionError("cannot pack mosaic with odd or empty dimensions " + std::to_string(raw.width) + "x" +
                             std::to_string(raw.height));
    }
    validate_levels(raw.meta);
    const int ph = raw.height / 2;
    const int pw = raw.width / 2;
    PackedRaw out(ph, pw, raw.meta);
    out.meta.clip_warning = false;
    const auto sites = cfa_sites(raw.meta.bayer);
    for (int c = 0; c < 4; ++c) {
        const double black = raw.meta.black_level[c];
        const double range = raw.meta.white_level - black;
        for (int y = 0; y < ph; ++y) {
            for (int x = 0; x < pw; ++x) {
                const double dn = raw.at(2 * y + sites[c].dy, 2 * x + sites[c].dx);
                out.planes(c, y, x) = static_cast<float>((dn - black) / range);
            }
        }
    }
    return out;
}

/// Inverse of pack. Values are rounded to the nearest DN and clamped to
/// [0, white]; any clamp sets `meta.clip_warning` on the result.
inline RawImage unpack(const PackedRaw& packed, const RawMetadata& source) {
    validate_levels(source);
    RawImage out(packed.mosaic_width(), packed.mosaic_height(), source);
    out.meta.clip_warning = false;
    const auto sites = cfa_sites(source.bayer);
    for (int c = 0; c < 4; ++c) {
        const double black = source.black_level[c];
        const double range = source.white_level - black;
        for (int y = 0; y < packed.height(); ++y) {
            for (int x = 0; x < packed.width(); ++x) {
                const double v = packed.planes(c, y, x);
                if (v > 1.0 || v < 0.0 || std::isnan(v)) out.meta.clip_warning = true;
                double dn = std::nearbyint(black + (std::isnan(v) ? 0.0 : v) * range);
                dn = std::clamp(dn, 0.0, static_cast<double>(source.white_level));
                out.at(2 * y + sites[c].dy, 2 * x + sites[c].dx) = static_cast<uint16_t>(dn);
            }
        }
    }
    return out;
}

inline RawImage unpack(const PackedRaw& packed) { return unpack(packed, packed.meta); }

}  // namespace uhdr
