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

// URAW container, little-endian:
//
//   offset  size  field
//        0     4  magic "URAW"
//        4     2  version (u16, = 1)
//        6     1  kind (u8: 0 = mosaic u16, 1 = packed f32)
//        7     1  bayer (u8: 0 RGGB, 1 BGGR, 2 GRBG, 3 GBRG)
//        8     4  width (u32, mosaic pixels)
//       12     4  height (u32, mosaic pixels)
//       16    16  black_level (f32 x 4, order R G1 G2 B)
//       32     4  white_level (f32)
//       36     4  iso (f32)
//       40     4  exposure_time_s (f32)
//       44     8  payload length in bytes (u64)
//       52     -  payload
//
// Mosaic payload: height x width u16, row-major.
// Packed payload: 4 x height/2 x width/2 f32, plane-major (R, G1, G2, B).

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <variant>
#include <vector>

#include "uhdr/byte_io.hpp"
#include "uhdr/errors.hpp"
#include "uhdr/raw.hpp"

namespace uhdr {

inline constexpr std::array<char, 4> kUrawMagic{'U', 'R', 'A', 'W'};
inline constexpr uint16_t kUrawVersion = 1;
inline constexpr size_t kUrawHeaderSize = 52;

enum class UrawKind : uint8_t { Mosaic = 0, Packed = 1 };

using UrawImage = std::variant<RawImage, PackedRaw>;

namespace detail {

inline void put_uraw_header(ByteWriter& w, UrawKind kind, const RawMetadata& m, uint32_t width, uint32_t height,
                            uint64_t payload) {
    w.put_bytes(kUrawMagic.data(), kUrawMagic.size());
    w.put<uint16_t>(kUrawVersion);
    w.put<uint8_t>(static_cast<uint8_t>(kind));
    w.put<uint8_t>(static_cast<uint8_t>(m.bayer));
    w.put<uint32_t>(width);
    w.put<uint32_t>(height);
    for (float b : m.black_level) w.put<float>(b);
    w.put<float>(m.white_level);
    w.put<float>(m.iso);
    w.put<float>(m.exposure_time);
    w.put<uint64_t>(payload);
}

}  // namespace detail

inline std::vector<uint8_t> encode_uraw(const RawImage& raw) {
    if (raw.width % 2 != 0 || raw.height % 2 != 0) throw DimensionError("URAW mosaic needs even dimensions");
    if (raw.data.size() != static_cast<size_t>(raw.width) * raw.height) {
        throw DimensionError("mosaic payload size does not match dimensions");
    }
    detail::ByteWriter w;
    detail::put_uraw_header(w, UrawKind::Mosaic, raw.meta, raw.width, raw.height, raw.data.size() * 2);
    w.put_array(raw.data.data(), raw.data.size());
    return w.bytes();
}

inline std::vector<uint8_t> encode_uraw(const PackedRaw& packed) {
    if (packed.planes.channels() != 4) throw DimensionError("URAW packed payload needs 4 planes");
    detail::ByteWriter w;
    detail::put_uraw_header(w, UrawKind::Packed, packed.meta, packed.mosaic_width(), packed.mosaic_height(),
                            packed.planes.size() * 4);
    w.put_array(packed.planes.values().data(), packed.planes.size());
    return w.bytes();
}

inline std::vector<uint8_t> encode_uraw(const UrawImage& image) {
    return std::visit([](const auto& im) { return encode_uraw(im); }, image);
}

/// Parses a complete URAW byte buffer. Throws BadMagicError, VersionError,
/// TruncatedError or FormatError; never returns a partial image.
inline UrawImage decode_uraw(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < 4) throw TruncatedError("URAW file shorter than its magic");
    if (!std::equal(kUrawMagic.begin(), kUrawMagic.end(), bytes.begin())) {
        throw BadMagicError("not a URAW file (bad magic)");
    }
    detail::ByteReader r(bytes.data(), bytes.size());
    std::array<char, 4> magic{};
    r.get_bytes(magic.data(), 4);
    const auto version = r.get<uint16_t>();
    if (version != kUrawVersion) {
        throw VersionError("unsupported URAW version " + std::to_string(version));
    }
    const auto kind = r.get<uint8_t>();
    RawMetadata meta;
    meta.bayer = bayer_from_u8(r.get<uint8_t>());
    const auto width = r.get<uint32_t>();
    const auto height = r.get<uint32_t>();
    for (float& b : meta.black_level) b = r.get<float>();
    meta.white_level = r.get<float>();
    meta.iso = r.get<float>();
    meta.exposure_time = r.get<float>();
    const auto payload = r.get<uint64_t>();

    if (width % 2 != 0 || height % 2 != 0) throw FormatError("URAW dimensions must be even");
    const uint64_t pixels = static_cast<uint64_t>(width) * height;
    uint64_t expected = 0;
    if (kind == static_cast<uint8_t>(UrawKind::Mosaic)) {
        expected = pixels * 2;
    } else if (kind == static_cast<uint8_t>(UrawKind::Packed)) {
        expected = pixels * 4;  // 4 planes of (w/2)(h/2) floats
    } else {
        throw FormatError("unknown URAW kind " + std::to_string(kind));
    }
    if (payload != expected) {
        throw FormatError("URAW payload length " + std::to_string(payload) + " does not match dimensions (expected " +
                          std::to_string(expected) + ")");
    }
    if (r.remaining() < payload) throw TruncatedError("URAW payload truncated");
    if (r.remaining() > payload) throw FormatError("trailing bytes after URAW payload");

    if (kind == static_cast<uint8_t>(UrawKind::Mosaic)) {
        RawImage raw(static_cast<int>(width), static_cast<int>(height), meta);
        r.get_array(raw.data.data(), raw.data.size());
        return raw;
    }
    PackedRaw packed(static_cast<int>(height / 2), static_cast<int>(width / 2), meta);
    r.get_array(packed.planes.values().data(), packed.planes.size());
    return packed;
}

inline UrawImage read_uraw(const std::filesystem::path& path) { return decode_uraw(detail::read_file_bytes(path)); }

inline void write_uraw(const UrawImage& image, const std::filesystem::path& path) {
    detail::write_file_bytes(path, encode_uraw(image));
}
inline void write_uraw(const RawImage& image, const std::filesystem::path& path) {
    detail::write_file_bytes(path, encode_uraw(image));
}
inline void write_uraw(const PackedRaw& image, const std::filesystem::path& path) {
    detail::write_file_bytes(path, encode_uraw(image));
}

/// Reads a URAW file as packed planes, packing mosaics on the way.
inline PackedRaw read_packed(const std::filesystem::path& path) {
    auto image = read_uraw(path);
    if (auto* raw = std::get_if<RawImage>(&image)) return pack(*raw);
    return std::get<PackedRaw>(std::move(image));
}

}  // namespace uhdr
