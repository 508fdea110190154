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

// 8/16-bit PNG and binary PPM output for rendered RGB. Requires libpng.

#pragma once

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "uhdr/byte_io.hpp"
#include "uhdr/errors.hpp"
#include "uhdr/isp.hpp"

namespace uhdr {

/// Interleaved RGB samples quantized to `bits` (8 or 16).
inline std::vector<uint16_t> quantize_rgb(const RgbImage& rgb, int bits) {
    if (bits != 8 && bits != 16) throw ConfigError("bit depth must be 8 or 16");
    const double maxv = bits == 8 ? 255.0 : 65535.0;
    std::vector<uint16_t> out(static_cast<size_t>(rgb.height()) * rgb.width() * 3);
    size_t i = 0;
    for (int y = 0; y < rgb.height(); ++y)
        for (int x = 0; x < rgb.width(); ++x)
            for (int c = 0; c < 3; ++c)
                out[i++] = static_cast<uint16_t>(std::lround(std::clamp<double>(rgb.planes(c, y, x), 0.0, 1.0) * maxv));
    return out;
}

inline void write_ppm(const RgbImage& rgb, const std::filesystem::path& path, int bits = 8) {
    const auto samples = quantize_rgb(rgb, bits);
    const std::string header = "P6\n" + std::to_string(rgb.width()) + " " + std::to_string(rgb.height()) + "\n" +
                               (bits == 8 ? "255" : "65535") + "\n";
    std::vector<uint8_t> bytes(header.begin(), header.end());
    for (uint16_t s : samples) {
        if (bits == 16) bytes.push_back(static_cast<uint8_t>(s >> 8));  // PPM is big-endian
        bytes.push_back(static_cast<uint8_t>(s & 0xFF));
    }
    detail::write_file_bytes(path, bytes);
}

inline void write_png(const RgbImage& rgb, const std::filesystem::path& path, int bits = 8) {
    const auto samples = quantize_rgb(rgb, bits);
    std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.string().c_str(), "wb"), &std::fclose);
    if (!fp) throw IoError("cannot create " + path.string());
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng initialization failed");
    }
    const size_t row_bytes = static_cast<size_t>(rgb.width()) * 3 * (bits / 8);
    std::vector<uint8_t> row(row_bytes);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng failed writing " + path.string());
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, rgb.width(), rgb.height(), bits, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < rgb.height(); ++y) {
        const uint16_t* src = samples.data() + static_cast<size_t>(y) * rgb.width() * 3;
        for (int i = 0; i < rgb.width() * 3; ++i) {
            if (bits == 8) {
                row[i] = static_cast<uint8_t>(src[i]);
            } else {
                row[2 * i] = static_cast<uint8_t>(src[i] >> 8);
                row[2 * i + 1] = static_cast<uint8_t>(src[i] & 0xFF);
            }
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

/// Dispatches on extension: .png or .ppm.
inline void write_image(const RgbImage& rgb, const std::filesystem::path& path, int bits = 8) {
    const auto ext = path.extension().string();
    if (ext == ".png") {
        write_png(rgb, path, bits);
    } else if (ext == ".ppm") {
        write_ppm(rgb, path, bits);
    } else {
        throw ConfigError("unsupported image extension '" + ext + "' (use .png or .ppm)");
    }
}

}  // namespace uhdr
