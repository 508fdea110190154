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

// Ratio-map encoding. For each pixel the residual amplification is
//
//   r = R / S~
//
// and channel j of its encoding over the grid y_0 < ... < y_{D-1} is
//
//   EC_r[j] = exp(-(r - y_j)^2 / (2 sigma^2)) / (sqrt(2 pi) sigma r)
//
// One-hot and sinusoidal encoders share the interface as baselines.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "json.hpp"
#include "uhdr/byte_io.hpp"
#include "uhdr/errors.hpp"
#include "uhdr/fusion.hpp"
#include "uhdr/tensor.hpp"

namespace uhdr {

enum class EncoderKind : uint8_t { Gaussian = 0, OneHot = 1, Positional = 2 };

inline std::string to_string(EncoderKind k) {
    switch (k) {
        case EncoderKind::Gaussian: return "gaussian";
        case EncoderKind::OneHot: return "onehot";
        case EncoderKind::Positional: return "positional";
    }
    return "?";
}

inline EncoderKind encoder_from_string(const std::string& s) {
    if (s == "gaussian") return EncoderKind::Gaussian;
    if (s == "onehot") return EncoderKind::OneHot;
    if (s == "positional") return EncoderKind::Positional;
    throw ConfigError("unknown encoder '" + s + "'");
}

struct EncodingSpec {
    double sigma = 30.0;
    int dims = 64;
    double r_lo = 1.0;
    double r_hi = 320.0;

    /// Uniform grid with y[0] = r_lo and y[dims-1] = r_hi exactly.
    std::vector<double> grid() const {
        std::vector<double> y(dims);
        const double step = (r_hi - r_lo) / (dims - 1);
        for (int j = 0; j < dims; ++j) y[j] = r_lo + step * j;
        y.back() = r_hi;
        return y;
    }

    /// Upper bound of every Gaussian-encoded entry for r >= r_lo.
    double peak_bound() const { return 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma * r_lo); }

    friend bool operator==(const EncodingSpec&, const EncodingSpec&) = default;
};

inline void validate(const EncodingSpec& s) {
    if (!(s.sigma > 0.0)) throw ConfigError("encoding sigma must be positive");
    if (s.dims < 2) throw ConfigError("encoding needs at least 2 dims");
    if (!(s.r_lo >= 1.0) || !(s.r_lo < s.r_hi)) throw ConfigError("encoding range must satisfy 1 <= r_lo < r_hi");
}

/// r = R / S~ per pixel and per packed channel.
inline Tensor<double> pixel_ratio(const RatioMap& ratio, double R) {
    if (!(R >= 1.0)) throw DomainError("amplification ratio R must be >= 1");
    Tensor<double> r(ratio.values.channels(), ratio.values.height(), ratio.values.width());
    for (size_t i = 0; i < r.size(); ++i) {
        const double s = ratio.values.values()[i];
        if (!(s > 0.0)) throw DomainError("pixel_ratio needs a strictly positive ratio map");
        r.values()[i] = R / s;
    }
    return r;
}

/// One r per CFA tile: R divided by the mean of the four channel ratios.
inline Tensor<double> tile_ratio(const RatioMap& ratio, double R) {
    if (!(R >= 1.0)) throw DomainError("amplification ratio R must be >= 1");
    const auto& v = ratio.values;
    Tensor<double> r(1, v.height(), v.width());
    for (int y = 0; y < v.height(); ++y) {
        for (int x = 0; x < v.width(); ++x) {
            double sum = 0.0;
            for (int c = 0; c < v.channels(); ++c) sum += v(c, y, x);
            const double mean = sum / v.channels();
            if (!(mean > 0.0)) throw DomainError("tile_ratio needs a strictly positive ratio map");
            r(0, y, x) = R / mean;
        }
    }
    return r;
}

inline double gaussian_code(double r, double y, double sigma) {
    return std::exp(-(r - y) * (r - y) / (2.0 * sigma * sigma)) / (std::sqrt(2.0 * std::numbers::pi) * sigma * r);
}

template <typename Out = float, typename In>
Tensor<Out> encode_gaussian(const Tensor<In>& r, const EncodingSpec& spec) {
    validate(spec);
    if (r.channels() != 1) throw DimensionError("encode expects a single ratio plane");
    const auto y = spec.grid();
    Tensor<Out> out(spec.dims, r.height(), r.width());
    for (int py = 0; py < r.height(); ++py) {
        for (int px = 0; px < r.width(); ++px) {
            const double v = r(0, py, px);
            if (!(v > 0.0)) throw DomainError("encode needs r > 0");
            for (int j = 0; j < spec.dims; ++j) out(j, py, px) = static_cast<Out>(gaussian_code(v, y[j], spec.sigma));
        }
    }
    return out;
}

/// 1 at the grid point nearest r (lower index on ties), 0 elsewhere.
template <typename Out = float, typename In>
Tensor<Out> encode_one_hot(const Tensor<In>& r, const EncodingSpec& spec) {
    validate(spec);
    if (r.channels() != 1) throw DimensionError("encode expects a single ratio plane");
    const auto y = spec.grid();
    Tensor<Out> out(spec.dims, r.height(), r.width(), Out(0));
    for (int py = 0; py < r.height(); ++py) {
        for (int px = 0; px < r.width(); ++px) {
            const double v = r(0, py, px);
            if (!(v > 0.0)) throw DomainError("encode needs r > 0");
            int best = 0;
            for (int j = 1; j < spec.dims; ++j) {
                if (std::abs(v - y[j]) < std::abs(v - y[best])) best = j;
            }
            out(best, py, px) = Out(1);
        }
    }
    return out;
}

/// Sinusoidal code: channel 2k = sin(r w_k), 2k+1 = cos(r w_k),
/// w_k = 10000^(-2k / dims).
template <typename Out = float, typename In>
Tensor<Out> encode_positional(const Tensor<In>& r, const EncodingSpec& spec) {
    validate(spec);
    if (r.channels() != 1) throw DimensionError("encode expects a single ratio plane");
    Tensor<Out> out(spec.dims, r.height(), r.width());
    for (int py = 0; py < r.height(); ++py) {
        for (int px = 0; px < r.width(); ++px) {
            const double v = r(0, py, px);
            if (!(v > 0.0)) throw DomainError("encode needs r > 0");
            for (int j = 0; j < spec.dims; ++j) {
                const int k = j / 2;
                const double w = std::pow(10000.0, -2.0 * k / spec.dims);
                out(j, py, px) = static_cast<Out>(j % 2 == 0 ? std::sin(v * w) : std::cos(v * w));
            }
        }
    }
    return out;
}

template <typename Out = float, typename In>
Tensor<Out> encode(const Tensor<In>& r, const EncodingSpec& spec, EncoderKind kind = EncoderKind::Gaussian) {
    switch (kind) {
        case EncoderKind::Gaussian: return encode_gaussian<Out>(r, spec);
        case EncoderKind::OneHot: return encode_one_hot<Out>(r, spec);
        case EncoderKind::Positional: return encode_positional<Out>(r, spec);
    }
    throw ConfigError("unknown encoder");
}

inline nlohmann::json to_json(const EncodingSpec& s) {
    return {{"sigma", s.sigma}, {"dims", s.dims}, {"r_lo", s.r_lo}, {"r_hi", s.r_hi}};
}

inline EncodingSpec encoding_spec_from_json(const nlohmann::json& j, EncodingSpec s = {}) {
    try {
        s.sigma = j.value("sigma", s.sigma);
        s.dims = j.value("dims", s.dims);
        s.r_lo = j.value("r_lo", s.r_lo);
        s.r_hi = j.value("r_hi", s.r_hi);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed encoding spec: ") + e.what());
    }
    validate(s);
    return s;
}

// UENC container for encoded tensors, little-endian:
//
//   magic "UENC" | version u16 = 1 | encoder u8 | reserved u8 | dims u32 |
//   height u32 | width u32 | sigma f32 | r_lo f32 | r_hi f32 | ratio R f32 |
//   payload length u64 | payload (dims x height x width f32, plane-major)

inline constexpr std::array<char, 4> kUencMagic{'U', 'E', 'N', 'C'};
inline constexpr uint16_t kUencVersion = 1;
inline constexpr size_t kUencHeaderSize = 44;

struct EncodedRatio {
    Tensor<float> codes;  // dims x H x W
    EncodingSpec spec;
    EncoderKind kind = EncoderKind::Gaussian;
    float ratio = 1.0f;  // the R used for r = R / S~

    friend bool operator==(const EncodedRatio&, const EncodedRatio&) = default;
};

inline std::vector<uint8_t> encode_uenc(const EncodedRatio& e) {
    if (e.codes.channels() != e.spec.dims) throw DimensionError("encoded tensor depth does not match spec dims");
    detail::ByteWriter w;
    w.put_bytes(kUencMagic.data(), 4);
    w.put<uint16_t>(kUencVersion);
    w.put<uint8_t>(static_cast<uint8_t>(e.kind));
    w.put<uint8_t>(0);
    w.put<uint32_t>(static_cast<uint32_t>(e.spec.dims));
    w.put<uint32_t>(static_cast<uint32_t>(e.codes.height()));
    w.put<uint32_t>(static_cast<uint32_t>(e.codes.width()));
    w.put<float>(static_cast<float>(e.spec.sigma));
    w.put<float>(static_cast<float>(e.spec.r_lo));
    w.put<float>(static_cast<float>(e.spec.r_hi));
    w.put<float>(e.ratio);
    w.put<uint64_t>(e.codes.size() * 4);
    w.put_array(e.codes.values().data(), e.codes.size());
    return w.bytes();
}

inline EncodedRatio decode_uenc(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < 4) throw TruncatedError("UENC file shorter than its magic");
    if (!std::equal(kUencMagic.begin(), kUencMagic.end(), bytes.begin())) throw BadMagicError("not a UENC file");
    detail::ByteReader r(bytes.data(), bytes.size());
    char magic[4];
    r.get_bytes(magic, 4);
    const auto version = r.get<uint16_t>();
    if (version != kUencVersion) throw VersionError("unsupported UENC version " + std::to_string(version));
    const auto kind = r.get<uint8_t>();
    if (kind > 2) throw FormatError("unknown encoder code " + std::to_string(kind));
    r.get<uint8_t>();
    EncodedRatio e;
    e.kind = static_cast<EncoderKind>(kind);
    e.spec.dims = static_cast<int>(r.get<uint32_t>());
    const auto h = r.get<uint32_t>();
    const auto w = r.get<uint32_t>();
    e.spec.sigma = r.get<float>();
    e.spec.r_lo = r.get<float>();
    e.spec.r_hi = r.get<float>();
    e.ratio = r.get<float>();
    const auto payload = r.get<uint64_t>();
    const uint64_t expected = static_cast<uint64_t>(e.spec.dims) * h * w * 4;
    if (payload != expected) throw FormatError("UENC payload length does not match dimensions");
    if (r.remaining() < payload) throw TruncatedError("UENC payload truncated");
    if (r.remaining() > payload) throw FormatError("trailing bytes after UENC payload");
    e.codes = Tensor<float>(e.spec.dims, static_cast<int>(h), static_cast<int>(w));
    r.get_array(e.codes.values().data(), e.codes.size());
    return e;
}

inline void write_uenc(const EncodedRatio& e, const std::filesystem::path& path) {
    detail::write_file_bytes(path, encode_uenc(e));
}

inline EncodedRatio read_uenc(const std::filesystem::path& path) { return decode_uenc(detail::read_file_bytes(path)); }

}  // namespace uhdr
