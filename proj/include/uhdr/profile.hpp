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
#include <filesystem>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "json.hpp"
#include "uhdr/byte_io.hpp"
#include "uhdr/errors.hpp"

namespace uhdr {

using Matrix3 = std::array<std::array<double, 3>, 3>;

enum class TransferCurve { SRGB };

/// Noise-parameter distribution of a sensor, in normalized [0,1] signal units.
///   log K          ~ Uniform[log_K_min, log_K_max]
///   log read_sigma = read_slope * log K + read_intercept + Normal(0, read_scatter)
///   row_sigma      = row_sigma_ratio * read_sigma
struct NoiseProfile {
    double log_K_min = std::log(2e-4);
    double log_K_max = std::log(4e-3);
    double read_slope = 0.85;
    double read_intercept = -1.9;
    double read_scatter = 0.1;
    double row_sigma_ratio = 0.1;
    double quant_step = 1.0 / 16383.0;

    friend bool operator==(const NoiseProfile&, const NoiseProfile&) = default;
};

struct CameraProfile {
    std::string name = "identity";
    std::array<double, 3> wb_gains{1, 1, 1};
    Matrix3 ccm{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};  // camera RGB -> linear sRGB
    TransferCurve gamma = TransferCurve::SRGB;
    NoiseProfile noise;

    friend bool operator==(const CameraProfile&, const CameraProfile&) = default;
};

inline constexpr double kCcmRowSumTolerance = 1e-4;
inline constexpr double kCcmMaxCondition = 1e3;

inline Eigen::Matrix3d to_eigen(const Matrix3& m) {
    Eigen::Matrix3d e;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) e(r, c) = m[r][c];
    return e;
}

inline Matrix3 from_eigen(const Eigen::Matrix3d& e) {
    Matrix3 m{};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m[r][c] = e(r, c);
    return m;
}

/// 2-norm condition number; infinity for singular matrices.
inline double condition_number(const Matrix3& m) {
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(to_eigen(m));
    const auto& s = svd.singularValues();
    if (s(2) <= 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / s(2);
}

inline Matrix3 inverse(const Matrix3& m) { return from_eigen(to_eigen(m).inverse()); }

inline void validate(const CameraProfile& p) {
    for (double g : p.wb_gains) {
        if (!(g > 0.0) || !std::isfinite(g)) throw ProfileError("white-balance gains must be positive and finite");
    }
    for (int r = 0; r < 3; ++r) {
        const double sum = p.ccm[r][0] + p.ccm[r][1] + p.ccm[r][2];
        if (std::abs(sum - 1.0) > kCcmRowSumTolerance) {
            throw ProfileError("ccm row " + std::to_string(r) + " sums to " + std::to_string(sum) + ", expected 1");
        }
    }
    const double cond = condition_number(p.ccm);
    if (!(cond < kCcmMaxCondition)) {
        throw ProfileError("ccm is singular or ill-conditioned (condition number " + std::to_string(cond) + ")");
    }
    const auto& n = p.noise;
    if (!(n.log_K_min < n.log_K_max)) throw ProfileError("noise.log_K_min must be below noise.log_K_max");
    if (!(n.read_scatter >= 0.0)) throw ProfileError("noise.read_scatter must be non-negative");
    if (!(n.row_sigma_ratio >= 0.0)) throw ProfileError("noise.row_sigma_ratio must be non-negative");
    if (!(n.quant_step >= 0.0)) throw ProfileError("noise.quant_step must be non-negative");
}

inline nlohmann::json to_json(const CameraProfile& p) {
    nlohmann::json j;
    j["name"] = p.name;
    j["wb_gains"] = p.wb_gains;
    j["ccm"] = p.ccm;
    j["gamma"] = "srgb";
    j["noise"] = {
        {"log_K_min", p.noise.log_K_min},       {"log_K_max", p.noise.log_K_max},
        {"read_slope", p.noise.read_slope},     {"read_intercept", p.noise.read_intercept},
        {"read_scatter", p.noise.read_scatter}, {"row_sigma_ratio", p.noise.row_sigma_ratio},
        {"quant_step", p.noise.quant_step},
    };
    return j;
}

/// Builds and validates a profile from its JSON document.
inline CameraProfile profile_from_json(const nlohmann::json& j) {
    CameraProfile p;
    try {
        p.name = j.value("name", std::string("unnamed"));
        p.wb_gains = j.at("wb_gains").get<std::array<double, 3>>();
        p.ccm = j.at("ccm").get<Matrix3>();
        const auto gamma = j.value("gamma", std::string("srgb"));
        if (gamma != "srgb") throw ProfileError("unsupported gamma '" + gamma + "' (only \"srgb\")");
        const auto& n = j.at("noise");
        p.noise.log_K_min = n.at("log_K_min").get<double>();
        p.noise.log_K_max = n.at("log_K_max").get<double>();
        p.noise.read_slope = n.at("read_slope").get<double>();
        p.noise.read_intercept = n.at("read_intercept").get<double>();
        p.noise.read_scatter = n.at("read_scatter").get<double>();
        p.noise.row_sigma_ratio = n.value("row_sigma_ratio", 0.0);
        p.noise.quant_step = n.value("quant_step", 0.0);
    } catch (const nlohmann::json::exception& e) {
        throw ProfileError(std::string("malformed profile: ") + e.what());
    }
    validate(p);
    return p;
}

inline CameraProfile parse_profile(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ProfileError(std::string("profile is not valid JSON: ") + e.what());
    }
    return profile_from_json(j);
}

inline CameraProfile read_profile(const std::filesystem::path& path) {
    return parse_profile(detail::read_file_text(path));
}

inline void write_profile(const CameraProfile& p, const std::filesystem::path& path) {
    detail::write_file_text(path, to_json(p).dump(2) + "\n");
}

}  // namespace uhdr
