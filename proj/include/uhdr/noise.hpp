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

// Physics-based noise synthesis on normalized RAW:
//
//   I_NL = (Poisson(I_L / (R K)) K + N_in) R
//   N_in = read (Gaussian) + row (Gaussian, one draw per row) + quantization (uniform)
//   I_N  = I_NL / S~
//
// K is the system gain in normalized units per electron, R the attenuation
// ratio. The expectation of I_NL is I_L and its variance is
// R K I_L + R^2 (read^2 + row^2 + quant^2 / 12).

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "json.hpp"
#include "uhdr/errors.hpp"
#include "uhdr/fusion.hpp"
#include "uhdr/profile.hpp"
#include "uhdr/random.hpp"
#include "uhdr/raw.hpp"
#include "uhdr/tensor.hpp"

namespace uhdr {

enum class NoiseModel : uint8_t {
    Physics,          // shot + read + row + quantization
    PoissonGaussian,  // shot + Gaussian read only
};

inline std::string to_string(NoiseModel m) { return m == NoiseModel::Physics ? "physics" : "pg"; }

inline NoiseModel noise_model_from_string(const std::string& s) {
    if (s == "physics") return NoiseModel::Physics;
    if (s == "pg") return NoiseModel::PoissonGaussian;
    throw ConfigError("unknown noise model '" + s + "' (expected \"physics\" or \"pg\")");
}

struct NoiseSample {
    double K = 1e-3;
    double R = 1.0;
    double read_sigma = 0.0;
    double row_sigma = 0.0;
    double quant_step = 0.0;
    uint64_t seed = 0;
    NoiseModel model = NoiseModel::Physics;
    /// Noiseless configuration: synthesize_noisy returns its input.
    bool pass_through = false;

    double total_sigma2() const { return read_sigma * read_sigma + row_sigma * row_sigma + quant_step * quant_step / 12.0; }

    friend bool operator==(const NoiseSample&, const NoiseSample&) = default;
};

inline void validate(const NoiseSample& s) {
    if (s.pass_through) return;
    if (!(s.K > 0.0)) throw DomainError("noise sample needs K > 0");
    if (!(s.R >= 1.0)) throw DomainError("noise sample needs R >= 1");
    if (!(s.read_sigma >= 0.0) || !(s.row_sigma >= 0.0) || !(s.quant_step >= 0.0)) {
        throw DomainError("noise sample sigmas must be non-negative");
    }
}

/// Draws K and the signal-independent parameters from the profile's
/// log-linear calibration law. R is left at 1; see sample_ratio.
inline NoiseSample sample_noise_params(const CameraProfile& profile, Rng& rng, NoiseModel model = NoiseModel::Physics) {
    const auto& n = profile.noise;
    NoiseSample s;
    s.model = model;
    const double log_k = uniform(rng, n.log_K_min, n.log_K_max);
    s.K = std::exp(log_k);
    double log_read = n.read_slope * log_k + n.read_intercept;
    if (n.read_scatter > 0.0) {
        // Scatter truncated at 3 sigma by rejection so every draw stays on the
        // calibrated band.
        std::normal_distribution<double> unit(0.0, 1.0);
        double z = unit(rng);
        while (std::abs(z) > 3.0) z = unit(rng);
        log_read += n.read_scatter * z;
    }
    s.read_sigma = std::exp(log_read);
    if (model == NoiseModel::Physics) {
        s.row_sigma = n.row_sigma_ratio * s.read_sigma;
        s.quant_step = n.quant_step;
    }
    return s;
}

/// Log-uniform attenuation ratio in [r_min, r_max].
inline double sample_ratio(double r_min, double r_max, Rng& rng) {
    if (!(r_min >= 1.0) || !(r_min <= r_max)) {
        throw DomainError("ratio bounds must satisfy 1 <= r_min <= r_max");
    }
    return log_uniform(rng, r_min, r_max);
}

/// Poisson(x / (R K)) K elementwise.
template <typename T>
Tensor<T> shot_noise(const Tensor<T>& x, double K, double R, Rng& rng) {
    if (!(K > 0.0) || !(R > 0.0)) throw DomainError("shot noise needs K > 0 and R > 0");
    Tensor<T> out(x.channels(), x.height(), x.width());
    const double scale = 1.0 / (R * K);
    auto in = x.values();
    auto o = out.values();
    for (size_t i = 0; i < in.size(); ++i) {
        if (!(in[i] >= T(0))) throw DomainError("shot noise expects non-negative signal");
        const double lambda = static_cast<double>(in[i]) * scale;
        if (lambda == 0.0) {
            o[i] = T(0);
            continue;
        }
        const auto electrons = std::poisson_distribution<int64_t>(lambda)(rng);
        o[i] = static_cast<T>(static_cast<double>(electrons) * K);
    }
    return out;
}

struct SignalIndependentNoise {
    Tensor<double> read;   // per pixel
    Tensor<double> row;    // one value per (channel, row), broadcast along the row
    Tensor<double> quant;  // per pixel, uniform in [-q/2, q/2)

    Tensor<double> total() const {
        Tensor<double> t = read;
        for (size_t i = 0; i < t.size(); ++i) t.values()[i] = read.values()[i] + row.values()[i] + quant.values()[i];
        return t;
    }
};

/// Draws the three components separately. Draw order per channel: all row
/// offsets, then read and quantization noise pixel by pixel.
inline SignalIndependentNoise signal_independent_components(int channels, int height, int width,
                                                            const NoiseSample& sample, Rng& rng) {
    SignalIndependentNoise n{Tensor<double>(channels, height, width), Tensor<double>(channels, height, width),
                             Tensor<double>(channels, height, width)};
    std::normal_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> centered(-0.5, 0.5);
    const bool has_row = sample.row_sigma > 0.0;
    const bool has_read = sample.read_sigma > 0.0;
    const bool has_quant = sample.quant_step > 0.0;
    for (int c = 0; c < channels; ++c) {
        if (has_row) {
            for (int y = 0; y < height; ++y) {
                const double offset = sample.row_sigma * unit(rng);
                for (int x = 0; x < width; ++x) n.row(c, y, x) = offset;
            }
        }
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                if (has_read) n.read(c, y, x) = sample.read_sigma * unit(rng);
                if (has_quant) n.quant(c, y, x) = sample.quant_step * centered(rng);
            }
        }
    }
    return n;
}

inline Tensor<double> signal_independent_noise(int channels, int height, int width, const NoiseSample& sample,
                                               Rng& rng) {
    return signal_independent_components(channels, height, width, sample, rng).total();
}

/// Returns the amplified noisy image I_NL. Negative values are preserved.
inline PackedRaw synthesize_noisy(const PackedRaw& lighted, const NoiseSample& sample, Rng& rng) {
    validate(sample);
    if (sample.pass_through) return lighted;
    const auto& x = lighted.planes;
    const auto shot = shot_noise(Tensor<double>::converted(x), sample.K, sample.R, rng);
    const auto independent = signal_independent_noise(x.channels(), x.height(), x.width(), sample, rng);
    PackedRaw out = lighted;
    auto o = out.planes.values();
    for (size_t i = 0; i < o.size(); ++i) {
        o[i] = static_cast<float>((shot.values()[i] + independent.values()[i]) * sample.R);
    }
    return out;
}

/// Exposure correction I_N = I_NL / S~ (no clipping).
inline PackedRaw apply_ratio_correction(const PackedRaw& noisy, const RatioMap& ratio) {
    require_same_shape(noisy.planes, ratio.values, "apply_ratio_correction");
    PackedRaw out = noisy;
    auto o = out.planes.values();
    const auto s = ratio.values.values();
    for (size_t i = 0; i < o.size(); ++i) {
        if (!(s[i] > 0.0f)) throw DomainError("ratio map must be strictly positive for exposure correction");
        o[i] = static_cast<float>(static_cast<double>(o[i]) / static_cast<double>(s[i]));
    }
    return out;
}

inline nlohmann::json to_json(const NoiseSample& s) {
    return {{"K", s.K},
            {"R", s.R},
            {"read_sigma", s.read_sigma},
            {"row_sigma", s.row_sigma},
            {"quant_step", s.quant_step},
            {"seed", s.seed},
            {"model", to_string(s.model)},
            {"pass_through", s.pass_through}};
}

}  // namespace uhdr
