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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support/scenes.hpp"
#include "uhdr/filters.hpp"
#include "uhdr/highlight.hpp"

using namespace uhdr;

namespace {

int mirror(int i, int n) {
    while (i < 0 || i >= n) i = i < 0 ? -i : 2 * (n - 1) - i;
    return i;
}

// Direct 2-D Gaussian convolution, mirrored borders.
Tensor<double> gaussian_oracle(const Tensor<double>& in, double sigma, int radius) {
    Tensor<double> out(1, in.height(), in.width());
    double norm = 0.0;
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx) norm += std::exp(-(dy * dy + dx * dx) / (2 * sigma * sigma));
    for (int y = 0; y < in.height(); ++y)
        for (int x = 0; x < in.width(); ++x) {
            double acc = 0.0;
            for (int dy = -radius; dy <= radius; ++dy)
                for (int dx = -radius; dx <= radius; ++dx)
                    acc += std::exp(-(dy * dy + dx * dx) / (2 * sigma * sigma)) *
                           in(0, mirror(y + dy, in.height()), mirror(x + dx, in.width()));
            out(0, y, x) = acc / norm;
        }
    return out;
}

// Brute-force 1-D bilateral filter.
std::vector<double> bilateral_1d(const std::vector<double>& v, double ss, double sr, int radius) {
    const int n = static_cast<int>(v.size());
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        double num = 0.0, den = 0.0;
        for (int k = -radius; k <= radius; ++k) {
            const double s = v[mirror(i + k, n)];
            const double w = std::exp(-k * k / (2 * ss * ss)) * std::exp(-(s - v[i]) * (s - v[i]) / (2 * sr * sr));
            num += w * s;
            den += w;
        }
        out[i] = num / den;
    }
    return out;
}

// Sub-pixel position where a rising profile crosses `level`.
double crossing(const std::vector<double>& v, double level) {
    for (size_t i = 1; i < v.size(); ++i) {
        if (v[i - 1] < level && v[i] >= level) return (i - 1) + (level - v[i - 1]) / (v[i] - v[i - 1]);
    }
    return -1.0;
}

}  // namespace

TEST(Bilateral, ConstantPlaneIsFixedPoint) {
    Tensor<double> t(1, 12, 9, 0.37);
    const auto out = bilateral_filter(t, 2.0, 0.1);
    for (double v : out.values()) EXPECT_NEAR(v, 0.37, 1e-15);
}

TEST(Bilateral, WideRangeSigmaIsGaussianBlur) {
    const auto in = Tensor<double>::converted(uhdr::testing::random_tensor(1, 20, 24, 8));
    const double ss = 1.5;
    const int radius = 5;
    const auto out = bilateral_filter(in, ss, 1e6, radius);
    const auto ref = gaussian_oracle(in, ss, radius);
    for (size_t i = 0; i < out.size(); ++i) EXPECT_NEAR(out.values()[i], ref.values()[i], 1e-3);
}

TEST(Bilateral, StepEdgeStaysPut) {
    std::vector<double> step(40);
    for (int i = 0; i < 40; ++i) step[i] = i < 20 ? 0.1 : 0.9;
    Tensor<double> row(1, 1, 40);
    for (int i = 0; i < 40; ++i) row(0, 0, i) = step[i];
    const auto out = bilateral_filter(row, 3.0, 0.05, 9);
    const auto ref = bilateral_1d(step, 3.0, 0.05, 9);
    std::vector<double> got(40);
    for (int i = 0; i < 40; ++i) {
        got[i] = out(0, 0, i);
        EXPECT_NEAR(got[i], ref[i], 1e-12);
    }
    EXPECT_LT(std::abs(crossing(got, 0.5) - crossing(step, 0.5)), 1.0);
}

TEST(Bilateral, JointGuideSteersWeights) {
    // An edge only in the guide must stop smoothing of a flat-but-noisy input
    // across it.
    Tensor<double> in(1, 1, 20, 0.0), guide(1, 1, 20, 0.0);
    for (int i = 10; i < 20; ++i) {
        in(0, 0, i) = 1.0;
        guide(0, 0, i) = 1.0;
    }
    const auto joint = bilateral_filter(in, guide, 3.0, 0.05, 9);
    EXPECT_NEAR(joint(0, 0, 9), 0.0, 1e-6);
    EXPECT_NEAR(joint(0, 0, 10), 1.0, 1e-6);
}

TEST(Feather, OnesStayOnes) {
    Tensor<double> ones(1, 30, 30, 1.0);
    const auto out = gaussian_feather(ones, 3.0);
    for (double v : out.values()) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Feather, ImpulseIsNormalizedKernel) {
    const double sigma = 2.0;
    Tensor<double> imp(1, 41, 41, 0.0);
    imp(0, 20, 20) = 1.0;
    const auto out = gaussian_feather(imp, sigma);
    double sum = 0.0;
    for (double v : out.values()) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-6);

    // 1-D profile: value at offset 2 equals kernel(2) / kernel sum.
    Tensor<double> line(1, 1, 41, 0.0);
    line(0, 0, 20) = 1.0;
    const auto l = gaussian_feather(line, sigma);
    double ksum = 0.0;
    for (int i = -gaussian_radius(sigma); i <= gaussian_radius(sigma); ++i) ksum += std::exp(-i * i / (2 * sigma * sigma));
    EXPECT_NEAR(l(0, 0, 22), std::exp(-4.0 / (2 * sigma * sigma)) / ksum, 1e-12);
    EXPECT_NEAR(l(0, 0, 22), std::exp(-0.5) / (std::sqrt(2 * std::numbers::pi) * sigma), 1e-6);
}

TEST(Feather, StaysInUnitInterval) {
    auto mask = uhdr::testing::random_tensor(1, 25, 25, 3);
    for (auto& v : mask.values()) v = v > 0.5f ? 1.0f : 0.0f;
    const auto feathered = gaussian_feather(mask, 2.5);
    for (float v : feathered.values()) {
        EXPECT_GE(v, 0.0f);
        EXPECT_LE(v, 1.0f + 1e-6f);
    }
}

TEST(Highlight, UnitGainIsIdentity) {
    auto clean = uhdr::testing::synthetic_packed(24, 24, 1);
    HighlightSpec spec;
    spec.gain = {1.0, 1.0};
    Rng rng(3);
    EXPECT_EQ(amplify(clean, spec, rng).planes, clean.planes);
}

TEST(Highlight, ZeroPatchesIsIdentity) {
    auto clean = uhdr::testing::synthetic_packed(24, 24, 1);
    HighlightSpec spec;
    spec.n_patches = {0, 0};
    Rng rng(3);
    EXPECT_EQ(amplify(clean, spec, rng).planes, clean.planes);
}

TEST(Highlight, DiskWithoutSmoothing) {
    PackedRaw clean(16, 16, {}, 0.2f);
    HighlightPatch disk;
    disk.cy = disk.cx = 8.0;
    disk.ry = disk.rx = 4.0;
    disk.gain = 4.0;
    MaskSmoothing none{false, false};
    const auto out = composite_highlights(clean, {disk}, none);
    int inside = 0;
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) {
            const double dy = y + 0.5 - 8.0, dx = x + 0.5 - 8.0;
            const bool in = dy * dy + dx * dx <= 16.0;
            inside += in;
            for (int c = 0; c < 4; ++c) EXPECT_FLOAT_EQ(out.planes(c, y, x), in ? 0.8f : 0.2f);
        }
    EXPECT_GT(inside, 40);
}

TEST(Highlight, NeverDarkensAndIsDeterministic) {
    const auto clean = uhdr::testing::synthetic_packed(40, 48, 2);
    HighlightSpec spec;
    spec.n_patches = {2, 4};
    for (uint64_t seed = 0; seed < 5; ++seed) {
        Rng a(seed), b(seed);
        const auto out = amplify(clean, spec, a);
        EXPECT_EQ(out.planes, amplify(clean, spec, b).planes);
        for (size_t i = 0; i < out.planes.size(); ++i) EXPECT_GE(out.planes.values()[i], clean.planes.values()[i]);
    }
}

TEST(Highlight, CanExceedOne) {
    PackedRaw clean(32, 32, {}, 0.9f);
    HighlightSpec spec;
    spec.n_patches = {1, 1};
    spec.gain = {5.0, 5.0};
    Rng rng(1);
    const auto out = amplify(clean, spec, rng);
    float mx = 0.0f;
    for (float v : out.planes.values()) mx = std::max(mx, v);
    EXPECT_GT(mx, 1.0f);
}

TEST(Highlight, FeatheredMaskIsLipschitz) {
    const double feather = 4.0;
    const double bound = 1.0 / (std::sqrt(2 * std::numbers::pi) * feather) + 1e-6;
    for (uint64_t seed = 0; seed < 4; ++seed) {
        const auto clean = uhdr::testing::synthetic_packed(48, 48, seed);
        HighlightSpec spec;
        spec.n_patches = {2, 3};
        spec.feather_sigma = feather;
        Rng rng(seed);
        const auto patches = draw_patches(spec, 48, 48, rng);
        const auto layers = rasterize_patches(patches, 48, 48);
        const auto m = soft_mask(layers.mask, luminance_guide(clean), smoothing_of(spec));
        for (int y = 0; y < 48; ++y)
            for (int x = 0; x < 48; ++x) {
                if (x + 1 < 48) EXPECT_LE(std::abs(m(0, y, x + 1) - m(0, y, x)), bound);
                if (y + 1 < 48) EXPECT_LE(std::abs(m(0, y + 1, x) - m(0, y, x)), bound);
            }
    }
}

TEST(Highlight, RejectsOutOfRangeInput) {
    PackedRaw clean(4, 4, {}, 1.5f);
    Rng rng(0);
    EXPECT_THROW(amplify(clean, HighlightSpec{}, rng), DomainError);
}

TEST(Highlight, SpecValidation) {
    HighlightSpec s;
    s.gain = {0.5, 2.0};
    EXPECT_THROW(validate(s), ConfigError);
    s = {};
    s.feather_sigma = 0.0;
    EXPECT_THROW(validate(s), ConfigError);
    s = {};
    s.n_patches = {3, 1};
    EXPECT_THROW(validate(s), ConfigError);
}

TEST(Highlight, SpecJsonRoundTrip) {
    HighlightSpec s;
    s.n_patches = {2, 5};
    s.gain = {1.5, 8.0};
    s.seed = 77;
    EXPECT_EQ(highlight_spec_from_json(to_json(s)), s);
}
