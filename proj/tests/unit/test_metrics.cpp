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
#include <limits>

#include "support/scenes.hpp"
#include "uhdr/metrics.hpp"

using namespace uhdr;

namespace {

Tensor<double> four(double a, double b, double c, double d) {
    Tensor<double> t(1, 2, 2);
    t(0, 0, 0) = a;
    t(0, 0, 1) = b;
    t(0, 1, 0) = c;
    t(0, 1, 1) = d;
    return t;
}

// SSIM written straight from the definition: for each window position,
// weighted means, variances and covariance with a 2-D Gaussian window.
double ssim_direct(const Tensor<double>& a, const Tensor<double>& b) {
    const int n = 11, r = 5;
    const double sigma = 1.5, c1 = 1e-4, c2 = 9e-4;
    double w[11][11], wsum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) wsum += w[i][j] = std::exp(-((i - r) * (i - r) + (j - r) * (j - r)) / (2 * sigma * sigma));
    double total = 0.0;
    int count = 0;
    for (int ch = 0; ch < a.channels(); ++ch) {
        double plane = 0.0;
        int windows = 0;
        for (int y = 0; y + n <= a.height(); ++y)
            for (int x = 0; x + n <= a.width(); ++x) {
                double ma = 0, mb = 0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        ma += w[i][j] / wsum * a(ch, y + i, x + j);
                        mb += w[i][j] / wsum * b(ch, y + i, x + j);
                    }
                double va = 0, vb = 0, cov = 0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        const double da = a(ch, y + i, x + j) - ma, db = b(ch, y + i, x + j) - mb;
                        va += w[i][j] / wsum * da * da;
                        vb += w[i][j] / wsum * db * db;
                        cov += w[i][j] / wsum * da * db;
                    }
                plane += (2 * ma * mb + c1) * (2 * cov + c2) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
                ++windows;
            }
        total += plane / windows;
        ++count;
    }
    return total / count;
}

}  // namespace

TEST(WeightedL1, EqualIsZero) {
    const auto s = Tensor<double>::converted(uhdr::testing::random_tensor(4, 5, 5, 1, 0.1, 9.0));
    EXPECT_EQ(weighted_l1(s, s), 0.0);
    EXPECT_EQ(weighted_l1(s, s, 0.0), 0.0);
}

TEST(WeightedL1, ConstantCase) {
    Tensor<double> s(4, 3, 3, 4.0), p(4, 3, 3, 2.0);
    EXPECT_NEAR(weighted_l1(s, p, 0.01), 0.498753117206982543640897755611, 1e-15);
    EXPECT_DOUBLE_EQ(weighted_l1(s, p, 0.01), 2.0 / 4.01);
}

TEST(WeightedL1, HandComputedFourPixels) {
    const auto s = four(1.0, 2.0, 4.0, 0.5);
    const auto p = four(1.5, 2.0, 3.0, 0.25);
    EXPECT_NEAR(weighted_l1(s, p, 0.01), 0.308655535496339717586251803998, 1e-12);
    EXPECT_NEAR(weighted_l1(s, p, 0.0), 0.3125, 1e-12);
}

TEST(WeightedL1, ScaleInvariantWithoutEpsilon) {
    const auto s = Tensor<double>::converted(uhdr::testing::random_tensor(4, 6, 6, 2, 0.1, 9.0));
    const auto p = Tensor<double>::converted(uhdr::testing::random_tensor(4, 6, 6, 3, 0.1, 9.0));
    const double base = weighted_l1(s, p, 0.0);
    for (double c : {0.01, 3.0, 250.0}) {
        auto cs = s, cp = p;
        for (auto& v : cs.values()) v *= c;
        for (auto& v : cp.values()) v *= c;
        EXPECT_NEAR(weighted_l1(cs, cp, 0.0), base, 1e-12 * base);
    }
}

TEST(WeightedL1, PositiveWhenDifferent) {
    auto s = Tensor<double>(1, 4, 4, 2.0);
    auto p = s;
    p(0, 3, 1) = 2.0001;
    EXPECT_GT(weighted_l1(s, p), 0.0);
}

TEST(WeightedL1, ShapeMismatch) {
    EXPECT_THROW(weighted_l1(Tensor<double>(1, 2, 2, 1.0), Tensor<double>(1, 2, 3, 1.0)), DimensionError);
}

TEST(L1, Examples) {
    Tensor<double> a(3, 4, 4, 0.25);
    EXPECT_EQ(l1(a, a), 0.0);
    Tensor<double> b(3, 4, 4, 0.75);
    EXPECT_EQ(l1(a, b), 0.5);
}

TEST(L1, MatchesBruteForce) {
    const auto a = uhdr::testing::random_tensor(3, 9, 11, 4);
    const auto b = uhdr::testing::random_tensor(3, 9, 11, 5);
    long double sum = 0.0L;
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < 9; ++y)
            for (int x = 0; x < 11; ++x) sum += std::abs(static_cast<long double>(a(c, y, x)) - b(c, y, x));
    EXPECT_NEAR(l1(a, b), static_cast<double>(sum / (3 * 9 * 11)), 1e-12);
    EXPECT_THROW(l1(a, Tensor<float>(3, 9, 10)), DimensionError);
}

TEST(Psnr, TwentyDecibels) {
    Tensor<double> a(3, 8, 8, 0.3), b(3, 8, 8, 0.4);
    EXPECT_NEAR(psnr(a, b), 20.0, 1e-12);
    // MSE of 0.01 from a non-uniform error: half the samples off by sqrt(0.02).
    Tensor<double> c = a;
    for (size_t i = 0; i < c.size(); i += 2) c.values()[i] += std::sqrt(0.02);
    EXPECT_NEAR(psnr(a, c), 20.0, 1e-12);
}

TEST(Psnr, IdenticalIsInfinite) {
    const auto a = uhdr::testing::random_tensor(3, 4, 4, 6);
    EXPECT_EQ(psnr(a, a), std::numeric_limits<double>::infinity());
}

TEST(Psnr, Symmetric) {
    const auto a = uhdr::testing::random_tensor(3, 7, 7, 7);
    const auto b = uhdr::testing::random_tensor(3, 7, 7, 8);
    EXPECT_EQ(psnr(a, b), psnr(b, a));
    EXPECT_GE(psnr(a, b), 0.0);
}

TEST(Ssim, IdenticalIsOne) {
    const auto a = uhdr::testing::random_tensor(3, 20, 20, 9);
    EXPECT_NEAR(ssim(a, a), 1.0, 1e-12);
}

TEST(Ssim, ConstantsOnlyLuminance) {
    Tensor<double> a(1, 16, 16, 0.2), b(1, 16, 16, 0.6);
    const double c1 = 1e-4;
    const double lum = (2 * 0.2 * 0.6 + c1) / (0.04 + 0.36 + c1);
    EXPECT_NEAR(ssim(a, b), lum, 1e-9);
    EXPECT_LT(ssim(a, b), 1.0);
}

TEST(Ssim, MatchesDirectFormula) {
    const auto a = Tensor<double>::converted(uhdr::testing::random_tensor(1, 16, 16, 10));
    auto b = a;
    const auto noise = uhdr::testing::random_tensor(1, 16, 16, 11, -0.2, 0.2);
    for (size_t i = 0; i < b.size(); ++i) b.values()[i] += noise.values()[i];
    EXPECT_NEAR(ssim(a, b), ssim_direct(a, b), 1e-6);

    const auto c = Tensor<double>::converted(uhdr::testing::random_tensor(3, 16, 18, 12));
    const auto d = Tensor<double>::converted(uhdr::testing::random_tensor(3, 16, 18, 13));
    EXPECT_NEAR(ssim(c, d), ssim_direct(c, d), 1e-6);
}

TEST(Ssim, SymmetricAndBounded) {
    const auto a = uhdr::testing::random_tensor(3, 16, 16, 14);
    const auto b = uhdr::testing::random_tensor(3, 16, 16, 15);
    EXPECT_NEAR(ssim(a, b), ssim(b, a), 1e-15);
    EXPECT_LE(ssim(a, b), 1.0);
}

TEST(Ssim, TooSmallImage) {
    Tensor<double> a(1, 10, 30, 0.5);
    EXPECT_THROW(ssim(a, a), DimensionError);
}

TEST(Align, HalfScaleGivesTwo) {
    const auto ref = uhdr::testing::random_tensor(4, 6, 6, 16, 0.1, 1.0);
    auto pred = ref;
    for (auto& v : pred.values()) v *= 0.5f;
    const auto a = exposure_align(pred, ref);
    ASSERT_EQ(a.scales.size(), 1u);
    EXPECT_DOUBLE_EQ(a.scales[0], 2.0);
    EXPECT_EQ(a.aligned, ref);
}

TEST(Align, EqualGivesOne) {
    const auto ref = uhdr::testing::random_tensor(4, 6, 6, 17);
    EXPECT_DOUBLE_EQ(exposure_align(ref, ref).scales[0], 1.0);
}

TEST(Align, ClosedFormMatchesLineSearch) {
    const auto pred = uhdr::testing::random_tensor(4, 10, 10, 18, 0.0, 0.5);
    const auto ref = uhdr::testing::random_tensor(4, 10, 10, 19, 0.0, 1.0);
    auto cost = [&](double c) {
        double s = 0.0;
        for (size_t i = 0; i < pred.size(); ++i) {
            const double d = c * pred.values()[i] - ref.values()[i];
            s += d * d;
        }
        return s;
    };
    double lo = 0.0, hi = 20.0;
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        (cost(m1) < cost(m2) ? hi : lo) = cost(m1) < cost(m2) ? m2 : m1;
    }
    EXPECT_NEAR(exposure_align(pred, ref).scales[0], 0.5 * (lo + hi), 1e-6);
}

TEST(Align, Idempotent) {
    const auto pred = uhdr::testing::random_tensor(4, 8, 8, 20, 0.0, 0.3);
    const auto ref = uhdr::testing::random_tensor(4, 8, 8, 21);
    const auto once = exposure_align(pred, ref);
    EXPECT_NEAR(exposure_align(once.aligned, ref).scales[0], 1.0, 1e-6);
    const auto pd = Tensor<double>::converted(pred);
    const auto rd = Tensor<double>::converted(ref);
    const auto c = exposure_align(pd, rd).scales[0];
    auto aligned = pd;
    for (auto& v : aligned.values()) v *= c;
    EXPECT_NEAR(exposure_align(aligned, rd).scales[0], 1.0, 1e-9);
}

TEST(Align, PerChannel) {
    Tensor<float> ref(2, 3, 3, 1.0f), pred(2, 3, 3, 0.0f);
    for (auto& v : pred.plane(0)) v = 0.5f;
    for (auto& v : pred.plane(1)) v = 0.25f;
    const auto a = exposure_align(pred, ref, true);
    ASSERT_EQ(a.scales.size(), 2u);
    EXPECT_DOUBLE_EQ(a.scales[0], 2.0);
    EXPECT_DOUBLE_EQ(a.scales[1], 4.0);
    EXPECT_EQ(a.aligned, ref);
}

TEST(Align, AllZeroPredictionRejected) {
    EXPECT_THROW(exposure_align(Tensor<float>(1, 2, 2, 0.0f), Tensor<float>(1, 2, 2, 1.0f)), DomainError);
}

TEST(WeightedL1, ZeroTargetWithoutEpsilon) {
    // Matching zeros cost nothing; a miss against a zero target is infinite.
    const auto s = four(0.0, 2.0, 4.0, 1.0);
    EXPECT_EQ(weighted_l1(s, s, 0.0), 0.0);
    auto p = s;
    p(0, 1, 1) = 1.5;
    EXPECT_NEAR(weighted_l1(s, p, 0.0), 0.125, 1e-15);
    p(0, 0, 0) = 0.1;
    EXPECT_EQ(weighted_l1(s, p, 0.0), std::numeric_limits<double>::infinity());
}
