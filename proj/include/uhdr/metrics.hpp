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

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "uhdr/errors.hpp"
#include "uhdr/filters.hpp"
#include "uhdr/tensor.hpp"

namespace uhdr {

/// Relative L1 used to train the ratio estimator:
/// mean(|S - S~| / (S + eps)).
template <typename A, typename B>
double weighted_l1(const Tensor<A>& target, const Tensor<B>& pred, double epsilon = 1e-2) {
    require_same_shape(target, pred, "weighted_l1");
    if (target.empty()) throw DimensionError("weighted_l1 of empty tensors");
    double sum = 0.0;
    for (size_t i = 0; i < target.size(); ++i) {
        const double s = target.values()[i];
        const double d = std::abs(s - static_cast<double>(pred.values()[i]));
        // Exact matches cost nothing, even at S = 0 with eps = 0.
        if (d != 0.0) sum += d / (s + epsilon);
    }
    return sum / static_cast<double>(target.size());
}

template <typename A, typename B>
double l1(const Tensor<A>& a, const Tensor<B>& b) {
    require_same_shape(a, b, "l1");
    if (a.empty()) throw DimensionError("l1 of empty tensors");
    double sum = 0.0;
    for (size_t i = 0; i < a.size(); ++i) sum += std::abs(static_cast<double>(a.values()[i]) - b.values()[i]);
    return sum / static_cast<double>(a.size());
}

template <typename A, typename B>
double mse(const Tensor<A>& a, const Tensor<B>& b) {
    require_same_shape(a, b, "mse");
    if (a.empty()) throw DimensionError("mse of empty tensors");
    double sum = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = static_cast<double>(a.values()[i]) - b.values()[i];
        sum += d * d;
    }
    return sum / static_cast<double>(a.size());
}

/// 10 log10(peak^2 / MSE); +infinity for identical inputs.
template <typename A, typename B>
double psnr(const Tensor<A>& a, const Tensor<B>& b, double peak = 1.0) {
    const double e = mse(a, b);
    if (e == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / e);
}

struct SsimParams {
    int window = 11;
    double window_sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double data_range = 1.0;
};

/// Mean SSIM over all fully contained windows of one plane.
inline double ssim_plane(const Tensor<double>& a, const Tensor<double>& b, const SsimParams& p) {
    const int h = a.height();
    const int w = a.width();
    const int n = p.window;
    const int oh = h - n + 1;
    const int ow = w - n + 1;

    const auto k1d = gaussian_kernel(p.window_sigma, n / 2);
    const double c1 = (p.k1 * p.data_range) * (p.k1 * p.data_range);
    const double c2 = (p.k2 * p.data_range) * (p.k2 * p.data_range);

    // Separable 'valid' filtering of the five moment images.
    auto filter_valid = [&](auto&& value) {
        Tensor<double> rows(1, h, ow);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < ow; ++x) {
                double acc = 0.0;
                for (int k = 0; k < n; ++k) acc += k1d[k] * value(y, x + k);
                rows(0, y, x) = acc;
            }
        Tensor<double> out(1, oh, ow);
        for (int y = 0; y < oh; ++y)
            for (int x = 0; x < ow; ++x) {
                double acc = 0.0;
                for (int k = 0; k < n; ++k) acc += k1d[k] * rows(0, y + k, x);
                out(0, y, x) = acc;
            }
        return out;
    };
    const auto mu_a = filter_valid([&](int y, int x) { return a(0, y, x); });
    const auto mu_b = filter_valid([&](int y, int x) { return b(0, y, x); });
    const auto e_aa = filter_valid([&](int y, int x) { return a(0, y, x) * a(0, y, x); });
    const auto e_bb = filter_valid([&](int y, int x) { return b(0, y, x) * b(0, y, x); });
    const auto e_ab = filter_valid([&](int y, int x) { return a(0, y, x) * b(0, y, x); });

    double sum = 0.0;
    for (size_t i = 0; i < mu_a.size(); ++i) {
        const double ma = mu_a.values()[i];
        const double mb = mu_b.values()[i];
        const double va = e_aa.values()[i] - ma * ma;
        const double vb = e_bb.values()[i] - mb * mb;
        const double cov = e_ab.values()[i] - ma * mb;
        sum += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
    }
    return sum / static_cast<double>(mu_a.size());
}

/// Gaussian-window SSIM, averaged over channels.
template <typename A, typename B>
double ssim(const Tensor<A>& a, const Tensor<B>& b, const SsimParams& p = {}) {
    require_same_shape(a, b, "ssim");
    if (p.window < 1 || p.window % 2 == 0) throw DomainError("ssim window must be odd and positive");
    if (a.height() < p.window || a.width() < p.window) {
        throw DimensionError("image smaller than the ssim window");
    }
    double sum = 0.0;
    for (int c = 0; c < a.channels(); ++c) {
        sum += ssim_plane(Tensor<double>::converted(a.channel(c)), Tensor<double>::converted(b.channel(c)), p);
    }
    return sum / a.channels();
}

struct AlignResult {
    Tensor<float> aligned;
    std::vector<double> scales;  // one global scale, or one per channel
};

/// Least-squares exposure alignment: c = <pred, ref> / <pred, pred>, applied
/// globally or per channel.
template <typename A, typename B>
AlignResult exposure_align(const Tensor<A>& pred, const Tensor<B>& ref, bool per_channel = false) {
    require_same_shape(pred, ref, "exposure_align");
    AlignResult result{Tensor<float>(pred.channels(), pred.height(), pred.width()), {}};
    auto scale_of = [&](size_t begin, size_t end) {
        double pp = 0.0;
        double pr = 0.0;
        for (size_t i = begin; i < end; ++i) {
            const double p = pred.values()[i];
            pp += p * p;
            pr += p * static_cast<double>(ref.values()[i]);
        }
        if (pp == 0.0) throw DomainError("cannot align an all-zero prediction");
        return pr / pp;
    };
    const size_t plane = pred.plane_size();
    const int groups = per_channel ? pred.channels() : 1;
    const size_t span = per_channel ? plane : pred.size();
    for (int g = 0; g < groups; ++g) {
        const double c = scale_of(g * span, (g + 1) * span);
        result.scales.push_back(c);
        for (size_t i = g * span; i < (g + 1) * span; ++i) {
            result.aligned.values()[i] = static_cast<float>(c * static_cast<double>(pred.values()[i]));
        }
    }
    return result;
}

struct MetricReport {
    double psnr = 0.0;
    double ssim = 0.0;
    double weighted_l1 = 0.0;       // eps = 1e-2
    double weighted_l1_eps0 = 0.0;  // eps = 0
    double l1 = 0.0;
    double align_scale = 1.0;
};

}  // namespace uhdr
