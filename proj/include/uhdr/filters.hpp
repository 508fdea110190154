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
#include <vector>

#include "uhdr/errors.hpp"
#include "uhdr/tensor.hpp"

namespace uhdr {

/// Mirror index without repeating the edge sample (dcb|abcd|cba).
inline int reflect101(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n - 2;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - i;
}

/// Radius used by gaussian_blur: wide enough that the truncated tail mass is
/// below 1e-6.
inline int gaussian_radius(double sigma) { return static_cast<int>(std::ceil(5.0 * sigma)); }

/// Sampled, normalized Gaussian of length 2*radius+1.
inline std::vector<double> gaussian_kernel(double sigma, int radius) {
    if (!(sigma > 0.0)) throw DomainError("gaussian sigma must be positive");
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
        sum += k[i + radius];
    }
    for (double& v : k) v /= sum;
    return k;
}

/// Separable convolution of every channel with `kernel` along both axes.
template <typename T>
Tensor<T> separable_filter(const Tensor<T>& in, const std::vector<double>& kernel) {
    const int radius = static_cast<int>(kernel.size() / 2);
    const int h = in.height();
    const int w = in.width();
    Tensor<T> out(in.channels(), h, w);
    std::vector<double> row(static_cast<size_t>(h) * w);
    for (int c = 0; c < in.channels(); ++c) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double acc = 0.0;
                for (int k = -radius; k <= radius; ++k) acc += kernel[k + radius] * in(c, y, reflect101(x + k, w));
                row[static_cast<size_t>(y) * w + x] = acc;
            }
        }
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double acc = 0.0;
                for (int k = -radius; k <= radius; ++k) {
                    acc += kernel[k + radius] * row[static_cast<size_t>(reflect101(y + k, h)) * w + x];
                }
                out(c, y, x) = static_cast<T>(acc);
            }
        }
    }
    return out;
}

template <typename T>
Tensor<T> gaussian_blur(const Tensor<T>& in, double sigma) {
    return separable_filter(in, gaussian_kernel(sigma, gaussian_radius(sigma)));
}

/// Boundary feathering of a [0,1] mask; output stays in [0,1].
template <typename T>
Tensor<T> gaussian_feather(const Tensor<T>& mask, double sigma) {
    return gaussian_blur(mask, sigma);
}

/// Cross (joint) bilateral filter: spatial weights from distance, range
/// weights from differences in `guide`. With guide == in this is the plain
/// bilateral filter. `radius` < 0 selects ceil(3 * spatial_sigma).
template <typename T>
Tensor<T> bilateral_filter(const Tensor<T>& in, const Tensor<T>& guide, double spatial_sigma, double range_sigma,
                           int radius = -1) {
    if (!(spatial_sigma > 0.0) || !(range_sigma > 0.0)) throw DomainError("bilateral sigmas must be positive");
    if (guide.channels() != 1 && !guide.same_shape(in)) {
        throw DimensionError("bilateral guide must be single-channel or match the input");
    }
    if (guide.height() != in.height() || guide.width() != in.width()) {
        throw DimensionError("bilateral guide size mismatch");
    }
    if (radius < 0) radius = static_cast<int>(std::ceil(3.0 * spatial_sigma));
    const int h = in.height();
    const int w = in.width();
    const int side = 2 * radius + 1;
    std::vector<double> spatial(static_cast<size_t>(side) * side);
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            spatial[static_cast<size_t>(dy + radius) * side + dx + radius] =
                std::exp(-0.5 * (dy * dy + dx * dx) / (spatial_sigma * spatial_sigma));
    const double inv_range = 1.0 / (2.0 * range_sigma * range_sigma);

    Tensor<T> out(in.channels(), h, w);
    for (int c = 0; c < in.channels(); ++c) {
        const int gc = guide.channels() == 1 ? 0 : c;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double center = guide(gc, y, x);
                double num = 0.0;
                double den = 0.0;
                for (int dy = -radius; dy <= radius; ++dy) {
                    const int yy = reflect101(y + dy, h);
                    for (int dx = -radius; dx <= radius; ++dx) {
                        const int xx = reflect101(x + dx, w);
                        const double d = static_cast<double>(guide(gc, yy, xx)) - center;
                        const double wgt =
                            spatial[static_cast<size_t>(dy + radius) * side + dx + radius] * std::exp(-d * d * inv_range);
                        num += wgt * in(c, yy, xx);
                        den += wgt;
                    }
                }
                out(c, y, x) = static_cast<T>(num / den);
            }
        }
    }
    return out;
}

template <typename T>
Tensor<T> bilateral_filter(const Tensor<T>& in, double spatial_sigma, double range_sigma, int radius = -1) {
    return bilateral_filter(in, in, spatial_sigma, range_sigma, radius);
}

}  // namespace uhdr
