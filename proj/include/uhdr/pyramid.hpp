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

#include <algorithm>
#include <cmath>
#include <vector>

#include "uhdr/filters.hpp"
#include "uhdr/tensor.hpp"

namespace uhdr {

// Burt-Adelson pyramids with the 5-tap binomial kernel and reflect-101
// borders. Odd sizes round up: level l+1 has ceil(n/2) samples.

inline const std::vector<double>& binomial5() {
    static const std::vector<double> k{1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
    return k;
}

template <typename T>
Tensor<T> pyr_down(const Tensor<T>& in) {
    const auto blurred = separable_filter(in, binomial5());
    const int h = (in.height() + 1) / 2;
    const int w = (in.width() + 1) / 2;
    Tensor<T> out(in.channels(), h, w);
    for (int c = 0; c < in.channels(); ++c)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) out(c, y, x) = blurred(c, 2 * y, 2 * x);
    return out;
}

/// Zero-insertion upsample to (height, width) followed by the binomial filter
/// scaled by 4 to preserve mean intensity.
template <typename T>
Tensor<T> pyr_up(const Tensor<T>& in, int height, int width) {
    Tensor<T> up(in.channels(), height, width, T(0));
    for (int c = 0; c < in.channels(); ++c)
        for (int y = 0; y < in.height() && 2 * y < height; ++y)
            for (int x = 0; x < in.width() && 2 * x < width; ++x) up(c, 2 * y, 2 * x) = T(4) * in(c, y, x);
    return separable_filter(up, binomial5());
}

/// Deepest pyramid that keeps every level at least 1x1.
inline int max_pyramid_levels(int height, int width) {
    int levels = 1;
    while (height > 1 || width > 1) {
        height = (height + 1) / 2;
        width = (width + 1) / 2;
        ++levels;
    }
    return levels;
}

/// floor(log2(min(H, W) / 2)) clamped to [1, 7].
inline int default_pyramid_levels(int height, int width) {
    const double m = std::min(height, width) / 2.0;
    const int levels = m >= 1.0 ? static_cast<int>(std::floor(std::log2(m))) : 1;
    return std::clamp(levels, 1, 7);
}

template <typename T>
std::vector<Tensor<T>> gaussian_pyramid(const Tensor<T>& img, int levels) {
    levels = std::clamp(levels, 1, max_pyramid_levels(img.height(), img.width()));
    std::vector<Tensor<T>> pyr{img};
    for (int l = 1; l < levels; ++l) pyr.push_back(pyr_down(pyr.back()));
    return pyr;
}

template <typename T>
std::vector<Tensor<T>> laplacian_pyramid(const Tensor<T>& img, int levels) {
    auto pyr = gaussian_pyramid(img, levels);
    for (size_t l = 0; l + 1 < pyr.size(); ++l) {
        const auto up = pyr_up(pyr[l + 1], pyr[l].height(), pyr[l].width());
        auto lv = pyr[l].values();
        auto uv = up.values();
        for (size_t i = 0; i < lv.size(); ++i) lv[i] -= uv[i];
    }
    return pyr;
}

template <typename T>
Tensor<T> collapse_pyramid(const std::vector<Tensor<T>>& pyr) {
    Tensor<T> img = pyr.back();
    for (size_t l = pyr.size() - 1; l-- > 0;) {
        auto up = pyr_up(img, pyr[l].height(), pyr[l].width());
        auto uv = up.values();
        auto lv = pyr[l].values();
        for (size_t i = 0; i < uv.size(); ++i) uv[i] += lv[i];
        img = std::move(up);
    }
    return img;
}

}  // namespace uhdr
