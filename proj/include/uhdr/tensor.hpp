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
#include <cassert>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "uhdr/errors.hpp"

namespace uhdr {

/// Dense planar image: `channels` planes of `height x width`, row-major.
template <typename T>
class Tensor {
public:
    using value_type = T;

    Tensor() = default;

    Tensor(int channels, int height, int width, T fill = T{})
        : channels_(channels), height_(height), width_(width) {
        if (channels < 0 || height < 0 || width < 0) {
            throw DimensionError("negative tensor dimension");
        }
        data_.assign(static_cast<size_t>(channels) * height * width, fill);
    }

    template <typename U>
    static Tensor converted(const Tensor<U>& other) {
        Tensor out(other.channels(), other.height(), other.width());
        std::transform(other.values().begin(), other.values().end(), out.data_.begin(),
                       [](U v) { return static_cast<T>(v); });
        return out;
    }

    int channels() const { return channels_; }
    int height() const { return height_; }
    int width() const { return width_; }
    size_t plane_size() const { return static_cast<size_t>(height_) * width_; }
    size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& operator()(int c, int y, int x) {
        assert(c >= 0 && c < channels_ && y >= 0 && y < height_ && x >= 0 && x < width_);
        return data_[(static_cast<size_t>(c) * height_ + y) * width_ + x];
    }
    const T& operator()(int c, int y, int x) const {
        assert(c >= 0 && c < channels_ && y >= 0 && y < height_ && x >= 0 && x < width_);
        return data_[(static_cast<size_t>(c) * height_ + y) * width_ + x];
    }

    std::span<T> plane(int c) & { return {data_.data() + c * plane_size(), plane_size()}; }
    std::span<const T> plane(int c) const& { return {data_.data() + c * plane_size(), plane_size()}; }
    std::span<const T> plane(int c) const&& = delete;  // would dangle

    std::span<T> values() & { return data_; }
    std::span<const T> values() const& { return data_; }
    std::span<const T> values() const&& = delete;  // would dangle

    template <typename U>
    bool same_shape(const Tensor<U>& o) const {
        return channels_ == o.channels() && height_ == o.height() && width_ == o.width();
    }

    /// Copy of a single channel as a one-plane tensor.
    Tensor channel(int c) const {
        Tensor out(1, height_, width_);
        std::copy(plane(c).begin(), plane(c).end(), out.data_.begin());
        return out;
    }

    void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    int channels_ = 0;
    int height_ = 0;
    int width_ = 0;
    std::vector<T> data_;
};

template <typename A, typename B>
void require_same_shape(const Tensor<A>& a, const Tensor<B>& b, const char* what) {
    if (!a.same_shape(b)) {
        throw DimensionError(std::string(what) + ": shape mismatch (" + std::to_string(a.channels()) + "x" +
                             std::to_string(a.height()) + "x" + std::to_string(a.width()) + " vs " +
                             std::to_string(b.channels()) + "x" + std::to_string(b.height()) + "x" +
                             std::to_string(b.width()) + ")");
    }
}

/// Elementwise clamp into [lo, hi]; the one place the library clips on request.
template <typename T>
Tensor<T> clipped(Tensor<T> t, T lo = T(0), T hi = T(1)) {
    for (auto& v : t.values()) v = std::clamp(v, lo, hi);
    return t;
}

}  // namespace uhdr
