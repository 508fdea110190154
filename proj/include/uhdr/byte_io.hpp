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

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <type_traits>
#include <vector>

#include "uhdr/errors.hpp"

namespace uhdr::detail {

// Little-endian (de)serialization of fixed-width scalars.

template <typename T>
using uint_of = std::conditional_t<sizeof(T) == 1, uint8_t,
                std::conditional_t<sizeof(T) == 2, uint16_t,
                std::conditional_t<sizeof(T) == 4, uint32_t, uint64_t>>>;

class ByteWriter {
public:
    template <typename T>
    void put(T value) {
        static_assert(std::is_arithmetic_v<T>);
        auto bits = std::bit_cast<uint_of<T>>(value);
        for (size_t i = 0; i < sizeof(T); ++i) {
            bytes_.push_back(static_cast<uint8_t>(bits >> (8 * i)));
        }
    }

    void put_bytes(const void* data, size_t n) {
        const auto* p = static_cast<const uint8_t*>(data);
        bytes_.insert(bytes_.end(), p, p + n);
    }

    template <typename T>
    void put_array(const T* values, size_t n) {
        if constexpr (std::endian::native == std::endian::little) {
            put_bytes(values, n * sizeof(T));
        } else {
            for (size_t i = 0; i < n; ++i) put(values[i]);
        }
    }

    const std::vector<uint8_t>& bytes() const { return bytes_; }
    size_t size() const { return bytes_.size(); }

private:
    std::vector<uint8_t> bytes_;
};

class ByteReader {
public:
    ByteReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}

    size_t remaining() const { return size_ - pos_; }
    size_t position() const { return pos_; }

    template <typename T>
    T get() {
        static_assert(std::is_arithmetic_v<T>);
        require(sizeof(T));
        uint_of<T> bits = 0;
        for (size_t i = 0; i < sizeof(T); ++i) {
            bits |= static_cast<uint_of<T>>(static_cast<uint_of<T>>(data_[pos_ + i]) << (8 * i));
        }
        pos_ += sizeof(T);
        return std::bit_cast<T>(bits);
    }

    void get_bytes(void* out, size_t n) {
        require(n);
        std::memcpy(out, data_ + pos_, n);
        pos_ += n;
    }

    template <typename T>
    void get_array(T* out, size_t n) {
        if constexpr (std::endian::native == std::endian::little) {
            get_bytes(out, n * sizeof(T));
        } else {
            for (size_t i = 0; i < n; ++i) out[i] = get<T>();
        }
    }

private:
    void require(size_t n) const {
        if (n > remaining()) throw TruncatedError("unexpected end of data");
    }

    const uint8_t* data_;
    size_t size_;
    size_t pos_ = 0;
};

inline std::vector<uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed: " + path.string());
    return bytes;
}

inline void write_file_bytes(const std::filesystem::path& path, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

inline std::string read_file_text(const std::filesystem::path& path) {
    auto bytes = read_file_bytes(path);
    return std::string(bytes.begin(), bytes.end());
}

inline void write_file_text(const std::filesystem::path& path, const std::string& text) {
    write_file_bytes(path, std::vector<uint8_t>(text.begin(), text.end()));
}

}  // namespace uhdr::detail
