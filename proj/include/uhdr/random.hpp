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
#include <cstdint>
#include <random>

namespace uhdr {

/// Every stochastic operation takes this engine by reference. Streams are
/// reproducible for a given seed and standard library.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer; decorrelates nearby seeds.
constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Seed of the sample at `index` under a dataset-level `seed`.
constexpr uint64_t derive_seed(uint64_t seed, uint64_t index) { return splitmix64(seed ^ index); }

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// exp(Uniform[log lo, log hi]); returns lo exactly when lo == hi.
inline double log_uniform(Rng& rng, double lo, double hi) {
    if (lo == hi) return lo;
    return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

}  // namespace uhdr
