// Copyright 2026 The ABL Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace abl {

/**
 * Counter-based, splittable random stream.
 *
 * A stream is identified by (seed, index). Its k-th output is a pure function
 * of (seed, index, k): the SplitMix64 finaliser applied to key + (k + 1) * phi,
 * where the key is itself a mix of seed and index. Trial i of an ensemble uses
 * stream(seed, i), so results do not depend on how trials are scheduled.
 *
 * All conversions to floating point are spelled out here rather than going
 * through <random> distributions, whose algorithms are implementation-defined.
 */
class RandomStream {
   public:
    using result_type = std::uint64_t;

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static constexpr RandomStream stream(std::uint64_t seed, std::uint64_t index) noexcept {
        return RandomStream(mix(mix(seed ^ 0x6A09E667F3BCC909ULL) + mix(index + 0x3C6EF372FE94F82BULL)));
    }

    constexpr std::uint64_t next_u64() noexcept { return mix(key_ + (++counter_) * kGolden); }

    /// Uniform on [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer on [0, n); n must be positive.
    constexpr std::uint64_t below(std::uint64_t n) noexcept {
        // Lemire's multiply-shift with rejection; unbiased.
        for (;;) {
            const unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
            const auto low = static_cast<std::uint64_t>(m);
            if (low >= n || low >= (0 - n) % n) {
                return static_cast<std::uint64_t>(m >> 64);
            }
        }
    }

    constexpr bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Standard normal variate (Box-Muller; consumes two outputs).
    double normal() noexcept {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    constexpr std::uint64_t counter() const noexcept { return counter_; }

    // UniformRandomBitGenerator
    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
    constexpr result_type operator()() noexcept { return next_u64(); }

   private:
    explicit constexpr RandomStream(std::uint64_t key) noexcept : key_(key) {}

    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace abl
