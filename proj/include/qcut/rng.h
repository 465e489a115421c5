// Copyright 2026 The qcut Authors
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

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

namespace qcut {

/// SplitMix64 counter-based generator.
///
/// The output sequence is fully determined by the algorithm (no dependence on
/// standard-library distribution implementations), so seeded circuits and
/// golden files are identical across platforms and compilers.
class Rng {
   public:
    explicit Rng(uint64_t seed) : state_(seed) {
    }

    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). Rejection sampling keeps it unbiased.
    uint64_t below(uint64_t n) {
        const uint64_t max = std::numeric_limits<uint64_t>::max();
        const uint64_t limit = max - max % n;
        uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) {
        return uniform() < p;
    }

   private:
    uint64_t state_;
};

/// FNV-1a over the bytes of a label; used to fold names into seed keys.
constexpr uint64_t hash_label(std::string_view label) {
    uint64_t h = 0xCBF29CE484222325ull;
    for (char c : label) {
        h ^= static_cast<uint8_t>(c);
        h *= 0x100000001B3ull;
    }
    return h;
}

/// Derives an independent stream seed from a master seed and a key path.
inline uint64_t derive_seed(uint64_t master, std::initializer_list<uint64_t> parts) {
    uint64_t h = master ^ 0x6A09E667F3BCC909ull;
    for (uint64_t p : parts) {
        Rng mix(h ^ (p * 0x9E3779B97F4A7C15ull));
        h = mix.next();
    }
    return h;
}

}  // namespace qcut
