// Copyright 2026 The netqalign Authors
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

namespace netqalign {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream key from a base seed and two coordinates,
/// e.g. (size, trial), so trials can run in any order.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return mix64(mix64(seed ^ mix64(a)) ^ mix64(b + 0x632be59bd9b4e019ULL));
}

/// Counter-based generator: draw k is mix64(key + k * golden). Output is a
/// pure function of (key, k) and bit-identical across platforms.
class CounterRng {
   public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    std::uint64_t next_u64() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    /// Uniform on the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal by Box-Muller.
    double normal();

   private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace netqalign
