// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Counter-based random streams.
//
// A stream is identified by a 64-bit key derived from (seed, purpose):
//
//   key = mix64(seed ^ fnv1a64(purpose))
//
// and its n-th output (n = 0, 1, ...) is
//
//   mix64(key + (n + 1) * 0x9E3779B97F4A7C15)
//
// where mix64 is the SplitMix64 finalizer. Uniform doubles take the top 53
// bits. Nothing depends on the standard library's distributions, so the event
// sequence can be reproduced from this description alone.

#ifndef AOI_RNG_H_
#define AOI_RNG_H_

#include <cstdint>
#include <string_view>

namespace aoi {

inline constexpr uint64_t Mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr uint64_t Fnv1a64(std::string_view text) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

class RngStream {
 public:
  RngStream(uint64_t seed, std::string_view purpose)
      : key_(Mix64(seed ^ Fnv1a64(purpose))) {}

  uint64_t NextU64() {
    ++counter_;
    return Mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  // Uniform in [0, 1).
  double Uniform() {
    return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound) by rejection; bound must be > 0.
  uint64_t Below(uint64_t bound) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t v;
    do {
      v = NextU64();
    } while (v >= limit);
    return v % bound;
  }

  uint64_t counter() const { return counter_; }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace aoi

#endif  // AOI_RNG_H_
