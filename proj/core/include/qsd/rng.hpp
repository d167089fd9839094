// Copyright 2026 The qsd Authors
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

#pragma once

// Counter-based random number generation (Philox-4x32-10). Every Monte
// Carlo trial owns a substream keyed by (seed, trial index), so batches are
// reproducible bit-for-bit regardless of how trials are scheduled across
// threads.

#include <array>
#include <cstdint>

namespace qsd {

/// One Philox-4x32 block: counter and key in, four 32-bit words out.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Stream of uniform variates for a single trial, drawn from consecutive
/// Philox blocks with the trial index baked into the counter.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial_index)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        base_{0,
              static_cast<std::uint32_t>(trial_index),
              static_cast<std::uint32_t>(trial_index >> 32),
              0x51d5c0deu} {}

  std::uint32_t next_u32() {
    if (cursor_ == 4) {
      std::array<std::uint32_t, 4> counter = base_;
      counter[0] = block_++;
      buffer_ = philox4x32(counter, key_);
      cursor_ = 0;
    }
    return buffer_[cursor_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    const std::uint64_t lo = next_u32();
    return (hi << 32) | lo;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Bernoulli draw.
  bool with_probability(double p) { return uniform() < p; }

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> base_;
  std::array<std::uint32_t, 4> buffer_{};
  std::uint32_t block_ = 0;
  int cursor_ = 4;
};

/// 64-bit mix (splitmix64 finalizer); used to derive independent batch
/// seeds from a master seed and fixed tags.
std::uint64_t mix64(std::uint64_t x);

/// Derivation of a per-cell seed from the master seed and two tags.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag_a,
                                 std::uint64_t tag_b) {
  return mix64(master ^ mix64(tag_a + 0x9e3779b97f4a7c15ull) ^
               mix64(tag_b + 0xbf58476d1ce4e5b9ull));
}

}  // namespace qsd
