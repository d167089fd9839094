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

#include "qsd/rng.hpp"

namespace qsd {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xd2511f53u;
constexpr std::uint32_t kPhiloxM1 = 0xcd9e8d57u;
constexpr std::uint32_t kPhiloxW0 = 0x9e3779b9u;
constexpr std::uint32_t kPhiloxW1 = 0xbb67ae85u;

inline std::uint32_t mulhilo(std::uint32_t a, std::uint32_t b,
                             std::uint32_t* hi) {
  const std::uint64_t product =
      static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b);
  *hi = static_cast<std::uint32_t>(product >> 32);
  return static_cast<std::uint32_t>(product);
}

inline std::array<std::uint32_t, 4> round_once(
    const std::array<std::uint32_t, 4>& ctr,
    const std::array<std::uint32_t, 2>& key) {
  std::uint32_t hi0, hi1;
  const std::uint32_t lo0 = mulhilo(kPhiloxM0, ctr[0], &hi0);
  const std::uint32_t lo1 = mulhilo(kPhiloxM1, ctr[2], &hi1);
  return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    counter = round_once(counter, key);
  }
  return counter;
}

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

}  // namespace qsd
