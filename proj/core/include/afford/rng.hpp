// Copyright 2026 afford contributors
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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

// Seeded randomness used across the toolkit. std::shuffle and the standard
// distributions are implementation-defined, so shuffling and scalar draws are
// spelled out here; identical seeds give identical streams on any platform.

namespace afford::rng {

using Engine = std::mt19937_64;

/// splitmix64 step; used to derive per-task seeds from a master seed.
inline std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Unbiased draw from [0, n) by rejection.
inline std::uint64_t bounded(Engine& eng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = eng();
  } while (x >= limit);
  return x % n;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& eng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(eng);
}

/// Standard normal via Box-Muller (one value per call; the pair's second
/// half is discarded to keep the stream position independent of usage).
inline double normal(Engine& eng) {
  double u1 = uniform01(eng);
  while (u1 <= 0.0) u1 = uniform01(eng);
  const double u2 = uniform01(eng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Fisher-Yates with the rejection draw above.
template <typename T>
void shuffle(std::vector<T>& v, Engine& eng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[bounded(eng, i)]);
  }
}

/// q distinct values from [0, k), in draw order.
inline std::vector<int> sample_without_replacement(Engine& eng, int k, int q) {
  std::vector<int> pool(k);
  for (int i = 0; i < k; ++i) pool[i] = i;
  shuffle(pool, eng);
  pool.resize(q);
  return pool;
}

}  // namespace afford::rng
