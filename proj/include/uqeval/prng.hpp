// Copyright 2026 The uqeval Authors
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
#include <string_view>
#include <utility>
#include <vector>

namespace uqeval
{

/// splitmix64 finalizer. Full-avalanche, good enough to key substreams.
constexpr std::uint64_t hash_u64(std::uint64_t x)
{
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a, used to derive per-record streams from record ids.
constexpr std::uint64_t hash_str(std::string_view s)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Counter-based splittable generator (splitmix64 core).
///
/// Substreams are derived by hashing, not by advancing shared state, so any
/// (seed, record, purpose) stream can be regenerated independently of
/// generation order or thread schedule.  That is what makes the synthetic
/// generators bit-reproducible under `parallel_for`.
class Prng
{
public:
  explicit Prng(std::uint64_t seed) : state_(hash_u64(seed + kGamma)) {}

  /// Derives an independent stream keyed by `key`; this generator is unchanged.
  [[nodiscard]] Prng fork(std::uint64_t key) const
  {
    return Prng(state_ ^ hash_u64(key + 0xd1b54a32d192ed03ULL));
  }

  [[nodiscard]] Prng fork(std::uint64_t a, std::uint64_t b) const { return fork(a).fork(b); }

  std::uint64_t next_u64()
  {
    state_ += kGamma;
    return hash_u64(state_);
  }

  /// Uniform draw in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (no caching, two uniforms per draw).
  double next_gaussian()
  {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform index in [0, n). n must be nonzero.
  std::size_t next_index(std::size_t n)
  {
    return static_cast<std::size_t>(
      (static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n)) >> 64);
  }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T> & v)
  {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[next_index(i)]);
    }
  }

private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  std::uint64_t state_;
};

}  // namespace uqeval
