// Copyright 2026 The SwarmDP Authors
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

#ifndef SWARMDP_RANDOM_HPP
#define SWARMDP_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <string_view>

namespace swarmdp {

// splitmix64 finalizer. Used both as the generator step and to derive
// sub-stream seeds, so every draw is plain uint64 arithmetic and results
// are identical across platforms and standard libraries.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a + 0x9e3779b97f4a7c15ull * (b + 1));
}

// FNV-1a over bytes; keys noise sub-streams by item id.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t key) {
  return hash_combine(master, key);
}
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) {
  return hash_combine(master, fnv1a(tag));
}
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                 std::uint64_t key) {
  return hash_combine(hash_combine(master, fnv1a(tag)), key);
}

// Deterministic splitmix64 stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix64(state_);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform in [0, n); rejection sampling avoids modulo bias.
  std::uint64_t uniform_int(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  // ±1 with equal probability.
  int sign() { return (next_u64() >> 63) ? 1 : -1; }

  // Laplace(0, scale) by inverse CDF; exactly one next_u64 per draw.
  double laplace(double scale) {
    double u = next_double();
    if (u == 0.0) u = 0x1.0p-53;  // keep log argument positive
    const double t = u - 0.5;
    return t < 0.0 ? scale * std::log1p(2.0 * t) : -scale * std::log1p(-2.0 * t);
  }

 private:
  std::uint64_t state_;
};

}  // namespace swarmdp

#endif  // SWARMDP_RANDOM_HPP
