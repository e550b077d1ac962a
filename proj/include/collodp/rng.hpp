// Copyright 2026 The collodp Authors
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

#ifndef COLLODP_RNG_HPP_
#define COLLODP_RNG_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>

namespace collodp {

// Seedable, splittable random source (xoshiro256++ seeded through
// splitmix64). Child streams are derived from a parent seed plus a key, so
// per-document and per-token streams are independent of processing order.
// All sampling is implemented locally; outputs are reproducible across
// platforms for a given seed.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  // Stream seed this generator was constructed from.
  std::uint64_t seed() const { return seed_; }

  SplitRng child(std::uint64_t key) const {
    return SplitRng(mix(seed_, key));
  }

  SplitRng child(std::string_view key) const {
    return SplitRng(mix(seed_, fnv1a(key)));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; generates draws in pairs.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 == 0.0);
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * kPi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Exponential with rate 1.
  double exponential() {
    double u = 0.0;
    do {
      u = uniform01();
    } while (u == 0.0);
    return -std::log(u);
  }

  // Gamma(shape, 1) for integer shape >= 1, as a sum of exponentials.
  double gamma_int(std::size_t shape) {
    double sum = 0.0;
    for (std::size_t i = 0; i < shape; ++i) sum += exponential();
    return sum;
  }

  // Fills `out` with a point drawn uniformly from the unit sphere.
  void unit_sphere(std::span<double> out) {
    double norm_sq = 0.0;
    do {
      norm_sq = 0.0;
      for (double& x : out) {
        x = normal();
        norm_sq += x * x;
      }
    } while (norm_sq == 0.0);
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& x : out) x *= inv;
  }

  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  }

 private:
  static constexpr double kPi = 3.141592653589793238462643383279502884;

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a ^ rotl(b, 32);
    std::uint64_t m = splitmix64(x);
    x ^= b;
    return m ^ splitmix64(x);
  }

  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace collodp

#endif  // COLLODP_RNG_HPP_
