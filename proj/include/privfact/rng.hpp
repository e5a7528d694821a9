//
// Copyright 2026 The privfact Authors
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
//

#ifndef PRIVFACT_RNG_HPP_
#define PRIVFACT_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "privfact/errors.hpp"

namespace privfact {

// splitmix64 step; used both to expand seeds and to derive substreams.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derived seed for substream `idx` of `seed`. Distinct (seed, idx) pairs give
// independent-looking streams; idx is offset so substream(s, 0) != s.
inline uint64_t substream(uint64_t seed, uint64_t idx) {
  uint64_t state = seed ^ (0x9e3779b97f4a7c15ULL * (idx + 1));
  return splitmix64(state);
}

// Deterministic random source. All distributions are hand-rolled on top of
// mt19937_64 raw output because the std distribution objects are
// implementation-defined and would break byte-identical reruns across
// platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; draws two uniforms per call.
  double gaussian() {
    double u1 = uniform();
    double u2 = uniform();
    // 1 - u1 is in (0, 1], keeping the log finite.
    double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return r * std::cos(2.0 * M_PI * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Index in [0, n) from a single uniform; n must be positive.
  int uniform_index(int n) {
    require(n > 0, ErrorCode::kDimensionMismatch, "uniform_index on empty set");
    int idx = static_cast<int>(uniform() * n);
    return idx >= n ? n - 1 : idx;
  }

  // Uniform point on the unit sphere in R^d (normalized gaussian vector).
  std::vector<double> sphere(int d) {
    require(d >= 1, ErrorCode::kDimensionMismatch, "sphere dimension");
    std::vector<double> z(d);
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (int i = 0; i < d; ++i) {
        z[i] = gaussian();
        norm2 += z[i] * z[i];
      }
    } while (norm2 == 0.0);
    double inv = 1.0 / std::sqrt(norm2);
    for (double& v : z) v *= inv;
    return z;
  }

  // Sample an index from a probability vector (linear scan; sizes are small).
  int categorical(const std::vector<double>& p) {
    double u = uniform();
    double acc = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
      acc += p[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(p.size()) - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace privfact

#endif  // PRIVFACT_RNG_HPP_
