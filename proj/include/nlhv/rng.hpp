// Copyright 2026 The nlhvlab Authors
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

#ifndef NLHV_RNG_HPP
#define NLHV_RNG_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace nlhv {

// xoshiro256++ seeded through splitmix64 from (seed, stream).
//
// Every Monte Carlo task in this library is keyed by an explicit
// (seed, stream) pair, so sequences are reproducible bit for bit across
// platforms and independent of how work is divided among threads.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) {
    // Mix the stream index in with a distinct odd constant so that
    // (seed, k) and (seed + 1, 0) do not collide.
    std::uint64_t x = seed ^ (stream * 0x9e3779b97f4a7c15ULL + 0x6a09e667f3bcc909ULL);
    for (auto& word : s_) word = splitmix64(x);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with the full 53-bit mantissa. Threshold
  // comparisons against these values are exact order comparisons.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  std::uint64_t s_[4];
};

// Exact Poisson draw by counting unit-rate exponential arrivals,
// accumulated in log space. O(mean) work per draw, which is fine for the
// desk-scale rates this library deals in.
inline std::uint64_t sample_poisson(RngStream& rng, double mean) {
  if (!(mean >= 0.0)) throw std::invalid_argument("poisson mean must be nonnegative");
  if (mean == 0.0) return 0;
  double elapsed = 0.0;
  std::uint64_t count = 0;
  for (;;) {
    // uniform01() < 1, so the argument of log stays positive.
    elapsed += -std::log(1.0 - rng.uniform01());
    if (elapsed >= mean) return count;
    ++count;
  }
}

}  // namespace nlhv

#endif  // NLHV_RNG_HPP
