// Copyright 2026 The ldp-classify Authors
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

#ifndef LDP_RNG_HPP_
#define LDP_RNG_HPP_

#include <cassert>
#include <cmath>
#include <cstdint>

#include "ldp/errors.hpp"

namespace ldp {

namespace detail {

// SplitMix64 finalizer. Full-avalanche bijection on 64-bit words.
constexpr std::uint64_t Mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

}  // namespace detail

// Quantile of the centered Laplace distribution with the given scale,
// parameterized so that u = 0 maps to the median:
//
//   z = -scale * sign(u) * ln(1 - 2|u|),   u in (-1/2, 1/2).
//
// Every Laplace draw in this library goes through this one formula so that
// results are reproducible from the uniform stream alone.
inline double laplace_inverse_cdf(double u, double scale) {
  if (!(scale > 0.0)) throw ParamError("laplace_inverse_cdf: scale must be > 0");
  if (!(u > -0.5 && u < 0.5)) throw ParamError("laplace_inverse_cdf: u must lie in (-1/2, 1/2)");
  const double sign = (u > 0.0) ? 1.0 : ((u < 0.0) ? -1.0 : 0.0);
  // ln(1 - 2|u|) computed as log1p for accuracy near u = 0.
  return -scale * sign * std::log1p(-2.0 * std::fabs(u));
}

// Counter-based pseudo-random stream with hierarchical substreams.
//
// Determinism contract: the draw sequence is a pure function of the master
// seed and the substream id path. Two streams created with identical
// (seed, id...) paths produce bit-identical draws regardless of when or on
// which thread they are consumed, which is what makes replicated experiments
// reproducible under any worker count.
//
// The generator hashes (key, counter) with two SplitMix64 finalizer rounds.
// That construction has no large internal state, so deriving a fresh client
// stream costs two multiplies instead of a full engine reseed.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed)
      : key_(detail::Mix64(seed + detail::kGolden)) {}

  // Derives an independent child stream. Distinct ids give unrelated keys.
  RngStream substream(std::uint64_t id) const {
    return RngStream(detail::Mix64(key_ ^ (detail::Mix64(id + 1) + detail::kGolden)), 0);
  }

  std::uint64_t next_u64() {
    ++counter_;
    const std::uint64_t z = detail::Mix64(counter_ * detail::kGolden ^ key_);
    return detail::Mix64(z + key_);
  }

  // Uniform draw strictly inside (0, 1); 53 significant bits, never 0 or 1.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform draw strictly inside (-1/2, 1/2); never exactly 0.
  double uniform_signed_half() { return uniform01() - 0.5; }

  // Centered Laplace draw with the given scale.
  double laplace(double scale) {
    return laplace_inverse_cdf(uniform_signed_half(), scale);
  }

 private:
  RngStream(std::uint64_t key, int) : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace ldp

#endif  // LDP_RNG_HPP_
