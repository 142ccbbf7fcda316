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

#ifndef LDP_QUADRATURE_HPP_
#define LDP_QUADRATURE_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ldp/errors.hpp"

namespace ldp {

// Geometric piece of a distribution's support. Regions of one spec are
// pairwise disjoint; the density evaluator is smooth inside each region, so
// per-region trapezoid rules converge at their nominal order.
struct SupportRegion {
  enum class Shape { box, ball };
  Shape shape = Shape::box;
  std::vector<double> lo, hi;  // box bounds (shape == box)
  std::vector<double> center;  // ball center (shape == ball)
  double radius = 0.0;         // ball radius (shape == ball)

  int dimension() const {
    return static_cast<int>(shape == Shape::box ? lo.size() : center.size());
  }
};

using ScalarField = std::function<double(std::span<const double>)>;

// Trapezoid integral of g over region ∩ [clip_lo, clip_hi] (componentwise
// box clip). Supports boxes in d <= 3 and balls in d <= 2; nodes counts
// nodes per axis (>= 2). Ball slices use the exact chord bounds, so the
// integrand only ever sees points inside the region.
double region_integral(const SupportRegion& region, const ScalarField& g,
                       std::span<const double> clip_lo, std::span<const double> clip_hi,
                       std::size_t nodes);

// Integral over the full region (no clipping).
double region_integral(const SupportRegion& region, const ScalarField& g, std::size_t nodes);

}  // namespace ldp

#endif  // LDP_QUADRATURE_HPP_
