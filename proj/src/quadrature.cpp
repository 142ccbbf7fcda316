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

#include "ldp/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace ldp {
namespace {

struct Interval {
  double lo = 0.0, hi = 0.0;
  bool empty() const { return !(hi > lo); }
};

Interval clip1(double lo, double hi, double clip_lo, double clip_hi) {
  return Interval{std::max(lo, clip_lo), std::min(hi, clip_hi)};
}

// 1D trapezoid over [iv.lo, iv.hi] of g with the remaining coordinates of x
// already fixed; axis selects which coordinate varies.
double trapezoid_axis(const Interval& iv, std::size_t nodes, std::vector<double>& x,
                      std::size_t axis, const std::function<double(std::vector<double>&)>& g) {
  if (iv.empty()) return 0.0;
  const double step = (iv.hi - iv.lo) / static_cast<double>(nodes - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    x[axis] = iv.lo + step * static_cast<double>(i);
    const double w = (i == 0 || i + 1 == nodes) ? 0.5 : 1.0;
    sum += w * g(x);
  }
  return sum * step;
}

double box_integral(const SupportRegion& region, const ScalarField& g,
                    std::span<const double> clip_lo, std::span<const double> clip_hi,
                    std::size_t nodes) {
  const int d = region.dimension();
  std::vector<Interval> iv(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    iv[k] = clip1(region.lo[k], region.hi[k], clip_lo[k], clip_hi[k]);
    if (iv[k].empty()) return 0.0;
  }
  std::vector<double> x(static_cast<std::size_t>(d));
  std::function<double(std::size_t)> rec = [&](std::size_t axis) -> double {
    if (axis + 1 == static_cast<std::size_t>(d)) {
      return trapezoid_axis(iv[axis], nodes, x, axis,
                            [&](std::vector<double>& p) { return g(p); });
    }
    return trapezoid_axis(iv[axis], nodes, x, axis,
                          [&](std::vector<double>&) { return rec(axis + 1); });
  };
  return rec(0);
}

double ball_integral(const SupportRegion& region, const ScalarField& g,
                     std::span<const double> clip_lo, std::span<const double> clip_hi,
                     std::size_t nodes) {
  const int d = region.dimension();
  const double r = region.radius;
  if (d == 1) {
    const Interval iv = clip1(region.center[0] - r, region.center[0] + r, clip_lo[0], clip_hi[0]);
    std::vector<double> x(1);
    return trapezoid_axis(iv, nodes, x, 0, [&](std::vector<double>& p) { return g(p); });
  }
  if (d == 2) {
    const Interval outer =
        clip1(region.center[0] - r, region.center[0] + r, clip_lo[0], clip_hi[0]);
    std::vector<double> x(2);
    return trapezoid_axis(outer, nodes, x, 0, [&](std::vector<double>& p) {
      const double dx = p[0] - region.center[0];
      const double s = std::sqrt(std::max(0.0, r * r - dx * dx));
      const Interval inner =
          clip1(region.center[1] - s, region.center[1] + s, clip_lo[1], clip_hi[1]);
      return trapezoid_axis(inner, nodes, x, 1, [&](std::vector<double>& q) { return g(q); });
    });
  }
  throw ParamError("region_integral: ball regions supported for d <= 2 only");
}

}  // namespace

double region_integral(const SupportRegion& region, const ScalarField& g,
                       std::span<const double> clip_lo, std::span<const double> clip_hi,
                       std::size_t nodes) {
  if (nodes < 2) throw ParamError("region_integral: nodes must be >= 2");
  const int d = region.dimension();
  if (static_cast<int>(clip_lo.size()) != d || static_cast<int>(clip_hi.size()) != d) {
    throw ParamError("region_integral: clip rank mismatch");
  }
  if (region.shape == SupportRegion::Shape::box) {
    if (d > 3) throw ParamError("region_integral: box regions supported for d <= 3 only");
    return box_integral(region, g, clip_lo, clip_hi, nodes);
  }
  return ball_integral(region, g, clip_lo, clip_hi, nodes);
}

double region_integral(const SupportRegion& region, const ScalarField& g, std::size_t nodes) {
  const int d = region.dimension();
  std::vector<double> lo(static_cast<std::size_t>(d));
  std::vector<double> hi(static_cast<std::size_t>(d));
  if (region.shape == SupportRegion::Shape::box) {
    lo = region.lo;
    hi = region.hi;
  } else {
    for (int k = 0; k < d; ++k) {
      lo[k] = region.center[k] - region.radius;
      hi[k] = region.center[k] + region.radius;
    }
  }
  return region_integral(region, g, lo, hi, nodes);
}

}  // namespace ldp
