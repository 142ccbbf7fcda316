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

#include "ldp/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ldp {

PrivacyBudget::PrivacyBudget(double a) : alpha(a) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ParamError("PrivacyBudget: alpha must be finite and > 0");
  }
}

GridSpec::GridSpec(int dimension, double bandwidth) : d_(dimension), h_(bandwidth) {
  if (d_ < 1) throw ParamError("GridSpec: dimension must be >= 1");
  if (!(h_ > 0.0) || h_ > 1.0 || !std::isfinite(h_)) {
    throw ParamError("GridSpec: bandwidth must lie in (0, 1]");
  }
  const double side = std::ceil(1.0 / h_) + 1.0;
  if (side > 2.5e6) throw ParamError("GridSpec: bandwidth too small, index space overflows");
  side_ = static_cast<int>(side);
  // Guard G^d against size_t overflow before materializing anything dense.
  double cells = 1.0;
  for (int k = 0; k < d_; ++k) cells *= side;
  if (cells > 9.0e18) throw ParamError("GridSpec: grid index space overflows");
  cells_ = 1;
  for (int k = 0; k < d_; ++k) cells_ *= static_cast<std::size_t>(side_);
}

std::size_t GridSpec::flatten(std::span<const int> multi) const {
  if (static_cast<int>(multi.size()) != d_) throw ParamError("GridSpec::flatten: index rank mismatch");
  std::size_t flat = 0;
  for (int k = 0; k < d_; ++k) {
    if (multi[k] < 0 || multi[k] >= side_) throw ParamError("GridSpec::flatten: index out of range");
    flat = flat * static_cast<std::size_t>(side_) + static_cast<std::size_t>(multi[k]);
  }
  return flat;
}

void GridSpec::unflatten_into(std::size_t flat, std::span<int> multi) const {
  if (flat >= cells_) throw ParamError("GridSpec::unflatten: flat index out of range");
  if (static_cast<int>(multi.size()) != d_) throw ParamError("GridSpec::unflatten: index rank mismatch");
  for (int k = d_ - 1; k >= 0; --k) {
    multi[k] = static_cast<int>(flat % static_cast<std::size_t>(side_));
    flat /= static_cast<std::size_t>(side_);
  }
}

std::vector<int> GridSpec::unflatten(std::size_t flat) const {
  std::vector<int> multi(static_cast<std::size_t>(d_));
  unflatten_into(flat, multi);
  return multi;
}

std::vector<double> GridSpec::node(std::span<const int> multi) const {
  if (static_cast<int>(multi.size()) != d_) throw ParamError("GridSpec::node: index rank mismatch");
  std::vector<double> x(static_cast<std::size_t>(d_));
  for (int k = 0; k < d_; ++k) {
    if (multi[k] < 0 || multi[k] >= side_) throw ParamError("GridSpec::node: index out of range");
    x[static_cast<std::size_t>(k)] = node_coordinate(multi[k]);
  }
  return x;
}

void check_unit_cube(std::span<const double> x, int d) {
  if (static_cast<int>(x.size()) != d) {
    throw DomainError("point dimension does not match the grid dimension");
  }
  for (double v : x) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("point lies outside [0,1]^d");
  }
}

std::vector<int> index_nearest(std::span<const double> x, const GridSpec& grid) {
  check_unit_cube(x, grid.dimension());
  std::vector<int> j(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double v = x[k] / grid.bandwidth();
    // Round to nearest with the exact half tied toward the lower index:
    // ceil(v - 1/2) maps 1.5 -> 1 and 1.2 -> 1, 1.7 -> 2.
    long idx = static_cast<long>(std::ceil(v - 0.5));
    idx = std::clamp(idx, 0L, static_cast<long>(grid.side() - 1));
    j[k] = static_cast<int>(idx);
  }
  return j;
}

std::size_t index_nearest_flat(std::span<const double> x, const GridSpec& grid) {
  const std::vector<int> j = index_nearest(x, grid);
  return grid.flatten(j);
}

Window indicator_window(std::span<const double> x0, const GridSpec& grid) {
  const std::vector<int> j = index_nearest(x0, grid);
  Window w;
  w.lo.resize(x0.size());
  w.hi.resize(x0.size());
  for (std::size_t k = 0; k < x0.size(); ++k) {
    const double center = grid.node_coordinate(j[k]);
    w.lo[k] = center - grid.bandwidth();
    w.hi[k] = center + grid.bandwidth();
  }
  return w;
}

double ball_volume(int d, double r) {
  if (d < 1) throw ParamError("ball_volume: dimension must be >= 1");
  if (!(r > 0.0) || !std::isfinite(r)) throw ParamError("ball_volume: radius must be > 0");
  const double pi = 3.14159265358979323846;
  const double unit = std::pow(pi, 0.5 * d) / std::tgamma(1.0 + 0.5 * d);
  return unit * std::pow(r, d);
}

void ClassParams::validate() const {
  if (!(beta > 0.0) || beta > 1.0) throw ParamError("ClassParams: beta must lie in (0, 1]");
  if (!(gamma >= 0.0)) throw ParamError("ClassParams: gamma must be >= 0");
  if (!(C0 > 0.0)) throw ParamError("ClassParams: C0 must be > 0");
  if (!(L > 0.0)) throw ParamError("ClassParams: L must be > 0");
  if (!(c0 > 0.0)) throw ParamError("ClassParams: c0 must be > 0");
  if (!(r0 > 0.0)) throw ParamError("ClassParams: r0 must be > 0");
  if (!(mu > 0.0)) throw ParamError("ClassParams: mu must be > 0");
}

void validate_report(const PrivatizedReport& report) {
  if (report.values.size() != report.grid.cell_count()) {
    throw SizeError("report value count does not match the grid");
  }
  for (double v : report.values) {
    if (!std::isfinite(v)) throw ConfigError("report contains a non-finite value");
  }
}

}  // namespace ldp
