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

#include "ldp/audit.hpp"

#include <cmath>
#include <cstdlib>

#include "ldp/mechanism.hpp"
#include "ldp/quadrature.hpp"

namespace ldp {
namespace {

// l1 distance between a*1_S and b*1_T for sorted index sets S, T.
double scaled_support_l1(std::span<const std::size_t> s, double a, std::span<const std::size_t> t,
                         double b) {
  double total = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < s.size() && j < t.size()) {
    if (s[i] == t[j]) {
      total += std::fabs(a - b);
      ++i;
      ++j;
    } else if (s[i] < t[j]) {
      total += std::fabs(a);
      ++i;
    } else {
      total += std::fabs(b);
      ++j;
    }
  }
  total += std::fabs(a) * static_cast<double>(s.size() - i);
  total += std::fabs(b) * static_cast<double>(t.size() - j);
  return total;
}

void check_spec_grid(const DistributionSpec& spec, const GridSpec& grid) {
  if (spec.dimension() != grid.dimension()) {
    throw ParamError("audit: distribution and grid dimensions disagree");
  }
}

}  // namespace

double ldp_ratio_bound(Half half, std::span<const double> x, int y,
                       std::span<const double> x_alt, int y_alt, const GridSpec& grid,
                       const PrivacyBudget& budget) {
  check_unit_cube(x, grid.dimension());
  check_unit_cube(x_alt, grid.dimension());
  double scale_a = 1.0;
  double scale_b = 1.0;
  if (half == Half::label) {
    if (y != 0 && y != 1) throw DomainError("ldp_ratio_bound: labels must be 0 or 1");
    if (y_alt != 0 && y_alt != 1) throw DomainError("ldp_ratio_bound: labels must be 0 or 1");
    scale_a = static_cast<double>(y);
    scale_b = static_cast<double>(y_alt);
  }
  const IndicatorArray a = build_indicator_array(x, grid);
  const IndicatorArray b = build_indicator_array(x_alt, grid);
  const double l1 = scaled_support_l1(a.nonzero, scale_a, b.nonzero, scale_b);
  return l1 * budget.alpha * std::ldexp(1.0, -(grid.dimension() + 1));
}

double ldp_ratio_bound(std::span<const double> x, std::span<const double> x_alt,
                       const GridSpec& grid, const PrivacyBudget& budget) {
  return ldp_ratio_bound(Half::density, x, 0, x_alt, 0, grid, budget);
}

double expected_statistic_oracle(const DistributionSpec& spec, const GridSpec& grid,
                                 std::span<const double> x0, std::size_t nodes_per_axis) {
  check_spec_grid(spec, grid);
  check_unit_cube(x0, grid.dimension());
  if (grid.dimension() > 2) {
    for (const SupportRegion& region : spec.support()) {
      if (region.shape != SupportRegion::Shape::box) {
        throw ParamError("expected_statistic_oracle: d > 2 needs expected_statistic_mc");
      }
    }
    if (grid.dimension() > 3) {
      throw ParamError("expected_statistic_oracle: d > 3 needs expected_statistic_mc");
    }
  }
  const Window window = indicator_window(x0, grid);
  ScalarField g = [&spec](std::span<const double> x) {
    return spec.density(x) * (spec.eta(x) - 0.5);
  };
  double total = 0.0;
  for (const SupportRegion& region : spec.support()) {
    const std::size_t nodes =
        region.shape == SupportRegion::Shape::ball ? std::min<std::size_t>(nodes_per_axis, 1025)
                                                   : nodes_per_axis;
    total += region_integral(region, g, window.lo, window.hi, nodes);
  }
  return total;
}

RiskEstimate expected_statistic_mc(const DistributionSpec& spec, const GridSpec& grid,
                                   std::span<const double> x0, std::size_t samples,
                                   RngStream& rng) {
  check_spec_grid(spec, grid);
  check_unit_cube(x0, grid.dimension());
  if (samples == 0) throw ParamError("expected_statistic_mc: samples must be >= 1");
  const Window window = indicator_window(x0, grid);
  const int d = grid.dimension();
  double sum = 0.0;
  double sum_sq = 0.0;
  std::vector<LabeledPoint> batch;
  batch.reserve(1024);
  std::size_t remaining = samples;
  while (remaining > 0) {
    const std::size_t chunk = std::min<std::size_t>(remaining, 1024);
    batch.clear();
    spec.sample_into(chunk, rng, batch);
    for (const LabeledPoint& p : batch) {
      bool in_window = true;
      for (int k = 0; k < d && in_window; ++k) {
        const double v = p.x[static_cast<std::size_t>(k)];
        const std::size_t kk = static_cast<std::size_t>(k);
        in_window = v > window.lo[kk] && v < window.hi[kk];
      }
      const double v = in_window ? spec.eta(p.x) - 0.5 : 0.0;
      sum += v;
      sum_sq += v * v;
    }
    remaining -= chunk;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  return RiskEstimate{mean, std::sqrt(var / n)};
}

std::vector<double> simulate_statistic(const DistributionSpec& spec, const GridSpec& grid,
                                       const PrivacyBudget& budget, std::size_t n,
                                       std::span<const double> x0, std::size_t reps,
                                       const RngStream& rng) {
  check_spec_grid(spec, grid);
  check_unit_cube(x0, grid.dimension());
  if (n == 0) throw ParamError("simulate_statistic: n must be >= 1");
  if (reps == 0) throw ParamError("simulate_statistic: reps must be >= 1");

  const int d = grid.dimension();
  const double h = grid.bandwidth();
  std::vector<double> node(static_cast<std::size_t>(d));
  {
    const std::vector<int> idx = index_nearest(x0, grid);
    for (int k = 0; k < d; ++k) {
      node[static_cast<std::size_t>(k)] = grid.node_coordinate(idx[static_cast<std::size_t>(k)]);
    }
  }
  // The statistic at x0 reads one payload cell, so each client needs only its
  // indicator at that node plus one Laplace draw. Client substreams keep this
  // distributionally identical to running the dense mechanism.
  auto covers_node = [&](const LabeledPoint& p) {
    for (int k = 0; k < d; ++k) {
      if (!(std::fabs(p.x[static_cast<std::size_t>(k)] - node[static_cast<std::size_t>(k)]) < h)) {
        return false;
      }
    }
    return true;
  };

  const NoiseSpec noise(d, budget);
  std::vector<double> out(reps);
  std::vector<LabeledPoint> one;
  one.reserve(1);
  for (std::size_t r = 0; r < reps; ++r) {
    const RngStream rep = rng.substream(r);
    double density_sum = 0.0;
    double label_sum = 0.0;
    for (std::size_t i = 1; i <= 2 * n; ++i) {
      RngStream client = rep.substream(i);
      one.clear();
      spec.sample_into(1, client, one);
      const LabeledPoint& p = one.front();
      double payload = covers_node(p) ? 1.0 : 0.0;
      if (i > n) payload *= static_cast<double>(p.y);
      const double z = payload + client.laplace(noise.scale);
      if (i <= n) {
        density_sum += z;
      } else {
        label_sum += z;
      }
    }
    const double nn = static_cast<double>(n);
    out[r] = label_sum / nn - density_sum / (2.0 * nn);
  }
  return out;
}

double tail_bound(int dimension, const PrivacyBudget& budget, std::size_t n, double t) {
  if (dimension < 1) throw ParamError("tail_bound: dimension must be >= 1");
  if (n == 0) throw ParamError("tail_bound: n must be >= 1");
  if (!(t > 0.0) || t > 1.0) throw ParamError("tail_bound: t must lie in (0, 1]");
  const double exponent = static_cast<double>(n) * budget.alpha * budget.alpha * t * t *
                          std::ldexp(1.0, -(2 * dimension + 6));
  return std::exp(-exponent);
}

TailCheckResult tail_bound_check(const DistributionSpec& spec, const GridSpec& grid,
                                 const PrivacyBudget& budget, std::size_t n,
                                 std::span<const double> x0, double t, std::size_t reps,
                                 const RngStream& rng) {
  TailCheckResult result;
  result.bound = tail_bound(grid.dimension(), budget, n, t);
  result.slack = 3.0 * std::sqrt(result.bound * (1.0 - result.bound) / static_cast<double>(reps));
  const double mean = expected_statistic_oracle(spec, grid, x0);
  const std::vector<double> sims = simulate_statistic(spec, grid, budget, n, x0, reps, rng);
  std::size_t upper = 0;
  std::size_t lower = 0;
  for (double v : sims) {
    if (v - mean >= t) ++upper;
    if (v - mean <= -t) ++lower;
  }
  result.upper_tail = static_cast<double>(upper) / static_cast<double>(reps);
  result.lower_tail = static_cast<double>(lower) / static_cast<double>(reps);
  result.pass = result.upper_tail <= result.bound + result.slack &&
                result.lower_tail <= result.bound + result.slack;
  return result;
}

}  // namespace ldp
