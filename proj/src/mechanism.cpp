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

#include "ldp/mechanism.hpp"

#include <array>
#include <cmath>

namespace ldp {
namespace {

// Per-axis node candidates with |x_k - j h| < h, i.e. integers strictly
// inside (x_k/h - 1, x_k/h + 1); at most two per axis. Each candidate is
// verified against the defining inequality on the actual floating-point
// values, so the sparse set agrees exactly with a scan over all nodes.
int axis_candidates(double xk, const GridSpec& grid, int out[2]) {
  const double h = grid.bandwidth();
  const int base = static_cast<int>(std::floor(xk / h));
  int count = 0;
  for (int j = base - 1; j <= base + 2; ++j) {
    if (j < 0 || j >= grid.side()) continue;
    if (std::fabs(xk - static_cast<double>(j) * h) < h) {
      out[count++] = j;
      if (count == 2) break;
    }
  }
  return count;
}

void fill_payload(std::span<const double> x, const GridSpec& grid, double weight,
                  std::vector<double>& values) {
  if (weight == 0.0) return;
  const IndicatorArray ind = build_indicator_array(x, grid);
  for (std::size_t flat : ind.nonzero) values[flat] += weight;
}

int check_label(int y) {
  if (y != 0 && y != 1) throw DomainError("label must be 0 or 1");
  return y;
}

}  // namespace

IndicatorArray build_indicator_array(std::span<const double> x, const GridSpec& grid) {
  check_unit_cube(x, grid.dimension());
  const int d = grid.dimension();

  int cand[8][2];  // d <= 3 at desk scale, but support any d via odometer below
  std::vector<std::array<int, 2>> cand_dyn;
  std::vector<int> counts(static_cast<std::size_t>(d));
  const bool small = d <= 8;
  if (!small) cand_dyn.resize(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    int* slot = small ? cand[k] : cand_dyn[static_cast<std::size_t>(k)].data();
    counts[static_cast<std::size_t>(k)] = axis_candidates(x[static_cast<std::size_t>(k)], grid, slot);
  }

  IndicatorArray out;
  out.grid = grid;
  // Odometer over the per-axis candidate lists, lexicographic order, which
  // yields ascending flat indices under row-major flattening.
  std::vector<int> pick(static_cast<std::size_t>(d), 0);
  std::vector<int> multi(static_cast<std::size_t>(d));
  while (true) {
    for (int k = 0; k < d; ++k) {
      const int* slot = small ? cand[k] : cand_dyn[static_cast<std::size_t>(k)].data();
      multi[static_cast<std::size_t>(k)] = slot[pick[static_cast<std::size_t>(k)]];
    }
    out.nonzero.push_back(grid.flatten(multi));
    int k = d - 1;
    while (k >= 0 && pick[static_cast<std::size_t>(k)] + 1 >= counts[static_cast<std::size_t>(k)]) {
      pick[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
    ++pick[static_cast<std::size_t>(k)];
  }
  return out;
}

NoiseSpec::NoiseSpec(int d, PrivacyBudget budget) {
  if (d < 1) throw ParamError("NoiseSpec: dimension must be >= 1");
  scale = std::ldexp(1.0, d + 1) / budget.alpha;  // 2^{d+1} / alpha
}

std::vector<double> sample_laplace(const NoiseSpec& noise, std::size_t count, RngStream& rng) {
  std::vector<double> draws(count);
  for (double& z : draws) z = rng.laplace(noise.scale);
  return draws;
}

void privatize_density_into(std::span<const double> x, const GridSpec& grid,
                            PrivacyBudget budget, RngStream& rng, std::vector<double>& out) {
  const NoiseSpec noise(grid.dimension(), budget);
  if (grid.cell_count() > (1u << 27)) {
    throw ParamError("privatize: grid too dense to materialize reports");
  }
  out.resize(grid.cell_count());
  for (double& v : out) v = rng.laplace(noise.scale);
  fill_payload(x, grid, 1.0, out);
}

void privatize_label_into(const LabeledPoint& point, const GridSpec& grid,
                          PrivacyBudget budget, RngStream& rng, std::vector<double>& out) {
  const int y = check_label(point.y);
  const NoiseSpec noise(grid.dimension(), budget);
  if (grid.cell_count() > (1u << 27)) {
    throw ParamError("privatize: grid too dense to materialize reports");
  }
  out.resize(grid.cell_count());
  for (double& v : out) v = rng.laplace(noise.scale);
  fill_payload(point.x, grid, static_cast<double>(y), out);
}

PrivatizedReport privatize_density(std::span<const double> x, const GridSpec& grid,
                                   PrivacyBudget budget, RngStream& rng) {
  PrivatizedReport report{Half::density, grid, {}};
  privatize_density_into(x, grid, budget, rng, report.values);
  return report;
}

PrivatizedReport privatize_label(const LabeledPoint& point, const GridSpec& grid,
                                 PrivacyBudget budget, RngStream& rng) {
  PrivatizedReport report{Half::label, grid, {}};
  privatize_label_into(point, grid, budget, rng, report.values);
  return report;
}

namespace noiseless {

PrivatizedReport privatize_density(std::span<const double> x, const GridSpec& grid) {
  PrivatizedReport report{Half::density, grid, std::vector<double>(grid.cell_count(), 0.0)};
  fill_payload(x, grid, 1.0, report.values);
  return report;
}

PrivatizedReport privatize_label(const LabeledPoint& point, const GridSpec& grid) {
  const int y = check_label(point.y);
  PrivatizedReport report{Half::label, grid, std::vector<double>(grid.cell_count(), 0.0)};
  fill_payload(point.x, grid, static_cast<double>(y), report.values);
  return report;
}

}  // namespace noiseless
}  // namespace ldp
