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

#include <cmath>
#include <cstddef>
#include <vector>

#include <doctest.h>

#include "ldp/core.hpp"
#include "ldp/mechanism.hpp"
#include "ldp/rng.hpp"

namespace ldp {
namespace {

// Brute force reference: scan every grid node for ||x - node||_inf < h.
std::vector<std::size_t> scan_all_cells(std::span<const double> x, const GridSpec& grid) {
  std::vector<std::size_t> hits;
  std::vector<int> multi(static_cast<std::size_t>(grid.dimension()));
  for (std::size_t flat = 0; flat < grid.cell_count(); ++flat) {
    grid.unflatten_into(flat, multi);
    bool inside = true;
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (!(std::fabs(x[k] - grid.node_coordinate(multi[k])) < grid.bandwidth())) {
        inside = false;
        break;
      }
    }
    if (inside) hits.push_back(flat);
  }
  return hits;
}

TEST_CASE("indicator support at hand-checked points") {
  GridSpec g(1, 0.5);  // nodes 0, 0.5, 1
  const std::vector<double> exact = {0.5};
  CHECK_EQ(build_indicator_array(exact, g).nonzero, std::vector<std::size_t>{1});
  const std::vector<double> left = {0.3};
  CHECK_EQ(build_indicator_array(left, g).nonzero, std::vector<std::size_t>{0, 1});
  const std::vector<double> origin = {0.0};
  CHECK_EQ(build_indicator_array(origin, g).nonzero, std::vector<std::size_t>{0});

  GridSpec plane(2, 0.5);
  const std::vector<double> corner = {0.3, 0.7};
  // Axis supports {0,1} x {1,2}, row-major flat indices with side 3.
  CHECK_EQ(build_indicator_array(corner, plane).nonzero,
           std::vector<std::size_t>{1, 2, 4, 5});
}

TEST_CASE("indicator support matches the scan-all oracle and stays within bounds") {
  RngStream rng(2026);
  for (int trial = 0; trial < 2000; ++trial) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 3);
    const double h = std::max(0.15, rng.uniform01());  // keeps the scan affordable
    GridSpec g(d, h);
    std::vector<double> x(static_cast<std::size_t>(d));
    for (double& v : x) v = rng.uniform01();

    const IndicatorArray ind = build_indicator_array(x, g);
    CHECK_GE(ind.nonzero.size(), 1u);
    CHECK_LE(ind.nonzero.size(), static_cast<std::size_t>(1) << d);
    CHECK_EQ(ind.nonzero, scan_all_cells(x, g));
  }
}

TEST_CASE("noise scale follows 2^{d+1} / alpha") {
  CHECK_EQ(NoiseSpec(1, PrivacyBudget(1.0)).scale, doctest::Approx(4.0));
  CHECK_EQ(NoiseSpec(2, PrivacyBudget(0.5)).scale, doctest::Approx(16.0));
  CHECK_EQ(NoiseSpec(3, PrivacyBudget(2.0)).scale, doctest::Approx(8.0));
  CHECK_EQ(NoiseSpec(1, PrivacyBudget(1.0)).variance(), doctest::Approx(32.0));
}

TEST_CASE("laplace sample variance matches 2 b^2") {
  NoiseSpec noise(1, PrivacyBudget(1.0));
  RngStream rng(7);
  const std::size_t count = 200000;
  std::vector<double> draws = sample_laplace(noise, count, rng);
  double sum = 0.0, sum_sq = 0.0;
  for (double v : draws) {
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / static_cast<double>(count);
  const double var = sum_sq / static_cast<double>(count) - mean * mean;
  CHECK_EQ(var, doctest::Approx(32.0).epsilon(0.05));
  CHECK_EQ(mean, doctest::Approx(0.0).epsilon(0.05));
}

TEST_CASE("density report is indicator plus noise on every cell") {
  GridSpec g(1, 0.5);
  PrivacyBudget budget(1.0);
  RngStream rng(11);
  const std::vector<double> x = {0.3};
  PrivatizedReport rep = privatize_density(x, g, budget, rng);
  CHECK_EQ(rep.half, Half::density);
  CHECK_EQ(rep.values.size(), g.cell_count());

  // Same stream again: the noise sequence repeats, so subtracting the two
  // reports of x and of a far point isolates the indicator difference.
  RngStream rng_a(11);
  RngStream rng_b(11);
  PrivatizedReport at_x = privatize_density(x, g, budget, rng_a);
  const std::vector<double> far = {1.0};
  PrivatizedReport at_far = privatize_density(far, g, budget, rng_b);
  CHECK_EQ(at_x.values[0] - at_far.values[0], doctest::Approx(1.0));
  CHECK_EQ(at_x.values[1] - at_far.values[1], doctest::Approx(1.0));
  CHECK_EQ(at_x.values[2] - at_far.values[2], doctest::Approx(-1.0));
}

TEST_CASE("label report consumes the same noise sequence for either label") {
  GridSpec g(1, 0.25);
  PrivacyBudget budget(0.5);
  LabeledPoint p0{{0.4}, 0};
  LabeledPoint p1{{0.4}, 1};
  RngStream rng_a(5);
  RngStream rng_b(5);
  PrivatizedReport rep0 = privatize_label(p0, g, budget, rng_a);
  PrivatizedReport rep1 = privatize_label(p1, g, budget, rng_b);
  CHECK_EQ(rep0.half, Half::label);

  const IndicatorArray ind = build_indicator_array(p0.x, g);
  std::vector<double> expected_diff(g.cell_count(), 0.0);
  for (std::size_t flat : ind.nonzero) expected_diff[flat] = 1.0;
  for (std::size_t j = 0; j < g.cell_count(); ++j) {
    CHECK_EQ(rep1.values[j] - rep0.values[j], doctest::Approx(expected_diff[j]));
  }
}

TEST_CASE("label validation rejects values outside {0,1}") {
  GridSpec g(1, 0.5);
  PrivacyBudget budget(1.0);
  RngStream rng(3);
  LabeledPoint bad{{0.4}, 2};
  CHECK_THROWS_AS(privatize_label(bad, g, budget, rng), DomainError);
  std::vector<double> outside = {1.5};
  CHECK_THROWS_AS(privatize_density(outside, g, budget, rng), DomainError);
}

TEST_CASE("noiseless hooks emit the exact payload") {
  GridSpec g(2, 0.5);
  const std::vector<double> x = {0.3, 0.7};
  PrivatizedReport dens = noiseless::privatize_density(x, g);
  const IndicatorArray ind = build_indicator_array(x, g);
  double total = 0.0;
  for (double v : dens.values) {
    CHECK((v == 0.0 || v == 1.0));
    total += v;
  }
  CHECK_EQ(total, doctest::Approx(static_cast<double>(ind.nonzero.size())));

  LabeledPoint p{{0.3, 0.7}, 0};
  PrivatizedReport lab = noiseless::privatize_label(p, g);
  for (double v : lab.values) CHECK_EQ(v, 0.0);
}

TEST_CASE("payload l1 norm never exceeds the calibrated sensitivity") {
  RngStream rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 3);
    const double h = std::max(1e-6, rng.uniform01());
    GridSpec g(d, h);
    std::vector<double> x(static_cast<std::size_t>(d));
    for (double& v : x) v = rng.uniform01();
    const IndicatorArray ind = build_indicator_array(x, g);
    // One individual's payload changes at most 2^d cells by 1 each; two
    // individuals' payloads differ in l1 by at most 2^{d+1}.
    CHECK_LE(ind.nonzero.size(), static_cast<std::size_t>(1) << d);
  }
}

TEST_CASE("into variants reuse the buffer and match the allocating path") {
  GridSpec g(1, 0.25);
  PrivacyBudget budget(1.0);
  const std::vector<double> x = {0.6};
  RngStream rng_a(17);
  RngStream rng_b(17);
  PrivatizedReport rep = privatize_density(x, g, budget, rng_a);
  std::vector<double> buf;
  privatize_density_into(x, g, budget, rng_b, buf);
  CHECK_EQ(buf, rep.values);
}

}  // namespace
}  // namespace ldp
