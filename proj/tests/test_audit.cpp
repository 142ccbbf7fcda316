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
#include <numeric>
#include <vector>

#include <doctest.h>

#include "ldp/audit.hpp"
#include "ldp/core.hpp"
#include "ldp/rng.hpp"
#include "ldp/synthgen.hpp"

namespace ldp {
namespace {

TEST_CASE("likelihood ratio bound at hand-checked pairs") {
  PrivacyBudget one(1.0);
  GridSpec g(1, 0.5);
  const std::vector<double> a = {0.3};  // support {0, 1}
  const std::vector<double> b = {0.9};  // support {1, 2}
  // Payloads differ on cells 0 and 2: l1 distance 2, bound 2 * alpha / 4.
  CHECK_EQ(ldp_ratio_bound(a, b, g, one), doctest::Approx(0.5));
  CHECK_EQ(ldp_ratio_bound(a, a, g, one), 0.0);

  // Disjoint full supports exhaust the calibrated sensitivity 2^{d+1}.
  GridSpec fine(1, 0.2);
  const std::vector<double> lo = {0.1};  // support {0, 1}
  const std::vector<double> hi = {0.5};  // support {2, 3}
  CHECK_EQ(ldp_ratio_bound(lo, hi, fine, one), doctest::Approx(1.0));
  CHECK_EQ(ldp_ratio_bound(lo, hi, fine, PrivacyBudget(0.25)), doctest::Approx(0.25));

  // Label half: flipping the label alone costs the indicator's l1 norm.
  CHECK_EQ(ldp_ratio_bound(Half::label, a, 1, a, 0, g, one), doctest::Approx(0.5));
  CHECK_EQ(ldp_ratio_bound(Half::label, a, 1, a, 1, g, one), 0.0);
  CHECK_EQ(ldp_ratio_bound(Half::label, a, 0, b, 0, g, one), 0.0);  // payloads both zero
  CHECK_THROWS_AS(ldp_ratio_bound(Half::label, a, 2, a, 0, g, one), DomainError);
}

TEST_CASE("likelihood ratio bound never exceeds alpha and scales with it") {
  RngStream rng(303);
  for (int trial = 0; trial < 1500; ++trial) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 3);
    const double h = std::max(1e-6, rng.uniform01());
    GridSpec g(d, h);
    std::vector<double> x(static_cast<std::size_t>(d)), z(static_cast<std::size_t>(d));
    for (double& v : x) v = rng.uniform01();
    for (double& v : z) v = rng.uniform01();
    const int y = static_cast<int>(rng.next_u64() & 1);
    const int y_alt = static_cast<int>(rng.next_u64() & 1);
    for (double alpha : {0.25, 1.0}) {
      PrivacyBudget budget(alpha);
      const double dens = ldp_ratio_bound(x, z, g, budget);
      const double lab = ldp_ratio_bound(Half::label, x, y, z, y_alt, g, budget);
      CHECK_GE(dens, 0.0);
      CHECK_LE(dens, alpha + 1e-12);
      CHECK_LE(lab, alpha + 1e-12);
    }
    // Linearity in alpha at fixed inputs.
    const double at1 = ldp_ratio_bound(x, z, g, PrivacyBudget(1.0));
    const double at2 = ldp_ratio_bound(x, z, g, PrivacyBudget(2.0));
    CHECK_EQ(at2, doctest::Approx(2.0 * at1));
  }
}

TEST_CASE("statistic oracle at closed-form fixtures") {
  GridSpec g(1, 0.5);
  const std::vector<double> x0 = {0.5};  // window (0, 1)

  DistributionSpec fair =
      make_uniform_family(1, [](std::span<const double>) { return 0.5; });
  CHECK_EQ(expected_statistic_oracle(fair, g, x0), doctest::Approx(0.0));

  DistributionSpec sure =
      make_uniform_family(1, [](std::span<const double>) { return 1.0; });
  CHECK_EQ(expected_statistic_oracle(sure, g, x0), doctest::Approx(0.5));

  DistributionSpec linear =
      make_uniform_family(1, [](std::span<const double> x) { return x[0]; });
  CHECK_EQ(expected_statistic_oracle(linear, g, x0), doctest::Approx(0.0).epsilon(1e-9));

  // Clipping: the window at node 0 is (-0.5, 0.5), only [0, 0.5) has mass.
  const std::vector<double> corner = {0.1};
  CHECK_EQ(expected_statistic_oracle(sure, g, corner), doctest::Approx(0.25));
}

TEST_CASE("oracle, monte carlo, and the simulated pipeline agree") {
  SmoothFamilyParams p;
  p.d = 1;
  p.L = 3.141592653589793 / 2.0;
  p.amplitude = 0.25;
  p.phase = 0.1;
  DistributionSpec spec = make_smooth_family(p);
  GridSpec g(1, 0.25);
  const std::vector<double> x0 = {0.6};

  const double oracle = expected_statistic_oracle(spec, g, x0);
  RngStream rng(55);
  RiskEstimate mc = expected_statistic_mc(spec, g, x0, 200000, rng);
  CHECK_LE(std::fabs(mc.value - oracle), 4.0 * mc.std_error + 1e-9);

  PrivacyBudget one(1.0);
  const std::size_t n = 256;
  const std::size_t reps = 4000;
  std::vector<double> sims = simulate_statistic(spec, g, one, n, x0, reps, RngStream(56));
  REQUIRE_EQ(sims.size(), reps);
  const double mean = std::accumulate(sims.begin(), sims.end(), 0.0) / sims.size();
  double var = 0.0;
  for (double s : sims) var += (s - mean) * (s - mean);
  var /= static_cast<double>(reps - 1);
  const double se = std::sqrt(var / static_cast<double>(reps));
  CHECK_LE(std::fabs(mean - oracle), 4.0 * se);

  // The statistic variance is dominated by the two Laplace terms:
  // 2 b^2 (1/n + 1/(4n)) with b = 4.
  const double predicted = 32.0 * 1.25 / static_cast<double>(n);
  CHECK_EQ(var, doctest::Approx(predicted).epsilon(0.15));
}

TEST_CASE("simulated statistic is reproducible and stream-local") {
  DistributionSpec spec = make_uniform_family(
      1, [](std::span<const double> x) { return 0.5 + 0.3 * (x[0] > 0.5 ? 1.0 : -1.0); });
  GridSpec g(1, 0.25);
  PrivacyBudget one(1.0);
  const std::vector<double> x0 = {0.8};
  std::vector<double> a = simulate_statistic(spec, g, one, 64, x0, 50, RngStream(9));
  std::vector<double> b = simulate_statistic(spec, g, one, 64, x0, 50, RngStream(9));
  CHECK_EQ(a, b);
  std::vector<double> c = simulate_statistic(spec, g, one, 64, x0, 50, RngStream(10));
  CHECK_NE(a, c);
}

TEST_CASE("tail bound closed forms and domain") {
  PrivacyBudget one(1.0);
  CHECK_EQ(tail_bound(1, one, 1280, 1.0), doctest::Approx(std::exp(-5.0)));
  CHECK_EQ(tail_bound(1, one, 512, 0.5), doctest::Approx(std::exp(-512.0 * 0.25 / 256.0)));
  CHECK_EQ(tail_bound(2, one, 1024, 1.0), doctest::Approx(std::exp(-1024.0 / 1024.0)));
  CHECK_THROWS_AS(tail_bound(1, one, 1280, 0.0), ParamError);
  CHECK_THROWS_AS(tail_bound(1, one, 1280, 1.1), ParamError);
  CHECK_THROWS_AS(tail_bound(1, one, 0, 0.5), ParamError);
}

TEST_CASE("tail check passes on a smooth fixture") {
  SmoothFamilyParams p;
  p.d = 1;
  p.L = 3.141592653589793 / 2.0;
  p.amplitude = 0.25;
  DistributionSpec spec = make_smooth_family(p);
  GridSpec g(1, 0.25);
  PrivacyBudget one(1.0);
  const std::vector<double> x0 = {0.5};
  TailCheckResult res = tail_bound_check(spec, g, one, 512, x0, 0.5, 2000, RngStream(77));
  CHECK(res.pass);
  CHECK_EQ(res.bound, doctest::Approx(std::exp(-0.5)));
  CHECK_GE(res.slack, 0.0);
  CHECK_LE(res.upper_tail, res.bound + res.slack);
  CHECK_LE(res.lower_tail, res.bound + res.slack);
}

}  // namespace
}  // namespace ldp
