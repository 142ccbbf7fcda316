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
#include <limits>
#include <vector>

#include <doctest.h>

#include "ldp/core.hpp"
#include "ldp/rng.hpp"

namespace ldp {
namespace {

TEST_CASE("privacy budget must be positive and finite") {
  CHECK_EQ(PrivacyBudget(0.5).alpha, 0.5);
  CHECK_THROWS_AS(PrivacyBudget(0.0), ParamError);
  CHECK_THROWS_AS(PrivacyBudget(-1.0), ParamError);
  CHECK_THROWS_AS(PrivacyBudget(std::numeric_limits<double>::infinity()), ParamError);
  CHECK_THROWS_AS(PrivacyBudget(std::numeric_limits<double>::quiet_NaN()), ParamError);
}

TEST_CASE("grid geometry counts nodes per axis as ceil(1/h) + 1") {
  GridSpec g(2, 0.25);
  CHECK_EQ(g.side(), 5);
  CHECK_EQ(g.cell_count(), 25u);
  CHECK_EQ(g.node_coordinate(3), doctest::Approx(0.75));

  GridSpec coarse(1, 1.0);
  CHECK_EQ(coarse.side(), 2);

  GridSpec uneven(1, 0.3);  // ceil(1/0.3) = 4, so the last node sits at 1.2
  CHECK_EQ(uneven.side(), 5);
  CHECK_EQ(uneven.node_coordinate(4), doctest::Approx(1.2));
}

TEST_CASE("grid rejects invalid construction") {
  CHECK_THROWS_AS(GridSpec(0, 0.5), ParamError);
  CHECK_THROWS_AS(GridSpec(1, 0.0), ParamError);
  CHECK_THROWS_AS(GridSpec(1, -0.1), ParamError);
  CHECK_THROWS_AS(GridSpec(1, 1.5), ParamError);
  CHECK_THROWS_AS(GridSpec(22, 1e-3), ParamError);  // G^d overflows size_t
}

TEST_CASE("flatten and unflatten are inverse row-major maps") {
  GridSpec g(3, 0.5);  // side 3, 27 cells
  std::vector<int> multi = {2, 0, 1};
  const std::size_t flat = g.flatten(multi);
  CHECK_EQ(flat, 2u * 9u + 0u * 3u + 1u);
  CHECK_EQ(g.unflatten(flat), multi);

  for (std::size_t f = 0; f < g.cell_count(); ++f) {
    CHECK_EQ(g.flatten(g.unflatten(f)), f);
  }
}

TEST_CASE("nearest node rounds per coordinate with ties toward lower index") {
  GridSpec g(2, 0.25);
  const std::vector<double> x = {0.3, 0.6};
  CHECK_EQ(index_nearest(x, g), std::vector<int>{1, 2});

  GridSpec line(1, 0.25);
  const std::vector<double> tie = {0.375};  // exactly between nodes 1 and 2
  CHECK_EQ(index_nearest(tie, line), std::vector<int>{1});

  const std::vector<double> origin = {0.0};
  CHECK_EQ(index_nearest(origin, line), std::vector<int>{0});
  const std::vector<double> top = {1.0};
  CHECK_EQ(index_nearest(top, line), std::vector<int>{4});

  CHECK_EQ(index_nearest_flat(x, g), g.flatten(std::vector<int>{1, 2}));
}

TEST_CASE("indicator window is the open cube of half-width h at the nearest node") {
  GridSpec g(1, 0.5);
  const std::vector<double> x0 = {0.1};  // nearest node 0
  Window w = indicator_window(x0, g);
  CHECK_EQ(w.lo[0], doctest::Approx(-0.5));
  CHECK_EQ(w.hi[0], doctest::Approx(0.5));

  const std::vector<double> mid = {0.5};  // node 1
  w = indicator_window(mid, g);
  CHECK_EQ(w.lo[0], doctest::Approx(0.0));
  CHECK_EQ(w.hi[0], doctest::Approx(1.0));
}

TEST_CASE("unit cube check rejects bad points") {
  const std::vector<double> ok = {0.0, 1.0};
  CHECK_NOTHROW(check_unit_cube(ok, 2));
  CHECK_THROWS_AS(check_unit_cube(ok, 3), DomainError);
  const std::vector<double> out = {0.5, 1.2};
  CHECK_THROWS_AS(check_unit_cube(out, 2), DomainError);
  const std::vector<double> nan = {0.5, std::numeric_limits<double>::quiet_NaN()};
  CHECK_THROWS_AS(check_unit_cube(nan, 2), DomainError);
}

TEST_CASE("ball volume matches closed forms") {
  CHECK_EQ(ball_volume(1, 2.0), doctest::Approx(4.0));
  CHECK_EQ(ball_volume(2, 1.0), doctest::Approx(3.141592653589793));
  CHECK_EQ(ball_volume(3, 0.5), doctest::Approx(0.5235987755982988));
  CHECK_THROWS_AS(ball_volume(0, 1.0), ParamError);
  CHECK_THROWS_AS(ball_volume(1, -1.0), ParamError);
}

TEST_CASE("class parameter validation") {
  ClassParams p;
  CHECK_NOTHROW(p.validate());
  ClassParams bad = p;
  bad.beta = 0.0;
  CHECK_THROWS_AS(bad.validate(), ParamError);
  bad = p;
  bad.beta = 1.5;
  CHECK_THROWS_AS(bad.validate(), ParamError);
  bad = p;
  bad.gamma = -0.1;
  CHECK_THROWS_AS(bad.validate(), ParamError);
  bad = p;
  bad.mu = 0.0;
  CHECK_THROWS_AS(bad.validate(), ParamError);

  ClassParams lb;
  lb.beta = 1.0;
  lb.gamma = 1.0;
  CHECK(lb.lower_bound_valid(1));
  lb.gamma = 1.5;
  CHECK_FALSE(lb.lower_bound_valid(1));
  CHECK(lb.lower_bound_valid(2));
}

TEST_CASE("report validation enforces grid size and finite values") {
  PrivatizedReport r;
  r.grid = GridSpec(1, 0.5);
  r.values.assign(3, 0.0);
  CHECK_NOTHROW(validate_report(r));
  r.values.pop_back();
  CHECK_THROWS_AS(validate_report(r), SizeError);
  r.values.assign(3, 0.0);
  r.values[1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(validate_report(r), ConfigError);
}

TEST_CASE("rng streams are reproducible and order-independent") {
  RngStream a(42);
  RngStream b(42);
  for (int i = 0; i < 16; ++i) CHECK_EQ(a.next_u64(), b.next_u64());

  // Substream derivation is independent of parent consumption.
  RngStream parent(7);
  RngStream child_before = parent.substream(3);
  parent.next_u64();
  RngStream child_after = parent.substream(3);
  CHECK_EQ(child_before.next_u64(), child_after.next_u64());

  // Distinct ids decorrelate at least in the first draws.
  CHECK_NE(parent.substream(1).next_u64(), parent.substream(2).next_u64());
}

TEST_CASE("uniform01 stays strictly inside the open interval") {
  RngStream rng(123);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    CHECK_GT(u, 0.0);
    CHECK_LT(u, 1.0);
  }
}

TEST_CASE("laplace quantile is exact at closed-form points") {
  // Quartiles of the standard Laplace sit at +-ln 2 * scale.
  CHECK_EQ(laplace_inverse_cdf(0.25, 1.0), doctest::Approx(-std::log(0.5)));
  CHECK_EQ(laplace_inverse_cdf(-0.25, 2.0), doctest::Approx(2.0 * std::log(0.5)));
  CHECK_EQ(laplace_inverse_cdf(0.0, 3.0), 0.0);
  CHECK_THROWS_AS(laplace_inverse_cdf(0.5, 1.0), ParamError);
  CHECK_THROWS_AS(laplace_inverse_cdf(0.1, 0.0), ParamError);
}

}  // namespace
}  // namespace ldp
