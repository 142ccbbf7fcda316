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

#ifndef LDP_AUDIT_HPP_
#define LDP_AUDIT_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "ldp/core.hpp"
#include "ldp/rng.hpp"
#include "ldp/synthgen.hpp"

namespace ldp {

// Exact supremum of the log-likelihood ratio between the privatized outputs
// produced for two client inputs. The mechanism adds Laplace noise of scale
// 2^{d+1}/alpha to every payload cell, so the supremum is
// (alpha / 2^{d+1}) * l1-distance between the payload vectors, computed here
// sparsely. Always <= alpha; equality needs disjoint full supports.
double ldp_ratio_bound(Half half, std::span<const double> x, int y,
                       std::span<const double> x_alt, int y_alt, const GridSpec& grid,
                       const PrivacyBudget& budget);

// Density-half convenience overload: labels never enter the payload.
double ldp_ratio_bound(std::span<const double> x, std::span<const double> x_alt,
                       const GridSpec& grid, const PrivacyBudget& budget);

// Population mean of the cell statistic at x0: the integral of
// f(x) * (eta(x) - 1/2) over the indicator window around x0's nearest node,
// by per-region quadrature. Supported for d <= 2 (and pure-box supports in
// d = 3); use expected_statistic_mc beyond that.
double expected_statistic_oracle(const DistributionSpec& spec, const GridSpec& grid,
                                 std::span<const double> x0, std::size_t nodes_per_axis = 4097);

// Monte Carlo fallback for the same mean, with a standard error.
RiskEstimate expected_statistic_mc(const DistributionSpec& spec, const GridSpec& grid,
                                   std::span<const double> x0, std::size_t samples,
                                   RngStream& rng);

// Draws `reps` independent copies of the decision statistic at x0 under the
// full pipeline (n fresh clients per half, privatized, aggregated), exploiting
// that the statistic at x0 depends on a single payload cell. Replication r
// uses rng.substream(r) and client i within it uses substream(i), so results
// do not depend on evaluation order.
std::vector<double> simulate_statistic(const DistributionSpec& spec, const GridSpec& grid,
                                       const PrivacyBudget& budget, std::size_t n,
                                       std::span<const double> x0, std::size_t reps,
                                       const RngStream& rng);

// Sub-Gaussian tail bound exp(-n alpha^2 t^2 / 2^{2d+6}) for deviations of
// the decision statistic; valid for t in (0, 1].
double tail_bound(int dimension, const PrivacyBudget& budget, std::size_t n, double t);

struct TailCheckResult {
  double upper_tail = 0.0;  // fraction of replications with T - E[T] >= t
  double lower_tail = 0.0;  // fraction with T - E[T] <= -t
  double bound = 0.0;
  double slack = 0.0;  // 3 binomial standard errors at the bound
  bool pass = false;
};

// Simulates the statistic and checks both empirical tails against the bound
// plus Monte Carlo slack. The mean is the quadrature oracle, so the check is
// exact up to quadrature tolerance.
TailCheckResult tail_bound_check(const DistributionSpec& spec, const GridSpec& grid,
                                 const PrivacyBudget& budget, std::size_t n,
                                 std::span<const double> x0, double t, std::size_t reps,
                                 const RngStream& rng);

}  // namespace ldp

#endif  // LDP_AUDIT_HPP_
