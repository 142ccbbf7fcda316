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

#ifndef LDP_SYNTHGEN_HPP_
#define LDP_SYNTHGEN_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "ldp/core.hpp"
#include "ldp/quadrature.hpp"
#include "ldp/rng.hpp"

namespace ldp {

// A joint distribution of (X, Y) on [0,1]^d x {0,1}, described by evaluators
// for the regression function eta(x) = P(Y=1 | X=x) and the marginal density
// of X, a sampler, and the geometric support decomposition used by the
// quadrature routines. Named families also carry a serializable document and
// their declared class parameters.
class DistributionSpec {
 public:
  using EtaFn = std::function<double(std::span<const double>)>;
  using DensityFn = std::function<double(std::span<const double>)>;
  using SamplerFn = std::function<void(std::size_t, RngStream&, std::vector<LabeledPoint>&)>;

  DistributionSpec(int d, EtaFn eta, DensityFn density, SamplerFn sampler,
                   std::vector<SupportRegion> support,
                   std::optional<ClassParams> declared = std::nullopt,
                   nlohmann::json document = nlohmann::json::object());

  int dimension() const { return d_; }
  double eta(std::span<const double> x) const { return eta_(x); }
  double density(std::span<const double> x) const { return density_(x); }
  int bayes(std::span<const double> x) const { return eta_(x) >= 0.5 ? 1 : 0; }
  const std::vector<SupportRegion>& support() const { return support_; }
  const std::optional<ClassParams>& declared_params() const { return declared_; }
  const nlohmann::json& document() const { return document_; }

  void sample_into(std::size_t count, RngStream& rng, std::vector<LabeledPoint>& out) const {
    sampler_(count, rng, out);
  }
  std::vector<LabeledPoint> sample(std::size_t count, RngStream& rng) const;

 private:
  int d_;
  EtaFn eta_;
  DensityFn density_;
  SamplerFn sampler_;
  std::vector<SupportRegion> support_;
  std::optional<ClassParams> declared_;
  nlohmann::json document_;
};

// Sinusoidal family on the unit cube:
//   eta(x) = clip(1/2 + a sin(2 pi (x_1 - phase)), 0, 1).
// Amplitudes a <= 1/2 keep eta inside [0,1] (a pure sinusoid); larger
// amplitudes saturate eta at 0/1 away from its crossings, which concentrates
// steep ramps near the decision boundary. The Bayes rule is the sign of the
// sinusoid in either case. Smoothness: |eta(x) - eta(x')| <= (2 pi a)^beta *
// ||x - x'||^beta on the unit cube, so a is feasible iff (2 pi a)^beta <= L.
//
// The marginal of X is uniform by default. Setting density_floor < 1 lowers
// the density along the first axis to that value on [ramp_end, 1], with a
// continuous linear ramp on [ramp_start, ramp_end] and a constant elevated
// level before it; the declared class then carries mu = density_floor.
struct SmoothFamilyParams {
  int d = 1;
  double beta = 1.0;
  double L = 1.0;
  double amplitude = -1.0;  // < 0 selects the largest feasible a, capped at 1/2
  double phase = 0.0;
  double margin_gamma = 1.0;       // declared margin exponent
  double margin_C0 = -1.0;         // < 0 selects a valid constant for this family
  double density_floor = 1.0;      // in (0, 1]; 1 keeps the marginal uniform
  double density_ramp_start = 0.85;
  double density_ramp_end = 0.9;
};
DistributionSpec make_smooth_family(const SmoothFamilyParams& params);

// Two-plateau family: eta rises smoothly from 1/2 - level to 1/2 + level
// across x_1 = boundary (cubic ramp of half-width 1.5 * level / L, so the
// steepest slope is exactly L). The marginal of X_1 is flat except for a
// low-density valley around the boundary: constant floor within
// +-valley_inner, linear ramps of width valley_ramp back to the bulk level.
// Classification error away from the valley is then driven purely by the
// sign of the aggregated cell statistic, not by where cell edges land.
struct StepFamilyParams {
  int d = 1;
  double beta = 1.0;
  double L = 30.0;
  double level = 0.2;     // plateau margin |eta - 1/2|, in (0, 1/2]
  double boundary = 0.5;  // plateau split point along the first axis
  double valley_inner = 0.16;
  double valley_ramp = 0.04;
  double valley_floor = 0.0625;  // becomes the declared mu
  double margin_gamma = 0.0;
  double margin_C0 = 1.0;
};
DistributionSpec make_step_family(const StepFamilyParams& params);

// Ad-hoc spec for tests and audit fixtures: X ~ Uniform([0,1]^d) with an
// arbitrary regression function. Not serializable, no declared parameters.
DistributionSpec make_uniform_family(int d, DistributionSpec::EtaFn eta);

// Radial profile used by the hard-instance family: 1 on [0, 1/8], 0 on
// [1/4, inf), and the cubic ramp 1 - (3t^2 - 2t^3), t = (r - 1/8) / (1/8),
// in between. Nonincreasing, Lipschitz constant 12 attained mid-ramp.
double bump_u(double r);

// Hard-instance family: a grid of 2q points per axis on [0, 1/2]^d with m
// active cells, each active cell carrying a ball of probability mass w where
// eta deviates from 1/2 by exactly sigma_i * L * C_phi * q^{-beta} / 2, and a
// remainder box A_0 = [3/4, 1] x [0,1]^{d-1} where eta = 1/2. The margin
// probability has the closed form m w * 1{2 t q^beta >= L * C_phi}.
struct LowerBoundParams {
  int q = 1;
  int m = 1;
  double w = 1.0;
  std::vector<int> sigma;     // entries in {-1, +1}, size m
  double C_phi = 1.0 / 12.0;  // bump scale; 1/12 makes the ramp slope exactly L
  double beta = 1.0;
  double gamma = 1.0;
  double C0 = 1.0;
  double L = 1.0;

  void validate(int d) const;
};
DistributionSpec make_lower_bound_family(const LowerBoundParams& params, int d);

// Empirical smoothness check: worst ratio |eta(x)-eta(x')| / ||x-x'||^beta
// over sampled pairs (half near, half far). Passes iff the worst ratio is
// <= L * (1 + 1e-9).
struct HolderReport {
  bool pass = false;
  double worst_ratio = 0.0;
  std::size_t pairs = 0;
};
HolderReport holder_check(const DistributionSpec& spec, double beta, double L,
                          std::size_t pairs, RngStream& rng);

// Empirical margin check: for each t, the Monte Carlo estimate of
// P(0 < |eta(X) - 1/2| <= t) must not exceed C0 t^gamma by more than three
// binomial standard errors.
struct MarginReport {
  struct Row {
    double t = 0.0;
    double estimate = 0.0;
    double bound = 0.0;
    double std_error = 0.0;
    bool pass = false;
  };
  bool pass = false;
  std::vector<Row> rows;
};
MarginReport margin_check(const DistributionSpec& spec, double gamma, double C0,
                          std::span<const double> t_grid, std::size_t samples, RngStream& rng);

// Excess risk of a predictor relative to the Bayes rule:
//   E[ 1{predict(X) != bayes(X)} * |2 eta(X) - 1| ].
struct RiskEstimate {
  double value = 0.0;
  double std_error = 0.0;  // zero for quadrature
};
using Predictor = std::function<int(std::span<const double>)>;

// Deterministic trapezoid evaluation over the support regions (d <= 2).
RiskEstimate excess_risk_quadrature(const DistributionSpec& spec, const Predictor& predict,
                                    std::size_t nodes_per_axis = 4097);
// Monte Carlo evaluation with reported standard error (any d).
RiskEstimate excess_risk_mc(const DistributionSpec& spec, const Predictor& predict,
                            std::size_t samples, RngStream& rng);

// Reconstructs a named family from its configuration document.
DistributionSpec spec_from_json(const nlohmann::json& doc);

}  // namespace ldp

#endif  // LDP_SYNTHGEN_HPP_
