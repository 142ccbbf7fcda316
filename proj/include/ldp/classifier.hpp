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

#ifndef LDP_CLASSIFIER_HPP_
#define LDP_CLASSIFIER_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ldp/core.hpp"

namespace ldp {

// Fitted plug-in classifier: per-node statistic
//   t(j) = (1/n) * sum_label Z_ij - (1/(2n)) * sum_density Z_ij,
// where n is the number of reports per half. Prediction at x0 thresholds
// t at the node nearest to x0.
class ClassifierModel {
 public:
  ClassifierModel(GridSpec grid, std::vector<double> statistic, std::size_t half_size);

  const GridSpec& grid() const { return grid_; }
  const std::vector<double>& statistic() const { return statistic_; }
  std::size_t half_size() const { return half_size_; }
  double statistic_at(std::span<const double> x0) const;

 private:
  GridSpec grid_;
  std::vector<double> statistic_;
  std::size_t half_size_;
};

// Streaming aggregation of reports into per-node sums. Reports must be added
// in ascending client order within each half; sums accumulate in that order,
// so results are reproducible independent of scheduling.
class Aggregator {
 public:
  explicit Aggregator(GridSpec grid);

  void add(const PrivatizedReport& report);
  void add_density(std::span<const double> values);
  void add_label(std::span<const double> values);
  ClassifierModel finish() const;  // requires equal, nonzero halves

 private:
  GridSpec grid_;
  std::vector<double> density_sum_;
  std::vector<double> label_sum_;
  std::size_t n_density_ = 0;
  std::size_t n_label_ = 0;
};

// One-shot aggregation of two report lists (client order = list order).
ClassifierModel aggregate(const std::vector<PrivatizedReport>& density_reports,
                          const std::vector<PrivatizedReport>& label_reports);

// Predicted label at x0: 1 if the local statistic is >= 0, else 0.
int classify(std::span<const double> x0, const ClassifierModel& model);

// Risk-balancing bandwidth for declared class parameters:
// h = (n alpha^2 L^2 mu^2)^{-1/(2d + 2 beta)}, clamped into (0, 1].
double theoretical_bandwidth(std::size_t n, PrivacyBudget budget, double L, double mu,
                             double beta, int d);

// Practical rule with a free constant: h = c * (n alpha^2)^{-1/(2 beta + 2d)},
// clamped into (0, 1].
double default_bandwidth(std::size_t n, PrivacyBudget budget, double beta, int d, double c);

// Exponent of the private excess-risk rate (n alpha^2)^{-exponent}:
// beta (1 + gamma) / (2 beta + 2d).
double rate_exponent(double beta, double gamma, int d);

// Exponent of the non-private rate n^{-exponent}: beta (1 + gamma) / (2 beta + d).
double nonprivate_rate_exponent(double beta, double gamma, int d);

// Non-private reference classifier: per-cell majority vote of raw labels on
// its own grid. Empty cells predict 1, mirroring the sign convention of the
// private rule at t = 0.
class RegressogramBaseline {
 public:
  RegressogramBaseline(std::span<const LabeledPoint> raw, GridSpec grid);
  int classify(std::span<const double> x0) const;
  const GridSpec& grid() const { return grid_; }

 private:
  GridSpec grid_;
  std::vector<std::uint32_t> ones_;
  std::vector<std::uint32_t> total_;
};

// Convenience wrapper: fit the baseline on raw and classify x0.
int classify_nonprivate(std::span<const double> x0, std::span<const LabeledPoint> raw,
                        const GridSpec& grid);

}  // namespace ldp

#endif  // LDP_CLASSIFIER_HPP_
