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

#include "ldp/classifier.hpp"

#include <algorithm>
#include <cmath>

namespace ldp {

ClassifierModel::ClassifierModel(GridSpec grid, std::vector<double> statistic,
                                 std::size_t half_size)
    : grid_(grid), statistic_(std::move(statistic)), half_size_(half_size) {
  if (half_size_ == 0) throw SizeError("ClassifierModel: half size must be >= 1");
  if (statistic_.size() != grid_.cell_count()) {
    throw SizeError("ClassifierModel: statistic length does not match the grid");
  }
}

double ClassifierModel::statistic_at(std::span<const double> x0) const {
  return statistic_[index_nearest_flat(x0, grid_)];
}

Aggregator::Aggregator(GridSpec grid)
    : grid_(grid),
      density_sum_(grid.cell_count(), 0.0),
      label_sum_(grid.cell_count(), 0.0) {}

void Aggregator::add(const PrivatizedReport& report) {
  if (!(report.grid == grid_)) throw ConfigError("aggregate: report grid mismatch");
  if (report.half == Half::density) {
    add_density(report.values);
  } else {
    add_label(report.values);
  }
}

void Aggregator::add_density(std::span<const double> values) {
  if (values.size() != grid_.cell_count()) throw SizeError("aggregate: report length mismatch");
  for (std::size_t c = 0; c < values.size(); ++c) density_sum_[c] += values[c];
  ++n_density_;
}

void Aggregator::add_label(std::span<const double> values) {
  if (values.size() != grid_.cell_count()) throw SizeError("aggregate: report length mismatch");
  for (std::size_t c = 0; c < values.size(); ++c) label_sum_[c] += values[c];
  ++n_label_;
}

ClassifierModel Aggregator::finish() const {
  if (n_density_ == 0 || n_label_ == 0) throw SizeError("aggregate: both halves must be nonempty");
  if (n_density_ != n_label_) throw SizeError("aggregate: halves must have equal size");
  const double n = static_cast<double>(n_label_);
  std::vector<double> t(grid_.cell_count());
  for (std::size_t c = 0; c < t.size(); ++c) {
    t[c] = label_sum_[c] / n - density_sum_[c] / (2.0 * n);
  }
  return ClassifierModel(grid_, std::move(t), n_label_);
}

ClassifierModel aggregate(const std::vector<PrivatizedReport>& density_reports,
                          const std::vector<PrivatizedReport>& label_reports) {
  if (density_reports.empty() || label_reports.empty()) {
    throw SizeError("aggregate: both halves must be nonempty");
  }
  if (density_reports.size() != label_reports.size()) {
    throw SizeError("aggregate: halves must have equal size");
  }
  Aggregator agg(density_reports.front().grid);
  for (const PrivatizedReport& r : density_reports) {
    if (r.half != Half::density) throw TagError("aggregate: density half contains a label report");
    agg.add(r);
  }
  for (const PrivatizedReport& r : label_reports) {
    if (r.half != Half::label) throw TagError("aggregate: label half contains a density report");
    agg.add(r);
  }
  return agg.finish();
}

int classify(std::span<const double> x0, const ClassifierModel& model) {
  return model.statistic_at(x0) >= 0.0 ? 1 : 0;
}

double theoretical_bandwidth(std::size_t n, PrivacyBudget budget, double L, double mu,
                             double beta, int d) {
  if (n == 0) throw ParamError("theoretical_bandwidth: n must be >= 1");
  if (!(L > 0.0) || !(mu > 0.0)) throw ParamError("theoretical_bandwidth: L and mu must be > 0");
  if (!(beta > 0.0) || beta > 1.0) throw ParamError("theoretical_bandwidth: beta must lie in (0, 1]");
  if (d < 1) throw ParamError("theoretical_bandwidth: dimension must be >= 1");
  const double base =
      static_cast<double>(n) * budget.alpha * budget.alpha * L * L * mu * mu;
  const double h = std::pow(base, -1.0 / (2.0 * d + 2.0 * beta));
  return std::min(h, 1.0);
}

double default_bandwidth(std::size_t n, PrivacyBudget budget, double beta, int d, double c) {
  if (n == 0) throw ParamError("default_bandwidth: n must be >= 1");
  if (!(beta > 0.0) || beta > 1.0) throw ParamError("default_bandwidth: beta must lie in (0, 1]");
  if (d < 1) throw ParamError("default_bandwidth: dimension must be >= 1");
  if (!(c > 0.0)) throw ParamError("default_bandwidth: c must be > 0");
  const double base = static_cast<double>(n) * budget.alpha * budget.alpha;
  const double h = c * std::pow(base, -1.0 / (2.0 * beta + 2.0 * d));
  return std::min(h, 1.0);
}

double rate_exponent(double beta, double gamma, int d) {
  if (!(beta > 0.0) || beta > 1.0) throw ParamError("rate_exponent: beta must lie in (0, 1]");
  if (!(gamma >= 0.0)) throw ParamError("rate_exponent: gamma must be >= 0");
  if (d < 1) throw ParamError("rate_exponent: dimension must be >= 1");
  return beta * (1.0 + gamma) / (2.0 * beta + 2.0 * d);
}

double nonprivate_rate_exponent(double beta, double gamma, int d) {
  if (!(beta > 0.0) || beta > 1.0) throw ParamError("nonprivate_rate_exponent: beta must lie in (0, 1]");
  if (!(gamma >= 0.0)) throw ParamError("nonprivate_rate_exponent: gamma must be >= 0");
  if (d < 1) throw ParamError("nonprivate_rate_exponent: dimension must be >= 1");
  return beta * (1.0 + gamma) / (2.0 * beta + d);
}

RegressogramBaseline::RegressogramBaseline(std::span<const LabeledPoint> raw, GridSpec grid)
    : grid_(grid), ones_(grid.cell_count(), 0), total_(grid.cell_count(), 0) {
  for (const LabeledPoint& p : raw) {
    if (p.y != 0 && p.y != 1) throw DomainError("label must be 0 or 1");
    const std::size_t cell = index_nearest_flat(p.x, grid_);
    total_[cell] += 1;
    ones_[cell] += static_cast<std::uint32_t>(p.y);
  }
}

int RegressogramBaseline::classify(std::span<const double> x0) const {
  const std::size_t cell = index_nearest_flat(x0, grid_);
  if (total_[cell] == 0) return 1;
  return 2 * ones_[cell] >= total_[cell] ? 1 : 0;
}

int classify_nonprivate(std::span<const double> x0, std::span<const LabeledPoint> raw,
                        const GridSpec& grid) {
  return RegressogramBaseline(raw, grid).classify(x0);
}

}  // namespace ldp
