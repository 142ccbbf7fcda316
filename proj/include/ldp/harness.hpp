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

#ifndef LDP_HARNESS_HPP_
#define LDP_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ldp/classifier.hpp"
#include "ldp/core.hpp"
#include "ldp/synthgen.hpp"

namespace ldp {

// Bandwidth selection policy for the private classifier.
struct BandwidthRule {
  enum class Kind { theoretical, default_rule };
  Kind kind = Kind::default_rule;
  double c = 1.0;  // free constant of the default rule
};

// How excess risk is evaluated against the known distribution.
struct EvaluationSpec {
  enum class Method { quadrature, mc };
  Method method = Method::quadrature;
  std::size_t nodes = 4097;          // per axis, quadrature
  std::size_t test_points = 100000;  // Monte Carlo
};

// One experiment: a distribution, a privacy level, a grid of half-sample
// sizes, and a replication budget. Serialized as a single JSON document.
struct ExperimentConfig {
  std::uint64_t seed = 1;
  double alpha = 1.0;
  std::vector<std::size_t> n_grid;  // strictly increasing half-sample sizes
  std::size_t replications = 1;
  BandwidthRule bandwidth;
  EvaluationSpec evaluation;
  double baseline_c = 1.0;  // constant of the non-private reference bandwidth
  int threads = 1;
  std::string out;              // output path stem (optional)
  nlohmann::json distribution;  // family document, see spec_from_json

  void validate() const;  // throws ConfigError
  static ExperimentConfig from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
};

// Bandwidth for half-sample size n under the given rule and declared class.
double bandwidth_for(const BandwidthRule& rule, std::size_t n, PrivacyBudget budget,
                     const ClassParams& declared, int d);

// Non-private reference bandwidth c_b * (2n)^{-1/(2 beta + d)}, clamped
// into (0, 1]; the baseline sees all 2n raw points.
double baseline_bandwidth(std::size_t n, double beta, int d, double c_b);

struct RepResult {
  double excess_private = 0.0;
  double excess_baseline = 0.0;
};

// One full replication: draws 2n labeled points (clients 1..n density half,
// n+1..2n label half), privatizes each under its own client substream,
// aggregates, fits the baseline on the raw sample, and evaluates both
// classifiers' excess risk. Deterministic given (config.seed, rep_index).
RepResult run_replication(const DistributionSpec& spec, const ExperimentConfig& config,
                          std::size_t n, std::size_t rep_index);

struct RateRow {
  std::size_t n = 0;
  double alpha = 0.0;
  double h = 0.0;
  double mean_excess = 0.0;
  double std_error = 0.0;
  double baseline_mean = 0.0;
  std::size_t reps = 0;
};

struct RateTable {
  std::vector<RateRow> rows;                       // one per n, ascending
  std::vector<std::vector<RepResult>> replicates;  // per row, rep-index order
};

// Runs config.replications replications for every n in the grid.
// Replications are independent; with threads > 1 they run concurrently but
// results are merged in replication-index order, so output is identical for
// every worker count.
RateTable run_rate_experiment(const DistributionSpec& spec, const ExperimentConfig& config);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t rows_used = 0;
};

// Ordinary least squares of log(mean excess risk) on log(n alpha^2). Rows
// with nonpositive means are reported and skipped; at least two usable rows
// are required.
RateFit fit_rate(const RateTable& table);

// Shortest decimal form that round-trips a double exactly.
std::string format_double(double v);

// CSV with header n,alpha,h,mean_excess,stderr,baseline_mean,reps.
void write_rate_csv(std::ostream& os, const RateTable& table);

// Human- and machine-readable summary of a rate run, including the fit and
// (when the distribution declares class parameters) the target exponent.
nlohmann::json rate_summary(const DistributionSpec& spec, const ExperimentConfig& config,
                            const RateTable& table, const RateFit& fit);

// Privatized-report container file. Layout:
//   line 1: d,h,alpha,half,G
//   line 2: the five values (half is "density" or "label")
//   line 3+: one client per line, G^d comma-separated cell values
struct ReportBundle {
  GridSpec grid{1, 1.0};
  double alpha = 1.0;
  Half half = Half::density;
  std::vector<std::vector<double>> rows;
};
void write_report_file(std::ostream& os, const GridSpec& grid, double alpha, Half half,
                       std::span<const std::vector<double>> rows);
ReportBundle read_report_file(std::istream& is);

// Fitted-model file. Layout:
//   line 1: d,h,n,G
//   line 2: the four values (n is the per-half client count)
//   line 3: G^d comma-separated statistic values
void write_model_csv(std::ostream& os, const ClassifierModel& model);
ClassifierModel read_model_csv(std::istream& is);

// Labeled points: one point per line, d coordinates then a 0/1 label.
// The dimension is inferred from the first row.
std::vector<LabeledPoint> read_labeled_points(std::istream& is);
// Unlabeled points with exactly d coordinates per line.
std::vector<std::vector<double>> read_points(std::istream& is, int d);

// Command-line entry point; returns the process exit code
// (0 success, 1 failed audit checks, 2 configuration or input errors).
int cli_main(int argc, const char* const* argv);

}  // namespace ldp

#endif  // LDP_HARNESS_HPP_
