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
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "ldp/classifier.hpp"
#include "ldp/core.hpp"
#include "ldp/harness.hpp"
#include "ldp/synthgen.hpp"

namespace ldp {
namespace {

nlohmann::json minimal_config() {
  return nlohmann::json{
      {"seed", 3},
      {"alpha", 1.0},
      {"n_grid", {256, 512}},
      {"replications", 4},
      {"bandwidth", {{"rule", "default"}, {"c", 1.0}}},
      {"evaluation", {{"method", "quadrature"}, {"nodes", 1025}}},
      {"distribution",
       {{"family", "step"},
        {"d", 1},
        {"beta", 1.0},
        {"L", 30.0},
        {"level", 0.2}}},
  };
}

TEST_CASE("experiment config parses, validates, and round-trips") {
  ExperimentConfig cfg = ExperimentConfig::from_json(minimal_config());
  CHECK_EQ(cfg.seed, 3u);
  CHECK_EQ(cfg.n_grid, std::vector<std::size_t>{256, 512});
  CHECK_EQ(cfg.bandwidth.kind, BandwidthRule::Kind::default_rule);
  CHECK_EQ(cfg.evaluation.nodes, 1025u);
  CHECK_NOTHROW(cfg.validate());
  CHECK_EQ(ExperimentConfig::from_json(cfg.to_json()).to_json(), cfg.to_json());
}

TEST_CASE("experiment config rejects malformed documents") {
  nlohmann::json doc = minimal_config();
  doc["n_grid"] = {512, 256};  // not increasing
  CHECK_THROWS_AS(ExperimentConfig::from_json(doc), ConfigError);
  doc = minimal_config();
  doc["surprise"] = 1;  // unknown key
  CHECK_THROWS_AS(ExperimentConfig::from_json(doc), ConfigError);
  doc = minimal_config();
  doc["bandwidth"]["rule"] = "magic";
  CHECK_THROWS_AS(ExperimentConfig::from_json(doc), ConfigError);
  doc = minimal_config();
  doc["alpha"] = 0.0;
  CHECK_THROWS_AS(ExperimentConfig::from_json(doc), ConfigError);
  doc = minimal_config();
  doc["threads"] = 0;
  CHECK_THROWS_AS(ExperimentConfig::from_json(doc), ConfigError);
  doc = minimal_config();
  doc.erase("distribution");
  CHECK_THROWS_AS(ExperimentConfig::from_json(doc), ConfigError);
}

TEST_CASE("bandwidth selection honors the rule and declared class") {
  ClassParams declared;
  declared.L = 30.0;
  declared.mu = 0.04;
  declared.beta = 1.0;
  PrivacyBudget one(1.0);
  BandwidthRule theo{BandwidthRule::Kind::theoretical, 1.0};
  // (n L^2 mu^2)^{-1/4} = (1024 * 1.44)^{-1/4}.
  CHECK_EQ(bandwidth_for(theo, 1024, one, declared, 1),
           doctest::Approx(std::pow(1024.0 * 1.44, -0.25)));
  BandwidthRule def{BandwidthRule::Kind::default_rule, 0.7};
  CHECK_EQ(bandwidth_for(def, 1024, one, declared, 1),
           doctest::Approx(0.7 * std::pow(1024.0, -0.25)));
  // Baseline sees all 2n points: c_b (2n)^{-1/(2 beta + d)}.
  CHECK_EQ(baseline_bandwidth(512, 1.0, 1, 1.0), doctest::Approx(std::pow(1024.0, -1.0 / 3.0)));
}

TEST_CASE("rate fit recovers planted exponents exactly") {
  auto planted = [](double slope, double intercept, std::span<const std::size_t> ns) {
    RateTable table;
    for (std::size_t n : ns) {
      RateRow row;
      row.n = n;
      row.alpha = 1.0;
      row.mean_excess = std::exp(intercept + slope * std::log(static_cast<double>(n)));
      row.reps = 1;
      table.rows.push_back(row);
    }
    return table;
  };
  const std::vector<std::size_t> ns = {1024, 2048, 4096, 8192};
  RateFit fit = fit_rate(planted(-0.25, 1.3, ns));
  CHECK_EQ(fit.slope, doctest::Approx(-0.25).epsilon(1e-12));
  CHECK_EQ(fit.intercept, doctest::Approx(1.3).epsilon(1e-9));
  CHECK_EQ(fit.r_squared, doctest::Approx(1.0).epsilon(1e-12));
  CHECK_EQ(fit.rows_used, 4u);

  CHECK_EQ(fit_rate(planted(-0.5, 0.0, ns)).slope, doctest::Approx(-0.5).epsilon(1e-12));
  CHECK_EQ(fit_rate(planted(0.0, -2.0, ns)).slope, doctest::Approx(0.0));

  // Two points determine the line exactly.
  const std::vector<std::size_t> two = {4096, 262144};
  RateFit line = fit_rate(planted(-0.125, 0.4, two));
  CHECK_EQ(line.slope, doctest::Approx(-0.125).epsilon(1e-12));
  CHECK_EQ(line.rows_used, 2u);
}

TEST_CASE("rate fit skips nonpositive means and needs two usable rows") {
  RateTable table;
  for (std::size_t i = 0; i < 3; ++i) {
    RateRow row;
    row.n = 1u << (10 + i);
    row.alpha = 1.0;
    row.mean_excess = (i == 1) ? 0.0 : std::pow(static_cast<double>(row.n), -0.25);
    row.reps = 1;
    table.rows.push_back(row);
  }
  RateFit fit = fit_rate(table);
  CHECK_EQ(fit.rows_used, 2u);
  CHECK_EQ(fit.slope, doctest::Approx(-0.25).epsilon(1e-12));

  table.rows[0].mean_excess = -1.0;
  CHECK_THROWS_AS(fit_rate(table), ConfigError);
}

TEST_CASE("format_double round-trips doubles through text exactly") {
  for (double v : {0.1, 1.0 / 3.0, 1e-17, 123456.789, -0.0412, 2.0}) {
    const std::string s = format_double(v);
    CHECK_EQ(std::stod(s), v);
  }
}

TEST_CASE("report files round-trip bit-exactly") {
  GridSpec g(1, 0.25);
  std::vector<std::vector<double>> rows = {
      {0.25, -1.5, 3.0, 1.0 / 3.0, -0.1},
      {1e-9, 2e9, -0.75, 0.0, 5.5},
  };
  std::stringstream ss;
  write_report_file(ss, g, 0.5, Half::label, rows);
  ReportBundle bundle = read_report_file(ss);
  CHECK_EQ(bundle.half, Half::label);
  CHECK_EQ(bundle.alpha, 0.5);
  CHECK_EQ(bundle.grid, g);
  CHECK_EQ(bundle.rows, rows);

  std::stringstream bad("x,y\n");
  CHECK_THROWS_AS(read_report_file(bad), ConfigError);
  std::stringstream short_row("d,h,alpha,half,G\n1,0.25,1,density,5\n1,2,3\n");
  CHECK_THROWS_AS(read_report_file(short_row), ConfigError);

  std::vector<std::vector<double>> mis = {{1.0}};
  std::stringstream sink;
  CHECK_THROWS_AS(write_report_file(sink, g, 0.5, Half::density, mis), SizeError);
}

TEST_CASE("model files round-trip the fitted statistic") {
  GridSpec g(2, 0.5);
  std::vector<double> stat(g.cell_count());
  for (std::size_t j = 0; j < stat.size(); ++j) {
    stat[j] = std::sin(static_cast<double>(j)) / 7.0;
  }
  ClassifierModel model(g, stat, 37);
  std::stringstream ss;
  write_model_csv(ss, model);
  ClassifierModel back = read_model_csv(ss);
  CHECK_EQ(back.grid(), g);
  CHECK_EQ(back.half_size(), 37u);
  CHECK_EQ(back.statistic(), stat);
}

TEST_CASE("labeled point reader infers dimension and validates labels") {
  std::stringstream ok("0.1,0.2,1\n0.5,0.5,0\n");
  std::vector<LabeledPoint> pts = read_labeled_points(ok);
  REQUIRE_EQ(pts.size(), 2u);
  CHECK_EQ(pts[0].x.size(), 2u);
  CHECK_EQ(pts[0].y, 1);

  std::stringstream bad_label("0.1,2\n");
  CHECK_THROWS_AS(read_labeled_points(bad_label), ConfigError);
  std::stringstream empty("");
  CHECK_THROWS_AS(read_labeled_points(empty), ConfigError);
  std::stringstream ragged("0.1,0.2,1\n0.5,0\n");
  CHECK_THROWS_AS(read_labeled_points(ragged), ConfigError);

  std::stringstream plain("0.25,0.75\n0.5,0.5\n");
  std::vector<std::vector<double>> xs = read_points(plain, 2);
  CHECK_EQ(xs.size(), 2u);
  std::stringstream wrong("0.25,0.75\n");
  CHECK_THROWS_AS(read_points(wrong, 3), ConfigError);
}

TEST_CASE("replications are deterministic in (seed, rep) and vary across reps") {
  ExperimentConfig cfg = ExperimentConfig::from_json(minimal_config());
  DistributionSpec spec = spec_from_json(cfg.distribution);
  RepResult a = run_replication(spec, cfg, 256, 2);
  RepResult b = run_replication(spec, cfg, 256, 2);
  CHECK_EQ(a.excess_private, b.excess_private);
  CHECK_EQ(a.excess_baseline, b.excess_baseline);
  RepResult c = run_replication(spec, cfg, 256, 3);
  CHECK_NE(a.excess_private, c.excess_private);
}

TEST_CASE("rate experiment output is byte-identical across worker counts") {
  ExperimentConfig cfg = ExperimentConfig::from_json(minimal_config());
  DistributionSpec spec = spec_from_json(cfg.distribution);

  cfg.threads = 1;
  RateTable serial = run_rate_experiment(spec, cfg);
  cfg.threads = 4;
  RateTable parallel = run_rate_experiment(spec, cfg);

  std::stringstream a, b;
  write_rate_csv(a, serial);
  write_rate_csv(b, parallel);
  CHECK_EQ(a.str(), b.str());
  CHECK(a.str().rfind("n,alpha,h,mean_excess,stderr,baseline_mean,reps\n", 0) == 0);

  REQUIRE_EQ(serial.rows.size(), 2u);
  CHECK_EQ(serial.rows[0].n, 256u);
  CHECK_EQ(serial.rows[0].reps, 4u);
  REQUIRE_EQ(serial.replicates.size(), 2u);
  CHECK_EQ(serial.replicates[0].size(), 4u);

  nlohmann::json summary = rate_summary(spec, cfg, serial, fit_rate(serial));
  CHECK(summary.contains("rows"));
  CHECK(summary.contains("fit"));
  CHECK_EQ(summary["fit"]["rows_used"].get<int>(), 2);
  CHECK_EQ(summary["target_slope"].get<double>(), doctest::Approx(-0.25));
}

}  // namespace
}  // namespace ldp
