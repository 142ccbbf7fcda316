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

#include "ldp/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <mutex>
#include <ostream>
#include <thread>
#include <utility>

#include "ldp/mechanism.hpp"
#include "ldp/rng.hpp"

namespace ldp {
namespace {

void require_keys(const nlohmann::json& doc, std::initializer_list<const char*> allowed,
                  const char* where) {
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError(std::string(where) + ": unknown key '" + it.key() + "'");
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double(const std::string& field, const char* where) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ConfigError(std::string(where) + ": malformed number '" + field + "'");
  }
  return v;
}

long long parse_integer(const std::string& field, const char* where) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const long long v = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0') {
    throw ConfigError(std::string(where) + ": malformed integer '" + field + "'");
  }
  return v;
}

// Reads a line and strips a trailing carriage return. Returns false at EOF.
bool next_line(std::istream& is, std::string& line) {
  if (!std::getline(is, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

const char* half_name(Half half) { return half == Half::density ? "density" : "label"; }

}  // namespace

void ExperimentConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("config: alpha must be > 0");
  if (n_grid.empty()) throw ConfigError("config: n_grid must be nonempty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] == 0) throw ConfigError("config: n_grid entries must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
      throw ConfigError("config: n_grid must be strictly increasing");
    }
  }
  if (replications == 0) throw ConfigError("config: replications must be >= 1");
  if (!(bandwidth.c > 0.0) || !std::isfinite(bandwidth.c)) {
    throw ConfigError("config: bandwidth.c must be > 0");
  }
  if (evaluation.nodes < 2) throw ConfigError("config: evaluation.nodes must be >= 2");
  if (evaluation.test_points == 0) throw ConfigError("config: evaluation.test_points must be >= 1");
  if (!(baseline_c > 0.0) || !std::isfinite(baseline_c)) {
    throw ConfigError("config: baseline_c must be > 0");
  }
  if (threads < 1 || threads > 1024) throw ConfigError("config: threads must lie in [1, 1024]");
  if (!distribution.is_object() || distribution.empty()) {
    throw ConfigError("config: distribution document required");
  }
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& doc) {
  try {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    require_keys(doc,
                 {"seed", "alpha", "n_grid", "replications", "bandwidth", "evaluation",
                  "baseline_c", "threads", "out", "distribution"},
                 "config");
    ExperimentConfig config;
    if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("alpha")) config.alpha = doc.at("alpha").get<double>();
    config.n_grid = doc.at("n_grid").get<std::vector<std::size_t>>();
    if (doc.contains("replications")) {
      config.replications = doc.at("replications").get<std::size_t>();
    }
    if (doc.contains("bandwidth")) {
      const nlohmann::json& b = doc.at("bandwidth");
      require_keys(b, {"rule", "c"}, "config.bandwidth");
      const std::string rule = b.at("rule").get<std::string>();
      if (rule == "theoretical") {
        config.bandwidth.kind = BandwidthRule::Kind::theoretical;
      } else if (rule == "default") {
        config.bandwidth.kind = BandwidthRule::Kind::default_rule;
      } else {
        throw ConfigError("config.bandwidth.rule must be 'theoretical' or 'default'");
      }
      if (b.contains("c")) config.bandwidth.c = b.at("c").get<double>();
    }
    if (doc.contains("evaluation")) {
      const nlohmann::json& e = doc.at("evaluation");
      require_keys(e, {"method", "nodes", "test_points"}, "config.evaluation");
      const std::string method = e.at("method").get<std::string>();
      if (method == "quadrature") {
        config.evaluation.method = EvaluationSpec::Method::quadrature;
      } else if (method == "mc") {
        config.evaluation.method = EvaluationSpec::Method::mc;
      } else {
        throw ConfigError("config.evaluation.method must be 'quadrature' or 'mc'");
      }
      if (e.contains("nodes")) config.evaluation.nodes = e.at("nodes").get<std::size_t>();
      if (e.contains("test_points")) {
        config.evaluation.test_points = e.at("test_points").get<std::size_t>();
      }
    }
    if (doc.contains("baseline_c")) config.baseline_c = doc.at("baseline_c").get<double>();
    if (doc.contains("threads")) config.threads = doc.at("threads").get<int>();
    if (doc.contains("out")) config.out = doc.at("out").get<std::string>();
    config.distribution = doc.at("distribution");
    config.validate();
    return config;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json doc = {
      {"seed", seed},
      {"alpha", alpha},
      {"n_grid", n_grid},
      {"replications", replications},
      {"bandwidth",
       {{"rule", bandwidth.kind == BandwidthRule::Kind::theoretical ? "theoretical" : "default"},
        {"c", bandwidth.c}}},
      {"evaluation",
       {{"method", evaluation.method == EvaluationSpec::Method::quadrature ? "quadrature" : "mc"},
        {"nodes", evaluation.nodes},
        {"test_points", evaluation.test_points}}},
      {"baseline_c", baseline_c},
      {"threads", threads},
      {"distribution", distribution},
  };
  if (!out.empty()) doc["out"] = out;
  return doc;
}

double bandwidth_for(const BandwidthRule& rule, std::size_t n, PrivacyBudget budget,
                     const ClassParams& declared, int d) {
  if (rule.kind == BandwidthRule::Kind::theoretical) {
    return theoretical_bandwidth(n, budget, declared.L, declared.mu, declared.beta, d);
  }
  return default_bandwidth(n, budget, declared.beta, d, rule.c);
}

double baseline_bandwidth(std::size_t n, double beta, int d, double c_b) {
  if (n == 0) throw ParamError("baseline_bandwidth: n must be >= 1");
  if (!(beta > 0.0)) throw ParamError("baseline_bandwidth: beta must be > 0");
  if (d < 1) throw ParamError("baseline_bandwidth: dimension must be >= 1");
  if (!(c_b > 0.0)) throw ParamError("baseline_bandwidth: c_b must be > 0");
  const double exponent = -1.0 / (2.0 * beta + static_cast<double>(d));
  return std::min(c_b * std::pow(2.0 * static_cast<double>(n), exponent), 1.0);
}

RepResult run_replication(const DistributionSpec& spec, const ExperimentConfig& config,
                          std::size_t n, std::size_t rep_index) {
  if (n == 0) throw ParamError("run_replication: n must be >= 1");
  if (!spec.declared_params()) {
    throw ConfigError("run_replication: distribution lacks declared class parameters");
  }
  const ClassParams& declared = *spec.declared_params();
  const int d = spec.dimension();
  const PrivacyBudget budget(config.alpha);
  const GridSpec grid(d, bandwidth_for(config.bandwidth, n, budget, declared, d));

  const RngStream rep_stream = RngStream(config.seed).substream(rep_index);
  Aggregator agg(grid);
  std::vector<LabeledPoint> raw;
  raw.reserve(2 * n);
  std::vector<LabeledPoint> one;
  one.reserve(1);
  std::vector<double> buffer;
  for (std::size_t i = 1; i <= 2 * n; ++i) {
    RngStream client = rep_stream.substream(i);
    one.clear();
    spec.sample_into(1, client, one);
    const LabeledPoint& p = one.front();
    if (i <= n) {
      privatize_density_into(p.x, grid, budget, client, buffer);
      agg.add_density(buffer);
    } else {
      privatize_label_into(p, grid, budget, client, buffer);
      agg.add_label(buffer);
    }
    raw.push_back(p);
  }
  const ClassifierModel model = agg.finish();
  const RegressogramBaseline baseline(
      raw, GridSpec(d, baseline_bandwidth(n, declared.beta, d, config.baseline_c)));

  RepResult result;
  if (config.evaluation.method == EvaluationSpec::Method::quadrature) {
    result.excess_private = excess_risk_quadrature(
                                spec, [&](std::span<const double> x) { return classify(x, model); },
                                config.evaluation.nodes)
                                .value;
    result.excess_baseline = excess_risk_quadrature(
                                 spec, [&](std::span<const double> x) { return baseline.classify(x); },
                                 config.evaluation.nodes)
                                 .value;
  } else {
    // Paired evaluation: both classifiers score the same fresh test points,
    // drawn from the replication's dedicated evaluation substream.
    RngStream eval = rep_stream.substream(0);
    const std::size_t M = config.evaluation.test_points;
    std::vector<LabeledPoint> batch;
    batch.reserve(1024);
    double sum_private = 0.0;
    double sum_baseline = 0.0;
    std::size_t remaining = M;
    while (remaining > 0) {
      const std::size_t chunk = std::min<std::size_t>(remaining, 1024);
      batch.clear();
      spec.sample_into(chunk, eval, batch);
      for (const LabeledPoint& p : batch) {
        const int oracle = spec.bayes(p.x);
        const double weight = std::fabs(2.0 * spec.eta(p.x) - 1.0);
        if (classify(p.x, model) != oracle) sum_private += weight;
        if (baseline.classify(p.x) != oracle) sum_baseline += weight;
      }
      remaining -= chunk;
    }
    result.excess_private = sum_private / static_cast<double>(M);
    result.excess_baseline = sum_baseline / static_cast<double>(M);
  }
  return result;
}

RateTable run_rate_experiment(const DistributionSpec& spec, const ExperimentConfig& config) {
  config.validate();
  if (!spec.declared_params()) {
    throw ConfigError("run_rate_experiment: distribution lacks declared class parameters");
  }
  const PrivacyBudget budget(config.alpha);
  RateTable table;
  for (std::size_t n : config.n_grid) {
    const std::size_t R = config.replications;
    std::vector<RepResult> reps(R);
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(std::max(config.threads, 1)), R);
    if (workers <= 1) {
      for (std::size_t r = 0; r < R; ++r) reps[r] = run_replication(spec, config, n, r);
    } else {
      std::atomic<std::size_t> next{0};
      std::mutex error_mu;
      std::exception_ptr error;
      auto work = [&] {
        while (true) {
          const std::size_t r = next.fetch_add(1);
          if (r >= R) return;
          try {
            reps[r] = run_replication(spec, config, n, r);
          } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mu);
            if (!error) error = std::current_exception();
            return;
          }
        }
      };
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
      for (std::thread& t : pool) t.join();
      if (error) std::rethrow_exception(error);
    }

    RateRow row;
    row.n = n;
    row.alpha = config.alpha;
    row.h = bandwidth_for(config.bandwidth, n, budget, *spec.declared_params(), spec.dimension());
    row.reps = R;
    double sum = 0.0;
    double sum_baseline = 0.0;
    for (const RepResult& r : reps) {
      sum += r.excess_private;
      sum_baseline += r.excess_baseline;
    }
    row.mean_excess = sum / static_cast<double>(R);
    row.baseline_mean = sum_baseline / static_cast<double>(R);
    double ss = 0.0;
    for (const RepResult& r : reps) {
      const double dev = r.excess_private - row.mean_excess;
      ss += dev * dev;
    }
    row.std_error =
        R > 1 ? std::sqrt(ss / static_cast<double>(R - 1) / static_cast<double>(R)) : 0.0;
    table.rows.push_back(row);
    table.replicates.push_back(std::move(reps));
  }
  return table;
}

RateFit fit_rate(const RateTable& table) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const RateRow& row : table.rows) {
    if (!(row.mean_excess > 0.0)) continue;  // reported via rows_used
    xs.push_back(std::log(static_cast<double>(row.n) * row.alpha * row.alpha));
    ys.push_back(std::log(row.mean_excess));
  }
  if (xs.size() < 2) {
    throw ConfigError("fit_rate: needs at least two rows with positive mean excess risk");
  }
  const double n = static_cast<double>(xs.size());
  double x_bar = 0.0;
  double y_bar = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    x_bar += xs[i];
    y_bar += ys[i];
  }
  x_bar /= n;
  y_bar /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - x_bar) * (xs[i] - x_bar);
    sxy += (xs[i] - x_bar) * (ys[i] - y_bar);
  }
  if (!(sxx > 0.0)) throw ConfigError("fit_rate: degenerate design (all n alpha^2 equal)");

  RateFit fit;
  fit.rows_used = xs.size();
  fit.slope = sxy / sxx;
  fit.intercept = y_bar - fit.slope * x_bar;
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double resid = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += resid * resid;
    ss_tot += (ys[i] - y_bar) * (ys[i] - y_bar);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

std::string format_double(double v) {
  char buf[64];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void write_rate_csv(std::ostream& os, const RateTable& table) {
  os << "n,alpha,h,mean_excess,stderr,baseline_mean,reps\n";
  for (const RateRow& row : table.rows) {
    os << row.n << ',' << format_double(row.alpha) << ',' << format_double(row.h) << ','
       << format_double(row.mean_excess) << ',' << format_double(row.std_error) << ','
       << format_double(row.baseline_mean) << ',' << row.reps << '\n';
  }
}

nlohmann::json rate_summary(const DistributionSpec& spec, const ExperimentConfig& config,
                            const RateTable& table, const RateFit& fit) {
  nlohmann::json rows = nlohmann::json::array();
  for (const RateRow& row : table.rows) {
    rows.push_back({{"n", row.n},
                    {"h", row.h},
                    {"mean_excess", row.mean_excess},
                    {"stderr", row.std_error},
                    {"baseline_mean", row.baseline_mean}});
  }
  nlohmann::json doc = {
      {"alpha", config.alpha},
      {"seed", config.seed},
      {"replications", config.replications},
      {"bandwidth_rule",
       config.bandwidth.kind == BandwidthRule::Kind::theoretical ? "theoretical" : "default"},
      {"rows", rows},
      {"fit",
       {{"slope", fit.slope},
        {"intercept", fit.intercept},
        {"r_squared", fit.r_squared},
        {"rows_used", fit.rows_used}}},
  };
  if (spec.declared_params()) {
    const ClassParams& declared = *spec.declared_params();
    doc["target_slope"] = -rate_exponent(declared.beta, declared.gamma, spec.dimension());
    doc["nonprivate_target_slope"] =
        -nonprivate_rate_exponent(declared.beta, declared.gamma, spec.dimension());
  }
  if (!table.replicates.empty() && !table.replicates.back().empty()) {
    const std::vector<RepResult>& last = table.replicates.back();
    std::size_t wins = 0;
    for (const RepResult& r : last) {
      if (r.excess_baseline < r.excess_private) ++wins;
    }
    doc["baseline_wins_at_largest_n"] =
        static_cast<double>(wins) / static_cast<double>(last.size());
  }
  return doc;
}

void write_report_file(std::ostream& os, const GridSpec& grid, double alpha, Half half,
                       std::span<const std::vector<double>> rows) {
  const PrivacyBudget budget(alpha);  // validates alpha
  (void)budget;
  os << "d,h,alpha,half,G\n";
  os << grid.dimension() << ',' << format_double(grid.bandwidth()) << ',' << format_double(alpha)
     << ',' << half_name(half) << ',' << grid.side() << '\n';
  for (const std::vector<double>& row : rows) {
    if (row.size() != grid.cell_count()) {
      throw SizeError("write_report_file: row length does not match the grid");
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) os << ',';
      os << format_double(row[c]);
    }
    os << '\n';
  }
}

ReportBundle read_report_file(std::istream& is) {
  std::string line;
  if (!next_line(is, line)) throw ConfigError("report file: empty");
  if (line != "d,h,alpha,half,G") throw ConfigError("report file: bad header line");
  if (!next_line(is, line)) throw ConfigError("report file: missing header values");
  const std::vector<std::string> fields = split_csv(line);
  if (fields.size() != 5) throw ConfigError("report file: header needs 5 fields");
  const int d = static_cast<int>(parse_integer(fields[0], "report file d"));
  const double h = parse_double(fields[1], "report file h");
  const double alpha = parse_double(fields[2], "report file alpha");
  Half half = Half::density;
  if (fields[3] == "density") {
    half = Half::density;
  } else if (fields[3] == "label") {
    half = Half::label;
  } else {
    throw ConfigError("report file: half must be 'density' or 'label'");
  }
  const long long side = parse_integer(fields[4], "report file G");

  ReportBundle bundle;
  try {
    bundle.grid = GridSpec(d, h);
    const PrivacyBudget budget(alpha);
    (void)budget;
  } catch (const ParamError& e) {
    throw ConfigError(std::string("report file: ") + e.what());
  }
  if (bundle.grid.side() != side) throw ConfigError("report file: G disagrees with ceil(1/h)+1");
  bundle.alpha = alpha;
  bundle.half = half;
  while (next_line(is, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv(line);
    if (cells.size() != bundle.grid.cell_count()) {
      throw ConfigError("report file: row length does not match G^d");
    }
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      row[c] = parse_double(cells[c], "report file cell");
      if (!std::isfinite(row[c])) throw ConfigError("report file: non-finite cell value");
    }
    bundle.rows.push_back(std::move(row));
  }
  return bundle;
}

void write_model_csv(std::ostream& os, const ClassifierModel& model) {
  os << "d,h,n,G\n";
  os << model.grid().dimension() << ',' << format_double(model.grid().bandwidth()) << ','
     << model.half_size() << ',' << model.grid().side() << '\n';
  const std::vector<double>& t = model.statistic();
  for (std::size_t c = 0; c < t.size(); ++c) {
    if (c > 0) os << ',';
    os << format_double(t[c]);
  }
  os << '\n';
}

ClassifierModel read_model_csv(std::istream& is) {
  std::string line;
  if (!next_line(is, line)) throw ConfigError("model file: empty");
  if (line != "d,h,n,G") throw ConfigError("model file: bad header line");
  if (!next_line(is, line)) throw ConfigError("model file: missing header values");
  const std::vector<std::string> fields = split_csv(line);
  if (fields.size() != 4) throw ConfigError("model file: header needs 4 fields");
  const int d = static_cast<int>(parse_integer(fields[0], "model file d"));
  const double h = parse_double(fields[1], "model file h");
  const long long n = parse_integer(fields[2], "model file n");
  const long long side = parse_integer(fields[3], "model file G");
  if (n < 1) throw ConfigError("model file: n must be >= 1");
  GridSpec grid{1, 1.0};
  try {
    grid = GridSpec(d, h);
  } catch (const ParamError& e) {
    throw ConfigError(std::string("model file: ") + e.what());
  }
  if (grid.side() != side) throw ConfigError("model file: G disagrees with ceil(1/h)+1");
  if (!next_line(is, line)) throw ConfigError("model file: missing statistic row");
  const std::vector<std::string> cells = split_csv(line);
  if (cells.size() != grid.cell_count()) {
    throw ConfigError("model file: statistic length does not match G^d");
  }
  std::vector<double> t(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    t[c] = parse_double(cells[c], "model file cell");
    if (!std::isfinite(t[c])) throw ConfigError("model file: non-finite statistic value");
  }
  return ClassifierModel(grid, std::move(t), static_cast<std::size_t>(n));
}

std::vector<LabeledPoint> read_labeled_points(std::istream& is) {
  std::vector<LabeledPoint> points;
  std::string line;
  std::size_t expected_fields = 0;
  while (next_line(is, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (expected_fields == 0) {
      if (fields.size() < 2) {
        throw ConfigError("points file: rows need at least one coordinate and a label");
      }
      expected_fields = fields.size();
    }
    if (fields.size() != expected_fields) {
      throw ConfigError("points file: inconsistent field count");
    }
    LabeledPoint p;
    p.x.resize(expected_fields - 1);
    for (std::size_t k = 0; k + 1 < fields.size(); ++k) {
      p.x[k] = parse_double(fields[k], "points file coordinate");
    }
    const double y = parse_double(fields.back(), "points file label");
    if (y != 0.0 && y != 1.0) throw ConfigError("points file: labels must be 0 or 1");
    p.y = static_cast<int>(y);
    points.push_back(std::move(p));
  }
  if (points.empty()) throw ConfigError("points file: no data rows");
  return points;
}

std::vector<std::vector<double>> read_points(std::istream& is, int d) {
  if (d < 1) throw ParamError("read_points: dimension must be >= 1");
  std::vector<std::vector<double>> points;
  std::string line;
  while (next_line(is, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != static_cast<std::size_t>(d)) {
      throw ConfigError("points file: expected exactly d coordinates per row");
    }
    std::vector<double> x(fields.size());
    for (std::size_t k = 0; k < fields.size(); ++k) {
      x[k] = parse_double(fields[k], "points file coordinate");
    }
    points.push_back(std::move(x));
  }
  if (points.empty()) throw ConfigError("points file: no data rows");
  return points;
}

}  // namespace ldp
