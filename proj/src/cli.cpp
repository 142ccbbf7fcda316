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
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ldp/audit.hpp"
#include "ldp/harness.hpp"
#include "ldp/mechanism.hpp"

namespace ldp {
namespace {

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file: " + path);
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw ConfigError("failed while writing: " + path);
}

// Writes `text` to the file at `path`, or to stdout when path is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out = open_output(path);
  out << text;
  finish_output(out, path);
}

struct PrivatizeArgs {
  std::string in;
  double h = 0.5;
  double alpha = 1.0;
  bool aggregate_only = false;
};

int run_privatize(const PrivatizeArgs& args, std::uint64_t seed, const std::string& out) {
  std::ifstream in(args.in);
  if (!in) throw ConfigError("cannot open file: " + args.in);
  const std::vector<LabeledPoint> points = read_labeled_points(in);
  const int d = static_cast<int>(points.front().x.size());
  const GridSpec grid(d, args.h);
  const PrivacyBudget budget(args.alpha);
  const std::size_t n = points.size() / 2;
  if (n == 0) throw ConfigError("privatize: need at least 2 points (one per half)");
  if (points.size() % 2 != 0) {
    std::cerr << "privatize: odd point count, discarding the last point\n";
  }

  const RngStream master(seed);
  std::vector<double> buffer;
  if (args.aggregate_only) {
    Aggregator agg(grid);
    for (std::size_t i = 1; i <= 2 * n; ++i) {
      RngStream client = master.substream(i);
      const LabeledPoint& p = points[i - 1];
      if (i <= n) {
        privatize_density_into(p.x, grid, budget, client, buffer);
        agg.add_density(buffer);
      } else {
        privatize_label_into(p, grid, budget, client, buffer);
        agg.add_label(buffer);
      }
    }
    std::ostringstream os;
    write_model_csv(os, agg.finish());
    emit(out, os.str());
    return 0;
  }

  if (out.empty()) {
    throw ConfigError("privatize: --out stem is required unless --aggregate-only is set");
  }
  std::vector<std::vector<double>> density_rows;
  std::vector<std::vector<double>> label_rows;
  density_rows.reserve(n);
  label_rows.reserve(n);
  for (std::size_t i = 1; i <= 2 * n; ++i) {
    RngStream client = master.substream(i);
    const LabeledPoint& p = points[i - 1];
    if (i <= n) {
      privatize_density_into(p.x, grid, budget, client, buffer);
      density_rows.push_back(buffer);
    } else {
      privatize_label_into(p, grid, budget, client, buffer);
      label_rows.push_back(buffer);
    }
  }
  {
    const std::string path = out + ".density.rpt";
    std::ofstream os = open_output(path);
    write_report_file(os, grid, args.alpha, Half::density, density_rows);
    finish_output(os, path);
  }
  {
    const std::string path = out + ".label.rpt";
    std::ofstream os = open_output(path);
    write_report_file(os, grid, args.alpha, Half::label, label_rows);
    finish_output(os, path);
  }
  return 0;
}

int run_classify(const std::string& model_path, const std::string& points_path,
                 const std::string& out) {
  std::ifstream model_in(model_path);
  if (!model_in) throw ConfigError("cannot open file: " + model_path);
  const ClassifierModel model = read_model_csv(model_in);
  std::ifstream points_in(points_path);
  if (!points_in) throw ConfigError("cannot open file: " + points_path);
  const std::vector<std::vector<double>> points =
      read_points(points_in, model.grid().dimension());
  std::ostringstream os;
  for (const std::vector<double>& x : points) os << classify(x, model) << '\n';
  emit(out, os.str());
  return 0;
}

int run_simulate(const ExperimentConfig& config, std::size_t n, std::size_t rep,
                 const std::string& out) {
  const DistributionSpec spec = spec_from_json(config.distribution);
  const std::size_t half = n != 0 ? n : config.n_grid.front();
  const RepResult result = run_replication(spec, config, half, rep);
  const PrivacyBudget budget(config.alpha);
  const ClassParams& declared = *spec.declared_params();
  nlohmann::json doc = {
      {"seed", config.seed},
      {"rep", rep},
      {"n", half},
      {"alpha", config.alpha},
      {"h", bandwidth_for(config.bandwidth, half, budget, declared, spec.dimension())},
      {"baseline_h",
       baseline_bandwidth(half, declared.beta, spec.dimension(), config.baseline_c)},
      {"excess_private", result.excess_private},
      {"excess_baseline", result.excess_baseline},
  };
  emit(out, doc.dump(2) + "\n");
  return 0;
}

int run_rate(const ExperimentConfig& config, const std::string& out_flag) {
  const DistributionSpec spec = spec_from_json(config.distribution);
  const RateTable table = run_rate_experiment(spec, config);

  nlohmann::json summary;
  bool have_fit = false;
  RateFit fit;
  try {
    fit = fit_rate(table);
    have_fit = true;
    summary = rate_summary(spec, config, table, fit);
  } catch (const ConfigError& e) {
    summary = rate_summary(spec, config, table, RateFit{});
    summary["fit"] = nullptr;
    summary["fit_error"] = e.what();
  }

  std::string stem = !out_flag.empty() ? out_flag : config.out;
  if (stem.empty()) stem = "rate";
  {
    const std::string path = stem + ".csv";
    std::ofstream os = open_output(path);
    write_rate_csv(os, table);
    finish_output(os, path);
    std::cout << "wrote " << path << '\n';
  }
  {
    const std::string path = stem + ".json";
    std::ofstream os = open_output(path);
    os << summary.dump(2) << '\n';
    finish_output(os, path);
    std::cout << "wrote " << path << '\n';
  }
  if (have_fit) {
    std::cout << "fitted slope " << format_double(fit.slope) << " (r^2 "
              << format_double(fit.r_squared) << ")";
    if (summary.contains("target_slope")) {
      std::cout << ", target " << format_double(summary["target_slope"].get<double>());
    }
    std::cout << '\n';
  } else {
    std::cout << "rate fit unavailable: " << summary["fit_error"].get<std::string>() << '\n';
  }
  return 0;
}

struct AuditArgs {
  double alpha = 1.0;
  bool alpha_given = false;
  double t = 0.5;
  std::size_t reps = 2000;
};

int run_audit(const AuditArgs& args, const ExperimentConfig* config, std::uint64_t seed,
              const std::string& out) {
  // Distribution and privacy level: from the config when given, otherwise a
  // built-in sinusoidal fixture.
  DistributionSpec spec = [&] {
    if (config != nullptr) return spec_from_json(config->distribution);
    SmoothFamilyParams p;
    p.d = 1;
    p.beta = 1.0;
    p.L = 1.5707963267948966;  // pi/2, tight for amplitude 1/4
    p.amplitude = 0.25;
    return make_smooth_family(p);
  }();
  const double alpha = config != nullptr && !args.alpha_given ? config->alpha : args.alpha;
  const PrivacyBudget budget(alpha);
  const int d = spec.dimension();
  const std::size_t n = config != nullptr ? config->n_grid.front() : 512;
  const double h = config != nullptr
                       ? bandwidth_for(config->bandwidth, n, budget, *spec.declared_params(), d)
                       : 0.25;
  const RngStream master(seed);

  nlohmann::json checks = nlohmann::json::array();
  bool all_pass = true;
  auto record = [&](const std::string& name, double value, double bound, bool pass) {
    checks.push_back({{"name", name}, {"value", value}, {"bound", bound}, {"pass", pass}});
    all_pass = all_pass && pass;
  };

  {
    // Disjoint full supports: every axis contributes 2 + 2 differing cells,
    // so the ratio bound attains alpha exactly.
    const GridSpec worst_grid(d, 0.2);
    const std::vector<double> x(static_cast<std::size_t>(d), 0.1);
    const std::vector<double> x_alt(static_cast<std::size_t>(d), 0.5);
    const double value = ldp_ratio_bound(x, x_alt, worst_grid, budget);
    record("ratio_bound_worst_case", value, alpha, std::fabs(value - alpha) <= 1e-9);
  }
  {
    RngStream pair_rng = master.substream(1);
    const GridSpec grid(d, h);
    double worst = 0.0;
    std::vector<double> x(static_cast<std::size_t>(d));
    std::vector<double> x_alt(static_cast<std::size_t>(d));
    for (std::size_t p = 0; p < 500; ++p) {
      for (int k = 0; k < d; ++k) {
        x[static_cast<std::size_t>(k)] = pair_rng.uniform01();
        x_alt[static_cast<std::size_t>(k)] = pair_rng.uniform01();
      }
      const int y = pair_rng.uniform01() < 0.5 ? 0 : 1;
      const int y_alt = pair_rng.uniform01() < 0.5 ? 0 : 1;
      worst = std::max(worst, ldp_ratio_bound(x, x_alt, grid, budget));
      worst = std::max(worst, ldp_ratio_bound(Half::label, x, y, x_alt, y_alt, grid, budget));
    }
    record("ratio_bound_random_pairs", worst, alpha, worst <= alpha + 1e-12);
  }
  {
    const GridSpec grid(d, h);
    const std::vector<double> x(static_cast<std::size_t>(d), 0.3);
    const double value = ldp_ratio_bound(Half::label, x, 1, x, 1, grid, budget);
    record("ratio_bound_identical_inputs", value, 0.0, value == 0.0);
  }
  if (d <= 2) {
    const GridSpec grid(d, h);
    const std::vector<double> x0(static_cast<std::size_t>(d), 0.5);
    const TailCheckResult tail =
        tail_bound_check(spec, grid, budget, n, x0, args.t, args.reps, master.substream(2));
    record("tail_upper", tail.upper_tail, tail.bound + tail.slack,
           tail.upper_tail <= tail.bound + tail.slack);
    record("tail_lower", tail.lower_tail, tail.bound + tail.slack,
           tail.lower_tail <= tail.bound + tail.slack);
  }

  nlohmann::json verdict = {{"alpha", alpha}, {"checks", checks}, {"pass", all_pass}};
  emit(out, verdict.dump(2) + "\n");
  if (!out.empty()) {
    std::cout << (all_pass ? "audit passed" : "audit FAILED") << ", verdict in " << out << '\n';
  }
  return all_pass ? 0 : 1;
}

struct GenLbArgs {
  int d = 1;
  int q = 4;
  int m = 2;
  double w = 0.005;
  std::string sigma;
  double C_phi = 1.0 / 12.0;
  double beta = 1.0;
  double gamma = 1.0;
  double C0 = 1.0;
  double L = 1.0;
};

int run_genlb(const GenLbArgs& args, const std::string& out) {
  LowerBoundParams params;
  params.q = args.q;
  params.m = args.m;
  params.w = args.w;
  params.C_phi = args.C_phi;
  params.beta = args.beta;
  params.gamma = args.gamma;
  params.C0 = args.C0;
  params.L = args.L;
  if (args.sigma.empty()) {
    params.sigma.resize(static_cast<std::size_t>(std::max(args.m, 0)));
    for (int i = 0; i < args.m; ++i) params.sigma[static_cast<std::size_t>(i)] = i % 2 == 0 ? 1 : -1;
  } else {
    for (char c : args.sigma) {
      if (c == '+') {
        params.sigma.push_back(1);
      } else if (c == '-') {
        params.sigma.push_back(-1);
      } else {
        throw ConfigError("genlb: --sigma must be a string of '+' and '-'");
      }
    }
  }
  const DistributionSpec spec = make_lower_bound_family(params, args.d);
  emit(out, spec.document().dump(2) + "\n");
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Locally private grid classification toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global --seed/--config/--out may follow the subcommand

  std::uint64_t seed = 1;
  std::string config_path;
  std::string out_path;
  app.add_option("--seed", seed, "Master RNG seed (default 1; a config's seed wins unless set)");
  app.add_option("--config", config_path, "Experiment config (JSON)");
  app.add_option("--out", out_path, "Output path or stem (default: stdout where applicable)");

  PrivatizeArgs priv_args;
  CLI::App* priv = app.add_subcommand("privatize", "Privatize a labeled-point CSV into reports");
  priv->set_help_flag("--help", "Print help");  // frees -h for the bandwidth option
  priv->add_option("--in", priv_args.in, "Input CSV: x_1,...,x_d,y per line")->required();
  priv->add_option("--h", priv_args.h, "Grid bandwidth in (0, 1]");
  priv->add_option("--alpha", priv_args.alpha, "Per-individual privacy budget");
  priv->add_flag("--aggregate-only", priv_args.aggregate_only,
                 "Stream reports into per-cell sums and emit the fitted model");

  std::string model_path;
  std::string points_path;
  CLI::App* cls = app.add_subcommand("classify", "Label points with a fitted model");
  cls->add_option("--model", model_path, "Model CSV from privatize --aggregate-only")->required();
  cls->add_option("--points", points_path, "Input CSV: x_1,...,x_d per line")->required();

  std::size_t sim_n = 0;
  std::size_t sim_rep = 0;
  CLI::App* sim = app.add_subcommand("simulate", "Run one replication and print a JSON record");
  sim->add_option("--n", sim_n, "Half-sample size (default: first n_grid entry)");
  sim->add_option("--rep", sim_rep, "Replication index (default 0)");

  int rate_threads = 0;
  CLI::App* rate = app.add_subcommand("rate", "Full rate experiment: CSV table + JSON summary");
  rate->add_option("--threads", rate_threads, "Worker threads (overrides the config)");

  AuditArgs audit_args;
  CLI::App* audit_cmd =
      app.add_subcommand("audit", "Privacy and tail checks; nonzero exit on failure");
  CLI::Option* audit_alpha =
      audit_cmd->add_option("--alpha", audit_args.alpha, "Privacy budget to certify");
  audit_cmd->add_option("--t", audit_args.t, "Tail threshold in (0, 1]");
  audit_cmd->add_option("--reps", audit_args.reps, "Tail simulation replications");

  GenLbArgs lb_args;
  CLI::App* genlb = app.add_subcommand("genlb", "Emit a hard-instance family document");
  genlb->add_option("--d", lb_args.d, "Dimension");
  genlb->add_option("--q", lb_args.q, "Cells per axis on [0, 1/2]");
  genlb->add_option("--m", lb_args.m, "Active cells");
  genlb->add_option("--w", lb_args.w, "Mass per active ball");
  genlb->add_option("--sigma", lb_args.sigma, "Signs, e.g. '+-' (default alternating)");
  genlb->add_option("--c-phi", lb_args.C_phi, "Bump scale");
  genlb->add_option("--beta", lb_args.beta, "Smoothness exponent");
  genlb->add_option("--gamma", lb_args.gamma, "Margin exponent");
  genlb->add_option("--c0", lb_args.C0, "Margin constant");
  genlb->add_option("--L", lb_args.L, "Smoothness constant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    audit_args.alpha_given = audit_alpha->count() > 0;
    const bool seed_given = app.count("--seed") > 0;

    ExperimentConfig config;
    bool have_config = false;
    if (!config_path.empty()) {
      config = ExperimentConfig::from_json(load_json_file(config_path));
      have_config = true;
      if (seed_given) config.seed = seed;
    }

    if (priv->parsed()) return run_privatize(priv_args, have_config ? config.seed : seed, out_path);
    if (cls->parsed()) return run_classify(model_path, points_path, out_path);
    if (sim->parsed()) {
      if (!have_config) throw ConfigError("simulate: --config is required");
      return run_simulate(config, sim_n, sim_rep, out_path);
    }
    if (rate->parsed()) {
      if (!have_config) throw ConfigError("rate: --config is required");
      if (rate_threads > 0) config.threads = rate_threads;
      return run_rate(config, out_path);
    }
    if (audit_cmd->parsed()) {
      return run_audit(audit_args, have_config ? &config : nullptr,
                       have_config ? config.seed : seed, out_path);
    }
    if (genlb->parsed()) return run_genlb(lb_args, out_path);
    throw ConfigError("no subcommand selected");
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace ldp
