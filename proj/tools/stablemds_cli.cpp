// Command-line front end: stabilize, oosp, sweep, trajectory.
//
// Exit codes: 0 ok, 1 configuration, 2 I/O, 3 numerical failure,
// 4 degenerate geometry, 5 insufficient anchors.

#include "stablemds/io.hpp"
#include "stablemds/stablemds.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace stablemds;

namespace {

struct RunConfig {
  std::string input;
  std::vector<std::string> predictors;
  std::string response;
  std::vector<double> thresholds;
  std::vector<std::string> labels = default_bin_labels();
  std::vector<std::string> metrics{"euclidean"};
  int realizations = 100;
  std::int64_t master_seed = 0;
  std::int64_t base_seed = 1825;
  int max_iterations = 300;
  int initializations = 4;
  double tolerance = 1e-6;
  double scale_tolerance = 0.05;
  double distortion_factor = 0.5;
  bool rescale = false;
  bool strict_rotation = false;
  std::string out;
  int threads = 1;
  int sample_size = 0;
  std::int64_t subset_seed = 0;
  std::int64_t oosp_seed = 0;
  std::vector<double> oosp_values;
  std::vector<std::string> sizes;
  std::vector<double> multipliers{0.9, 0.95, 1.0, 1.05, 1.1};
  std::vector<std::string> features;
};

void warn(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

Metric single_metric(const RunConfig& c) {
  if (c.metrics.size() != 1) throw Error(ErrorKind::Config, "this command takes exactly one metric");
  return parse_metric(c.metrics.front());
}

PipelineConfig pipeline_config(const RunConfig& c) {
  PipelineConfig p;
  p.ensemble.realization_count = c.realizations;
  p.ensemble.master_seed = c.master_seed;
  p.ensemble.base_seed = c.base_seed;
  p.ensemble.max_iterations = c.max_iterations;
  p.ensemble.initializations = c.initializations;
  p.ensemble.convergence_tolerance = c.tolerance;
  p.ensemble.scale_tolerance = c.scale_tolerance;
  p.ensemble.rescale = c.rescale;
  p.ensemble.threads = std::max(1, c.threads);
  p.distortion_factor = c.distortion_factor;
  p.reflection = c.strict_rotation ? ReflectionPolicy::RotationOnly : ReflectionPolicy::Allow;
  p.ensemble.validate();
  return p;
}

// Threads are left out: they never change results, and the echo is part of the
// summary record that must be identical across --threads values.
json config_echo(const RunConfig& c, const std::string& command) {
  json j;
  j["command"] = command;
  j["input"] = c.input;
  j["predictors"] = c.predictors;
  j["response"] = c.response;
  j["thresholds"] = c.thresholds;
  j["labels"] = c.labels;
  j["metric"] = c.metrics.size() == 1 ? json(c.metrics.front()) : json(c.metrics);
  j["realizations"] = c.realizations;
  j["master_seed"] = c.master_seed;
  j["base_seed"] = c.base_seed;
  j["max_iterations"] = c.max_iterations;
  j["initializations"] = c.initializations;
  j["convergence_tolerance"] = c.tolerance;
  j["scale_tolerance"] = c.scale_tolerance;
  j["distortion_factor"] = c.distortion_factor;
  j["rescale"] = c.rescale;
  j["strict_rotation"] = c.strict_rotation;
  j["sample_size"] = c.sample_size;
  j["subset_seed"] = c.subset_seed;
  if (command == "oosp" || command == "trajectory") {
    if (c.oosp_values.empty()) j["oosp_seed"] = c.oosp_seed;
    else j["oosp_values"] = c.oosp_values;
  }
  if (command == "sweep") j["sizes"] = c.sizes;
  if (command == "trajectory") {
    j["multipliers"] = c.multipliers;
    j["features"] = c.features;
  }
  return j;
}

RawDataset load_input(const RunConfig& c, std::vector<Eigen::Index>& rows) {
  if (c.predictors.empty()) throw Error(ErrorKind::Config, "--predictors is required");
  RawDataset full = load_table(fs::path(c.input), Schema{c.predictors, c.response});
  rows.clear();
  if (c.sample_size > 0) {
    rows = draw_subset(full.n_samples(), c.sample_size, c.subset_seed);
    return full.subset(rows);
  }
  for (Eigen::Index i = 0; i < full.n_samples(); ++i) rows.push_back(i);
  return full;
}

std::vector<int> parse_sizes(const std::vector<std::string>& tokens) {
  std::vector<int> out;
  for (const auto& t : tokens) {
    const auto dots = t.find("..");
    try {
      if (dots == std::string::npos) {
        out.push_back(std::stoi(t));
        continue;
      }
      const int lo = std::stoi(t.substr(0, dots));
      std::string rest = t.substr(dots + 2);
      int step = 1;
      if (const auto colon = rest.find(':'); colon != std::string::npos) {
        step = std::stoi(rest.substr(colon + 1));
        rest = rest.substr(0, colon);
      }
      const int hi = std::stoi(rest);
      if (step < 1) throw Error(ErrorKind::Config, "size step must be positive");
      for (int v = lo; v <= hi; v += step) out.push_back(v);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Config, "cannot parse size token '" + t + "'");
    }
  }
  return out;
}

/// Raw OOSP record: explicit values, or a seeded draw inside the 95% intervals.
Eigen::RowVectorXd make_oosp(const RunConfig& c, const RawDataset& data) {
  if (c.oosp_values.empty()) return generate_oosp(data, c.oosp_seed);
  if (static_cast<Eigen::Index>(c.oosp_values.size()) != data.n_predictors()) {
    throw Error(ErrorKind::Config, "--oosp-values needs one value per predictor");
  }
  Eigen::RowVectorXd rec(data.n_predictors());
  for (Eigen::Index j = 0; j < rec.size(); ++j) {
    rec(j) = c.oosp_values[static_cast<std::size_t>(j)];
    const FeatureInterval iv = feature_interval(data.predictors.col(j));
    if (!iv.contains(rec(j))) {
      std::ostringstream msg;
      msg << "OOSP " << data.predictor_names[static_cast<std::size_t>(j)] << " = " << rec(j)
          << " lies outside the 95% interval [" << iv.lower << ", " << iv.upper
          << "]; the stabilization premise does not hold for tail samples";
      warn(msg.str());
    }
  }
  return rec;
}

void write_categories(const fs::path& path, const RunConfig& c, const RawDataset& data,
                      const std::vector<Eigen::Index>& rows) {
  if (!data.has_response() || c.thresholds.empty()) return;
  const CategoricalResponse cat = bin_response(data.response, c.thresholds, c.labels);
  std::ostringstream out;
  out << "sample_id,source_row," << data.response_name << ",label\n";
  for (Eigen::Index i = 0; i < data.n_samples(); ++i) {
    out << i << ',' << rows[static_cast<std::size_t>(i)] << ',' << format_number(data.response(i))
        << ',' << cat.label_of(static_cast<std::size_t>(i)) << '\n';
  }
  io::write_text(path, out.str());
}

json ensemble_summary(const StabilizedEnsemble& e) {
  json j;
  j["n"] = e.n_samples();
  j["sigma_n"] = e.sigma_n;
  j["label"] = to_string(fit_label(e.sigma_n));
  j["base_seed"] = e.base.seed;
  j["base_raw_stress"] = e.base.raw_stress;
  j["anchors"] = e.anchor_set.vertex_indices;
  j["retried"] = e.retried;
  if (e.realization_count() >= 2) {
    j["normalized_mean_dispersion"] = uncertainty_summary(e).normalized_mean_dispersion;
  }
  return j;
}

void finish(const RunConfig& c, const std::string& command, json summary) {
  summary["config"] = config_echo(c, command);
  json effective = config_echo(c, command);
  effective["threads"] = c.threads;
  io::write_record(fs::path(c.out) / "summary.json", summary);
  io::write_text(fs::path(c.out) / "config.json", effective.dump(2) + "\n");
  std::cout << summary.dump() << '\n';
}

int cmd_stabilize(const RunConfig& c) {
  const Metric metric = single_metric(c);
  const PipelineConfig pc = pipeline_config(c);
  std::vector<Eigen::Index> rows;
  const RawDataset data = load_input(c, rows);
  const StandardizedDataset std_data = standardize(data);
  const StabilizedEnsemble e = stabilize_n_case(std_data, metric, pc);
  if (e.realization_count() < 2) warn("dispersion statistics need K >= 2; skipped");
  for (const auto& w : e.warnings) warn(w);

  io::write_ensemble(c.out, e);
  write_categories(fs::path(c.out) / "categories.csv", c, data, rows);
  json s;
  s["command"] = "stabilize";
  s["metric"] = to_string(metric);
  s["K"] = c.realizations;
  s["master_seed"] = c.master_seed;
  s.update(ensemble_summary(e));
  finish(c, "stabilize", s);
  return 0;
}

int cmd_oosp(const RunConfig& c) {
  const Metric metric = single_metric(c);
  const PipelineConfig pc = pipeline_config(c);
  std::vector<Eigen::Index> rows;
  const RawDataset data = load_input(c, rows);
  const Eigen::RowVectorXd oosp = make_oosp(c, data);
  const StandardizedDataset std_data = standardize(data);
  const StabilizedEnsemble n_case = stabilize_n_case(std_data, metric, pc);
  const OOSPResult r =
      stabilize_oosp_case(std_data, standardize_record(oosp, std_data.params), n_case, metric, pc);
  for (const auto& w : n_case.warnings) warn("N case: " + w);
  for (const auto& w : r.augmented.warnings) warn("N+1 case: " + w);
  if (!r.report.note.empty()) warn(r.report.note);

  io::write_oosp_bundle(c.out, n_case, r);
  write_categories(fs::path(c.out) / "categories.csv", c, data, rows);
  {
    std::ostringstream rec;
    rec << "predictor,raw,standardized\n";
    const Eigen::RowVectorXd z = standardize_record(oosp, std_data.params);
    for (Eigen::Index j = 0; j < oosp.size(); ++j) {
      rec << data.predictor_names[static_cast<std::size_t>(j)] << ',' << format_number(oosp(j))
          << ',' << format_number(z(j)) << '\n';
    }
    io::write_text(fs::path(c.out) / "oosp.csv", rec.str());
  }

  json s;
  s["command"] = "oosp";
  s["metric"] = to_string(metric);
  s["K"] = c.realizations;
  s["n"] = std_data.n_samples();
  s["sigma_n"] = r.report.sigma_n;
  s["sigma_oosp"] = r.report.sigma_oosp;
  s["sr"] = r.report.stress_ratio ? json(*r.report.stress_ratio) : json(nullptr);
  s["sr_rounded"] = r.report.stress_ratio
                        ? json(std::round(*r.report.stress_ratio * 100.0) / 100.0)
                        : json(nullptr);
  s["label_n"] = to_string(r.report.label_n);
  s["label_oosp"] = to_string(r.report.label_oosp);
  s["oosp_mds"] = {r.oosp_coord(0), r.oosp_coord(1)};
  s["common_anchors"] = r.anchor_pairs.sample_indices;
  s["anchor_lse"] = r.anchor_transform.lse;
  s["anchor_reflected"] = r.anchor_transform.reflected;
  s["master_seed"] = c.master_seed;
  s["base_seed"] = c.base_seed;
  finish(c, "oosp", s);
  return 0;
}

int cmd_sweep(const RunConfig& c) {
  const PipelineConfig pc = pipeline_config(c);
  const std::vector<int> sizes = parse_sizes(c.sizes);
  std::vector<Metric> metrics;
  for (const auto& m : c.metrics) metrics.push_back(parse_metric(m));
  std::vector<Eigen::Index> rows;
  const RawDataset data = load_input(c, rows);

  json s;
  s["command"] = "sweep";
  json tables = json::object();
  for (Metric m : metrics) {
    const SweepResult r = sample_size_sweep(data, sizes, m, pc, c.master_seed);
    for (const auto& skip : r.skipped) {
      warn("size " + std::to_string(skip.sample_size) + " (" + to_string(m) + ") skipped: " +
           skip.message);
    }
    std::ostringstream out;
    io::write_sweep(out, r.rows);
    const std::string name = std::string("sweep_") + to_string(m) + ".csv";
    io::write_text(fs::path(c.out) / name, out.str());
    tables[to_string(m)] = {{"file", name}, {"rows", r.rows.size()}, {"skipped", r.skipped.size()}};
  }
  s["tables"] = tables;
  finish(c, "sweep", s);
  return 0;
}

int cmd_trajectory(const RunConfig& c) {
  const Metric metric = single_metric(c);
  const PipelineConfig pc = pipeline_config(c);
  if (c.features.empty()) throw Error(ErrorKind::Config, "--features is required");
  std::vector<Eigen::Index> rows;
  const RawDataset data = load_input(c, rows);
  const Eigen::RowVectorXd oosp = make_oosp(c, data);
  const std::vector<TrajectoryPoint> points =
      oosp_trajectory(data, oosp, c.features, c.multipliers, metric, pc);

  std::ostringstream out;
  io::write_trajectory(out, points);
  io::write_text(fs::path(c.out) / "trajectory.csv", out.str());
  if (data.has_response() && !c.thresholds.empty()) {
    const CategoricalResponse cat = bin_response(data.response, c.thresholds, c.labels);
    std::ostringstream ctx;
    ctx << "zeta,nearest_sample,nearest_label\n";
    for (const auto& p : points) {
      ctx << format_number(p.multiplier) << ',' << p.nearest_sample << ','
          << cat.label_of(static_cast<std::size_t>(p.nearest_sample)) << '\n';
    }
    io::write_text(fs::path(c.out) / "trajectory_context.csv", ctx.str());
  }
  json s;
  s["command"] = "trajectory";
  s["metric"] = to_string(metric);
  s["points"] = points.size();
  finish(c, "trajectory", s);
  return 0;
}

void add_shared(CLI::App* sub, RunConfig& c) {
  sub->add_option("--input", c.input, "Comma-delimited table with a header row")->required();
  sub->add_option("--predictors", c.predictors, "Predictor column names")->delimiter(',')->required();
  sub->add_option("--response", c.response, "Response column name");
  sub->add_option("--thresholds", c.thresholds, "Response bin edges")->delimiter(',');
  sub->add_option("--labels", c.labels, "Response bin labels")->delimiter(',');
  sub->add_option("--metric", c.metrics, "euclidean | manhattan | mahalanobis")->delimiter(',');
  sub->add_option("--realizations", c.realizations, "Number of MDS realizations K");
  sub->add_option("--master-seed", c.master_seed, "Realization k uses seed master_seed + k");
  sub->add_option("--base-seed", c.base_seed, "Seed of the base case");
  sub->add_option("--max-iterations", c.max_iterations, "SMACOF iteration cap");
  sub->add_option("--initializations", c.initializations, "SMACOF starts per random state (best kept)");
  sub->add_option("--tolerance", c.tolerance, "Relative stress decrease for convergence");
  sub->add_option("--scale-tolerance", c.scale_tolerance, "Relative RMS-radius tolerance");
  sub->add_option("--distortion-factor", c.distortion_factor, "Re-run bound on alignment LSE");
  sub->add_flag("--rescale", c.rescale, "Apply corrective scale factors");
  sub->add_flag("--strict-rotation", c.strict_rotation, "Disallow reflections in alignment");
  sub->add_option("--out", c.out, "Output directory")->required();
  sub->add_option("--threads", c.threads, "Worker cap (results do not depend on it)");
  sub->add_option("--sample-size", c.sample_size, "Use a seeded subset of this many rows");
  sub->add_option("--subset-seed", c.subset_seed, "Seed of the row subset");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stabilized metric-MDS embeddings with out-of-sample points"};
  app.set_config("--config", "", "INI/TOML file with option defaults (flags take precedence)");
  app.require_subcommand(1);
  RunConfig c;

  auto* stabilize = app.add_subcommand("stabilize", "Stabilize the N-sample embedding");
  auto* oosp = app.add_subcommand("oosp", "Embed an out-of-sample point");
  auto* sweep = app.add_subcommand("sweep", "Stress and SR over sample sizes");
  auto* trajectory = app.add_subcommand("trajectory", "OOSP path under predictor multipliers");
  for (auto* sub : {stabilize, oosp, sweep, trajectory}) {
    add_shared(sub, c);
    sub->fallthrough();
  }
  for (auto* sub : {oosp, trajectory}) {
    auto* seed = sub->add_option("--oosp-seed", c.oosp_seed, "Seed of the generated OOSP");
    auto* values =
        sub->add_option("--oosp-values", c.oosp_values, "Raw OOSP predictor values")->delimiter(',');
    seed->excludes(values);
  }
  sweep->add_option("--sizes", c.sizes, "Sizes, e.g. 4..100 or 10,30,50")->delimiter(',')->required();
  trajectory->add_option("--multipliers", c.multipliers, "Multipliers zeta")->delimiter(',');
  trajectory->add_option("--features", c.features, "Predictors to scale")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error code=config exit=1: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*stabilize) return cmd_stabilize(c);
    if (*oosp) return cmd_oosp(c);
    if (*sweep) return cmd_sweep(c);
    if (*trajectory) return cmd_trajectory(c);
  } catch (const Error& e) {
    std::cerr << "error code=" << to_string(e.kind()) << " exit=" << exit_code(e.kind()) << ": "
              << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error code=io exit=2: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
