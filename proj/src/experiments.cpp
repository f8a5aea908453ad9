#include "stablemds/experiments.hpp"

#include <numeric>

namespace stablemds {

std::vector<Eigen::Index> draw_subset(Eigen::Index population, Eigen::Index count,
                                      std::int64_t seed) {
  if (count > population || count < 0) {
    throw Error(ErrorKind::OutOfRange, "cannot draw " + std::to_string(count) + " of " +
                                           std::to_string(population) + " samples");
  }
  const CounterRng rng(static_cast<std::uint64_t>(seed), /*stream=*/0x5b5e7);
  std::vector<Eigen::Index> pool(static_cast<std::size_t>(population));
  std::iota(pool.begin(), pool.end(), Eigen::Index{0});
  // Partial Fisher-Yates.
  for (Eigen::Index i = 0; i < count; ++i) {
    const auto remaining = static_cast<std::uint64_t>(population - i);
    const auto j = i + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(i), remaining));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(count));
  return pool;
}

SweepResult sample_size_sweep(const RawDataset& data, const std::vector<int>& sizes,
                              Metric metric, const PipelineConfig& config,
                              std::int64_t master_seed) {
  if (sizes.empty()) throw Error(ErrorKind::Config, "sample-size list is empty");
  for (int n : sizes) {
    if (n < 4) throw Error(ErrorKind::Config, "sample sizes must be >= 4");
    if (n > data.n_samples()) {
      throw Error(ErrorKind::OutOfRange, "sample size " + std::to_string(n) +
                                             " exceeds the dataset (" +
                                             std::to_string(data.n_samples()) + " rows)");
    }
  }
  SweepResult out;
  for (int n : sizes) {
    const std::int64_t seed = experiment_seed(master_seed, n);
    const RawDataset subset = data.subset(draw_subset(data.n_samples(), n, seed));
    try {
      const Eigen::RowVectorXd oosp = generate_oosp(subset, seed);
      const StandardizedDataset std_data = standardize(subset);
      const Eigen::RowVectorXd oosp_std = standardize_record(oosp, std_data.params);
      const StabilizedEnsemble n_case = stabilize_n_case(std_data, metric, config);
      const OOSPResult r = stabilize_oosp_case(std_data, oosp_std, n_case, metric, config);
      out.rows.push_back({n, metric, seed, r.report.sigma_n, r.report.sigma_oosp,
                          stress_ratio(r.report.sigma_oosp, r.report.sigma_n)});
    } catch (const Error& e) {
      switch (e.kind()) {
        case ErrorKind::InsufficientAnchors:
        case ErrorKind::DegenerateHull:
        case ErrorKind::ConstantFeature:
        case ErrorKind::InsufficientData:
        case ErrorKind::UndefinedRatio:
          out.skipped.push_back({n, seed, e.kind(), e.what()});
          break;
        default:
          throw;
      }
    }
  }
  return out;
}

std::vector<TrajectoryPoint> oosp_trajectory(const RawDataset& data,
                                             const Eigen::RowVectorXd& oosp,
                                             const std::vector<std::string>& varied_features,
                                             const std::vector<double>& multipliers,
                                             Metric metric, const PipelineConfig& config) {
  if (multipliers.empty()) throw Error(ErrorKind::Config, "multiplier list is empty");
  for (double z : multipliers) {
    if (!(z > 0)) throw Error(ErrorKind::Domain, "multipliers must be positive");
  }
  std::vector<Eigen::Index> columns;
  for (const auto& f : varied_features) columns.push_back(data.predictor_index(f));
  if (oosp.size() != data.n_predictors()) {
    throw Error(ErrorKind::Config, "OOSP record does not match the predictor count");
  }

  const StandardizedDataset std_data = standardize(data);
  const StabilizedEnsemble n_case = stabilize_n_case(std_data, metric, config);
  const Eigen::Index n = std_data.n_samples();

  std::vector<TrajectoryPoint> out;
  for (double z : multipliers) {
    Eigen::RowVectorXd record = oosp;
    for (Eigen::Index c : columns) record(c) *= z;
    const OOSPResult r = stabilize_oosp_case(
        std_data, standardize_record(record, std_data.params), n_case, metric, config);
    TrajectoryPoint p;
    p.multiplier = z;
    p.varied_features = varied_features;
    p.oosp_coord = r.oosp_coord;
    p.sr = r.report.stress_ratio.value_or(0.0);
    (r.expectation_oosp.topRows(n).rowwise() - r.oosp_coord.transpose())
        .rowwise()
        .squaredNorm()
        .minCoeff(&p.nearest_sample);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace stablemds
