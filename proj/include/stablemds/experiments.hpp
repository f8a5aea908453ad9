#pragma once

#include "stablemds/pipeline.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stablemds {

struct SweepRow {
  int sample_size = 0;
  Metric metric = Metric::Euclidean;
  std::int64_t seed = 0;
  double sigma_n = 0;
  double sigma_oosp = 0;
  double sr = 0;
};

struct SkippedRun {
  int sample_size = 0;
  std::int64_t seed = 0;
  ErrorKind kind = ErrorKind::Precondition;
  std::string message;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// Runs whose geometry did not allow an anchor alignment (too few common anchors,
  /// degenerate hull); they carry no stress ratio.
  std::vector<SkippedRun> skipped;
};

/// Experiment seed for one sample size: subset and OOSP draws are keyed by it.
inline std::int64_t experiment_seed(std::int64_t master_seed, int sample_size) {
  return master_seed * 1000 + sample_size;
}

/// Seeded draw of `count` distinct row indices out of `population`, in draw order.
std::vector<Eigen::Index> draw_subset(Eigen::Index population, Eigen::Index count,
                                      std::int64_t seed);

/// One experiment per size: seeded subset, fresh OOSP inside the subset's 95%
/// intervals, N and N+1 stabilization. Realization seeds come from config.ensemble.
SweepResult sample_size_sweep(const RawDataset& data, const std::vector<int>& sizes,
                              Metric metric, const PipelineConfig& config,
                              std::int64_t master_seed);

struct TrajectoryPoint {
  double multiplier = 1;
  std::vector<std::string> varied_features;
  Point2d oosp_coord = Point2d::Zero();
  double sr = 0;
  /// Original sample closest to the OOSP in the stabilized plane.
  Eigen::Index nearest_sample = -1;
};

/// Scales the OOSP's raw values of `varied_features` by each multiplier and embeds
/// it against one shared N-case ensemble built from `data`.
std::vector<TrajectoryPoint> oosp_trajectory(const RawDataset& data,
                                             const Eigen::RowVectorXd& oosp,
                                             const std::vector<std::string>& varied_features,
                                             const std::vector<double>& multipliers,
                                             Metric metric, const PipelineConfig& config);

}  // namespace stablemds
