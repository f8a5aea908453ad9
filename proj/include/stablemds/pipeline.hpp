#pragma once

#include "stablemds/core.hpp"
#include "stablemds/data_ingest.hpp"
#include "stablemds/dissimilarity.hpp"
#include "stablemds/geometry.hpp"
#include "stablemds/rigid_align.hpp"
#include "stablemds/smacof.hpp"
#include "stablemds/stress.hpp"

#include <string>
#include <vector>

namespace stablemds {

struct PipelineConfig {
  EnsembleConfig ensemble;
  /// A realization whose alignment LSE exceeds factor * n * rms_radius(Z_B)^2 is
  /// re-run once with a fresh seed.
  double distortion_factor = 0.5;
  ReflectionPolicy reflection = ReflectionPolicy::Allow;
};

/// Realizations rigidly aligned to a base case, and their pointwise mean.
struct StabilizedEnsemble {
  DissimilarityMatrixd dissimilarity;
  Embeddingd base;
  std::vector<Embeddingd> realizations;
  std::vector<Coordsd> stabilized;
  std::vector<RigidTransformd> transforms;
  Coordsd expectation;
  /// Per-sample, per-axis population standard deviation across stabilized realizations.
  Eigen::MatrixX2d dispersion;
  AnchorSetd anchor_set;
  double sigma_n = 0;
  /// Normalized stress of each stabilized realization.
  std::vector<double> realization_sigma;
  ScaleCheck scale;
  /// Realization numbers (1-based) that were re-run after excessive distortion.
  std::vector<int> retried;
  std::vector<std::string> warnings;

  Eigen::Index n_samples() const { return expectation.rows(); }
  int realization_count() const { return static_cast<int>(stabilized.size()); }
};

struct OOSPResult {
  /// The augmented (n + 1) case in its own frame.
  StabilizedEnsemble augmented;
  /// Augmented expectation mapped into the N-case frame; OOSP is the last row.
  Coordsd expectation_oosp;
  Point2d oosp_coord = Point2d::Zero();
  RigidTransformd anchor_transform;
  AnchorPairs<double> anchor_pairs;
  double sigma_oosp = 0;
  StressReport report;
};

/// Steps 3-9 on a precomputed dissimilarity matrix.
StabilizedEnsemble stabilize(const DissimilarityMatrixd& d, const PipelineConfig& config);

StabilizedEnsemble stabilize_n_case(const StandardizedDataset& data, Metric metric,
                                    const PipelineConfig& config);

/// `oosp` must already be standardized with the N-case parameters.
OOSPResult stabilize_oosp_case(const StandardizedDataset& data, const Eigen::RowVectorXd& oosp,
                               const StabilizedEnsemble& n_case, Metric metric,
                               const PipelineConfig& config);

struct UncertaintySummary {
  Eigen::MatrixX2d per_axis_sd;
  /// sqrt(sd_1^2 + sd_2^2) per sample.
  Eigen::VectorXd magnitude;
  double mean_dispersion = 0;
  /// mean_dispersion / rms_radius(reference mean configuration).
  double normalized_mean_dispersion = 0;
};

/// Dispersion of a set of configurations around their pointwise mean.
UncertaintySummary dispersion_summary(const std::vector<Coordsd>& configurations);

UncertaintySummary uncertainty_summary(const StabilizedEnsemble& e);

/// Pointwise mean in fixed order.
Coordsd pointwise_mean(const std::vector<Coordsd>& configurations);

/// Frobenius norm (upper triangle) of the difference between the pairwise-distance
/// matrices of two configurations over their first `n` rows, divided by the norm of
/// the reference dissimilarities over the same pairs.
double distance_gap(const Coordsd& a, const Coordsd& b, const DissimilarityMatrixd& reference);

}  // namespace stablemds
