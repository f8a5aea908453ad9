#include "stablemds/pipeline.hpp"

#include <sstream>

namespace stablemds {

Coordsd pointwise_mean(const std::vector<Coordsd>& configurations) {
  if (configurations.empty()) throw Error(ErrorKind::Precondition, "mean of no configurations");
  Coordsd sum = Coordsd::Zero(configurations.front().rows(), 2);
  for (const auto& c : configurations) sum += c;
  return sum / static_cast<double>(configurations.size());
}

UncertaintySummary dispersion_summary(const std::vector<Coordsd>& configurations) {
  const Coordsd mean = pointwise_mean(configurations);
  Eigen::MatrixX2d sq = Eigen::MatrixX2d::Zero(mean.rows(), 2);
  for (const auto& c : configurations) sq += (c - mean).cwiseAbs2();
  UncertaintySummary out;
  out.per_axis_sd = (sq / static_cast<double>(configurations.size())).cwiseSqrt();
  out.magnitude = out.per_axis_sd.rowwise().norm();
  out.mean_dispersion = out.magnitude.size() ? out.magnitude.mean() : 0.0;
  const double radius = rms_radius(mean);
  out.normalized_mean_dispersion = radius > 0 ? out.mean_dispersion / radius : 0.0;
  return out;
}

UncertaintySummary uncertainty_summary(const StabilizedEnsemble& e) {
  if (e.stabilized.size() < 2) {
    throw Error(ErrorKind::InsufficientRealizations,
                "dispersion statistics need at least 2 realizations");
  }
  return dispersion_summary(e.stabilized);
}

StabilizedEnsemble stabilize(const DissimilarityMatrixd& d, const PipelineConfig& config) {
  const EnsembleConfig& ec = config.ensemble;
  ec.validate();
  const Eigen::Index n = d.size();
  if (n < 4) {
    throw Error(ErrorKind::Precondition,
                "stabilization needs at least 4 samples (got " + std::to_string(n) + ")");
  }

  StabilizedEnsemble out;
  out.dissimilarity = d;
  out.base = smacof(d, ec.base_seed, ec);
  out.realizations = realization_ensemble(d, ec);
  const int k_count = ec.realization_count;

  out.scale = scale_check(out.realizations, ec.scale_tolerance);
  if (!out.scale.pass()) {
    std::ostringstream msg;
    msg << "scale check flagged realizations off the median RMS radius "
        << out.scale.median_radius << (ec.rescale ? " (rescaled)" : " (report only)");
    out.warnings.push_back(msg.str());
    if (ec.rescale) {
      for (int k = 0; k < k_count; ++k) {
        out.realizations[static_cast<std::size_t>(k)].coords *=
            out.scale.factors[static_cast<std::size_t>(k)];
      }
    }
  }

  const Coordsd& base = out.base.coords;
  const double radius = rms_radius(base);
  const double bound = config.distortion_factor * static_cast<double>(n) * radius * radius;

  out.stabilized.resize(static_cast<std::size_t>(k_count));
  out.transforms.resize(static_cast<std::size_t>(k_count));
  std::vector<char> retried(static_cast<std::size_t>(k_count), 0);
  parallel_for(k_count, ec.threads, [&](int i) {
    const auto slot = static_cast<std::size_t>(i);
    RigidTransformd t = align<double>(out.realizations[slot].coords, base, config.reflection);
    if (t.lse > bound) {
      // Fresh seed outside the range used by the regular realizations.
      Embeddingd again = smacof(d, ec.master_seed + k_count + i + 1, ec);
      RigidTransformd t2 = align<double>(again.coords, base, config.reflection);
      out.realizations[slot] = std::move(again);
      t = t2;
      retried[slot] = 1;
    }
    out.stabilized[slot] = apply(t, out.realizations[slot].coords);
    out.transforms[slot] = t;
  });
  for (int k = 0; k < k_count; ++k) {
    if (!retried[static_cast<std::size_t>(k)]) continue;
    out.retried.push_back(k + 1);
    const auto& t = out.transforms[static_cast<std::size_t>(k)];
    if (t.lse > bound) {
      std::ostringstream msg;
      msg << "realization " << (k + 1) << " still distorted after re-run (LSE " << t.lse
          << " > bound " << bound << ")";
      out.warnings.push_back(msg.str());
    }
  }

  out.expectation = pointwise_mean(out.stabilized);
  out.dispersion = dispersion_summary(out.stabilized).per_axis_sd;
  for (const auto& s : out.stabilized) out.realization_sigma.push_back(normalized_stress(d, s));
  out.anchor_set = anchors(out.expectation);
  out.sigma_n = normalized_stress(d, out.expectation);
  return out;
}

StabilizedEnsemble stabilize_n_case(const StandardizedDataset& data, Metric metric,
                                    const PipelineConfig& config) {
  return stabilize(pairwise<double>(data.values, metric), config);
}

OOSPResult stabilize_oosp_case(const StandardizedDataset& data, const Eigen::RowVectorXd& oosp,
                               const StabilizedEnsemble& n_case, Metric metric,
                               const PipelineConfig& config) {
  const Eigen::Index n = data.n_samples();
  if (oosp.size() != data.values.cols()) {
    throw Error(ErrorKind::Config, "OOSP has " + std::to_string(oosp.size()) +
                                       " predictors, dataset has " +
                                       std::to_string(data.values.cols()));
  }
  if (n_case.n_samples() != n) {
    throw Error(ErrorKind::Correspondence, "N-case ensemble does not match the dataset size");
  }
  Eigen::MatrixXd augmented(n + 1, data.values.cols());
  augmented.topRows(n) = data.values;
  augmented.row(n) = oosp;

  OOSPResult out;
  out.augmented = stabilize(pairwise<double>(augmented, metric), config);
  out.anchor_pairs = common_anchors(n_case.anchor_set, out.augmented.anchor_set, n);
  // Image: augmented anchors; preimage: N-case anchors.
  out.anchor_transform =
      align<double>(out.anchor_pairs.second, out.anchor_pairs.first, config.reflection);
  out.expectation_oosp = apply(out.anchor_transform, out.augmented.expectation);
  out.oosp_coord = out.expectation_oosp.row(n).transpose();
  out.sigma_oosp = normalized_stress(out.augmented.dissimilarity, out.expectation_oosp);
  out.report = make_report(n_case.sigma_n, out.sigma_oosp);
  return out;
}

double distance_gap(const Coordsd& a, const Coordsd& b, const DissimilarityMatrixd& reference) {
  const Eigen::Index n = reference.size();
  if (a.rows() < n || b.rows() < n) {
    throw Error(ErrorKind::Correspondence, "configurations are smaller than the reference");
  }
  double num = 0;
  double den = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double r = (a.row(i) - a.row(j)).norm() - (b.row(i) - b.row(j)).norm();
      num += r * r;
      den += reference(i, j) * reference(i, j);
    }
  }
  if (!(den > 0)) throw Error(ErrorKind::Domain, "reference dissimilarities are all zero");
  return std::sqrt(num / den);
}

}  // namespace stablemds
