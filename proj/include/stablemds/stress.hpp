#pragma once

#include "stablemds/core.hpp"
#include "stablemds/dissimilarity.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stablemds {

/// sqrt( sum_{i<j} (d_ij - |z_i - z_j|)^2 / sum_{i<j} d_ij^2 ).
template <typename Scalar, typename Derived>
Scalar normalized_stress(const DissimilarityMatrix<Scalar>& d,
                         const Eigen::MatrixBase<Derived>& coords) {
  const Eigen::Index n = d.size();
  if (coords.rows() != n) {
    throw Error(ErrorKind::Correspondence, "embedding has " + std::to_string(coords.rows()) +
                                               " points but D has " + std::to_string(n));
  }
  Scalar num = 0;
  Scalar den = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Scalar dij = d(i, j);
      const Scalar r = dij - (coords.row(i) - coords.row(j)).norm();
      num += r * r;
      den += dij * dij;
    }
  }
  if (!(den > Scalar(0))) {
    throw Error(ErrorKind::Domain, "normalized stress undefined for an all-zero D");
  }
  return std::sqrt(num / den);
}

/// sigma_oosp / sigma_n.
inline double stress_ratio(double sigma_oosp, double sigma_n) {
  if (!(sigma_n > 0)) {
    throw Error(ErrorKind::UndefinedRatio,
                "stress ratio undefined: the N-case embedding has zero stress");
  }
  return sigma_oosp / sigma_n;
}

enum class FitLabel { Perfect, Good, Poor };

inline const char* to_string(FitLabel label) {
  switch (label) {
    case FitLabel::Perfect: return "Perfect";
    case FitLabel::Good: return "Good";
    case FitLabel::Poor: return "Poor";
  }
  return "unknown";
}

// Goodness-of-fit bands on the normalized-stress fraction.
inline constexpr double kPoorThreshold = 0.2;
inline constexpr double kGoodThreshold = 0.05;

inline FitLabel fit_label(double sigma) {
  if (!(sigma >= 0)) throw Error(ErrorKind::Domain, "normalized stress must be non-negative");
  if (sigma >= kPoorThreshold) return FitLabel::Poor;
  if (sigma >= kGoodThreshold) return FitLabel::Good;
  return FitLabel::Perfect;
}

struct StressReport {
  double sigma_n = 0;
  double sigma_oosp = 0;
  /// Empty when sigma_n is zero.
  std::optional<double> stress_ratio;
  FitLabel label_n = FitLabel::Perfect;
  FitLabel label_oosp = FitLabel::Perfect;
  std::string note;
};

inline StressReport make_report(double sigma_n, double sigma_oosp) {
  StressReport r;
  r.sigma_n = sigma_n;
  r.sigma_oosp = sigma_oosp;
  r.label_n = fit_label(sigma_n);
  r.label_oosp = fit_label(sigma_oosp);
  try {
    r.stress_ratio = stress_ratio(sigma_oosp, sigma_n);
  } catch (const Error& e) {
    r.note = e.what();
  }
  return r;
}

template <typename Scalar>
struct ScatterPair {
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  Scalar feature_distance = 0;
  Scalar embedding_distance = 0;
};

/// (d_ij, |z_i - z_j|) for every i < j in lexicographic order.
template <typename Scalar, typename Derived>
std::vector<ScatterPair<Scalar>> distance_scatter(const DissimilarityMatrix<Scalar>& d,
                                                  const Eigen::MatrixBase<Derived>& coords) {
  const Eigen::Index n = d.size();
  if (coords.rows() != n) throw Error(ErrorKind::Correspondence, "embedding size does not match D");
  std::vector<ScatterPair<Scalar>> out;
  out.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      out.push_back({i, j, d(i, j), static_cast<Scalar>((coords.row(i) - coords.row(j)).norm())});
    }
  }
  return out;
}

}  // namespace stablemds
