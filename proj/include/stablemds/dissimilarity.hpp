#pragma once

#include "stablemds/core.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <optional>
#include <sstream>
#include <string>
#include <string_view>

namespace stablemds {

enum class Metric { Euclidean, Manhattan, Mahalanobis };

inline const char* to_string(Metric m) {
  switch (m) {
    case Metric::Euclidean: return "euclidean";
    case Metric::Manhattan: return "manhattan";
    case Metric::Mahalanobis: return "mahalanobis";
  }
  return "unknown";
}

inline Metric parse_metric(std::string_view name) {
  if (name == "euclidean") return Metric::Euclidean;
  if (name == "manhattan") return Metric::Manhattan;
  if (name == "mahalanobis") return Metric::Mahalanobis;
  throw Error(ErrorKind::Config, "unknown metric '" + std::string(name) + "'");
}

template <typename Scalar>
struct DissimilarityMatrix {
  Matrix<Scalar> entries;
  Metric metric = Metric::Euclidean;

  Eigen::Index size() const { return entries.rows(); }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return entries(i, j); }
};

using DissimilarityMatrixd = DissimilarityMatrix<double>;

// Mahalanobis regularization: ridge added when the smallest eigenvalue of the
// covariance falls below kRidgeTrigger; rejected above kMaxCondition afterwards.
inline constexpr double kRidgeTrigger = 1e-10;
inline constexpr double kRidgeScale = 1e-8;
inline constexpr double kMaxCondition = 1e12;

namespace detail {

template <typename Scalar, typename Distance>
Matrix<Scalar> pairwise_rows(const Matrix<Scalar>& rows, Distance&& distance) {
  const Eigen::Index n = rows.rows();
  Matrix<Scalar> out = Matrix<Scalar>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Scalar d = distance(rows.row(i), rows.row(j));
      out(i, j) = d;
      out(j, i) = d;
    }
  }
  return out;
}

}  // namespace detail

/// Sample covariance (n - 1 denominator) of the columns, with the ridge policy applied.
template <typename Scalar>
Matrix<Scalar> regularized_covariance(const Matrix<Scalar>& data) {
  const Eigen::Index n = data.rows();
  const Eigen::Index m = data.cols();
  if (n < 2) {
    throw Error(ErrorKind::InsufficientData, "covariance needs at least 2 samples");
  }
  const Matrix<Scalar> centered = data.rowwise() - data.colwise().mean();
  Matrix<Scalar> cov = (centered.transpose() * centered) / static_cast<Scalar>(n - 1);

  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(cov, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < Scalar(kRidgeTrigger)) {
    const Scalar eps = Scalar(kRidgeScale) * cov.trace() / static_cast<Scalar>(m);
    cov.diagonal().array() += eps;
    eig.compute(cov, Eigen::EigenvaluesOnly);
  }
  const Scalar lo = eig.eigenvalues().minCoeff();
  const Scalar hi = eig.eigenvalues().maxCoeff();
  if (!(lo > Scalar(0)) || hi / lo > Scalar(kMaxCondition)) {
    std::ostringstream msg;
    msg << "covariance is singular (eigenvalues in [" << lo << ", " << hi << "])";
    throw Error(ErrorKind::SingularCovariance, msg.str());
  }
  return cov;
}

/// Mahalanobis distances under an explicit positive-definite covariance.
template <typename Scalar>
DissimilarityMatrix<Scalar> pairwise_mahalanobis(const Matrix<Scalar>& data,
                                                 const Matrix<Scalar>& covariance) {
  Eigen::LLT<Matrix<Scalar>> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularCovariance, "covariance is not positive definite");
  }
  // Whitening: y = L^{-1} x, so that |y_i - y_j| is the Mahalanobis distance.
  const Matrix<Scalar> white =
      llt.matrixL().solve(data.transpose()).transpose();
  auto dist = [](const auto& a, const auto& b) { return (a - b).norm(); };
  return {detail::pairwise_rows<Scalar>(white, dist), Metric::Mahalanobis};
}

/// Pairwise dissimilarities of the rows of a standardized predictor table.
template <typename Scalar>
DissimilarityMatrix<Scalar> pairwise(const Matrix<Scalar>& data, Metric metric) {
  if (data.rows() < 2) {
    throw Error(ErrorKind::InsufficientData, "pairwise dissimilarity needs at least 2 samples");
  }
  switch (metric) {
    case Metric::Euclidean: {
      auto dist = [](const auto& a, const auto& b) { return (a - b).norm(); };
      return {detail::pairwise_rows<Scalar>(data, dist), metric};
    }
    case Metric::Manhattan: {
      auto dist = [](const auto& a, const auto& b) { return (a - b).cwiseAbs().sum(); };
      return {detail::pairwise_rows<Scalar>(data, dist), metric};
    }
    case Metric::Mahalanobis:
      return pairwise_mahalanobis<Scalar>(data, regularized_covariance<Scalar>(data));
  }
  throw Error(ErrorKind::Config, "unknown metric");
}

enum class Violation { None, NotSquare, NonFinite, Symmetry, Diagonal, Negative };

struct Diagnostic {
  Violation violation = Violation::None;
  Eigen::Index row = -1;
  Eigen::Index col = -1;

  bool ok() const { return violation == Violation::None; }
};

/// First structural violation in row-major scan order, or None.
template <typename Scalar>
Diagnostic validate(const DissimilarityMatrix<Scalar>& d) {
  const auto& e = d.entries;
  if (e.rows() != e.cols()) return {Violation::NotSquare, e.rows(), e.cols()};
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    for (Eigen::Index j = 0; j < e.cols(); ++j) {
      const Scalar v = e(i, j);
      if (!std::isfinite(v)) return {Violation::NonFinite, i, j};
      if (i == j && v != Scalar(0)) return {Violation::Diagonal, i, j};
      if (v < Scalar(0)) return {Violation::Negative, i, j};
      if (j > i && v != e(j, i)) return {Violation::Symmetry, i, j};
    }
  }
  return {};
}

}  // namespace stablemds
