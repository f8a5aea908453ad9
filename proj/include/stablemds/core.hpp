#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace stablemds {

/// Point sets in the embedding plane: one row per sample, columns "MDS 1", "MDS 2".
template <typename Scalar>
using Coords = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Coordsd = Coords<double>;
using Point2d = Point2<double>;

enum class ErrorKind {
  Config,
  Io,
  Schema,
  Parse,
  EmptyDataset,
  ConstantFeature,
  OutOfRange,
  InsufficientData,
  SingularCovariance,
  UnsupportedDimension,
  Numerical,
  Precondition,
  DegenerateConfiguration,
  Correspondence,
  TooFewPoints,
  DegenerateHull,
  InsufficientAnchors,
  UndefinedRatio,
  Domain,
  InsufficientRealizations,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::EmptyDataset: return "empty_dataset";
    case ErrorKind::ConstantFeature: return "constant_feature";
    case ErrorKind::OutOfRange: return "out_of_range";
    case ErrorKind::InsufficientData: return "insufficient_data";
    case ErrorKind::SingularCovariance: return "singular_covariance";
    case ErrorKind::UnsupportedDimension: return "unsupported_dimension";
    case ErrorKind::Numerical: return "numerical_failure";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::DegenerateConfiguration: return "degenerate_configuration";
    case ErrorKind::Correspondence: return "correspondence";
    case ErrorKind::TooFewPoints: return "too_few_points";
    case ErrorKind::DegenerateHull: return "degenerate_hull";
    case ErrorKind::InsufficientAnchors: return "insufficient_anchors";
    case ErrorKind::UndefinedRatio: return "undefined_ratio";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::InsufficientRealizations: return "insufficient_realizations";
  }
  return "unknown";
}

/// Process exit status for an error kind: 1 configuration, 2 I/O, 3 numerical,
/// 4 degenerate geometry, 5 insufficient anchors.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return 2;
    case ErrorKind::Numerical:
    case ErrorKind::SingularCovariance:
    case ErrorKind::UndefinedRatio: return 3;
    case ErrorKind::DegenerateConfiguration:
    case ErrorKind::TooFewPoints:
    case ErrorKind::DegenerateHull: return 4;
    case ErrorKind::InsufficientAnchors: return 5;
    default: return 1;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Counter-based generator: the i-th draw for a key is a pure function of (key, i),
/// so streams are reproducible and independent of call order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key, std::uint64_t stream = 0)
      : key_(mix(key ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t bits(std::uint64_t counter) const {
    return mix(key_ + (counter + 1) * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller on draws (2c, 2c+1).
  double normal(std::uint64_t counter) const {
    const double u1 = 1.0 - uniform(2 * counter);  // (0, 1]
    const double u2 = uniform(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform integer in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t counter, std::uint64_t bound) const {
    return static_cast<std::uint64_t>(uniform(counter) * static_cast<double>(bound)) % bound;
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
};

/// Pairwise Euclidean distances of a point set, upper triangle mirrored.
template <typename Derived>
Matrix<typename Derived::Scalar> point_distances(const Eigen::MatrixBase<Derived>& points) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = points.rows();
  Matrix<Scalar> out = Matrix<Scalar>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Scalar d = (points.row(i) - points.row(j)).norm();
      out(i, j) = d;
      out(j, i) = d;
    }
  }
  return out;
}

/// Root-mean-square distance of the rows from their centroid.
template <typename Derived>
typename Derived::Scalar rms_radius(const Eigen::MatrixBase<Derived>& points) {
  using Scalar = typename Derived::Scalar;
  if (points.rows() == 0) return Scalar(0);
  const auto centroid = points.colwise().mean();
  const Scalar sq = (points.rowwise() - centroid).rowwise().squaredNorm().sum();
  return std::sqrt(sq / static_cast<Scalar>(points.rows()));
}

}  // namespace stablemds
