#pragma once

#include "stablemds/core.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <string>

namespace stablemds {

/// p -> rotation * p + translation, rotation orthogonal (det +1 or -1).
template <typename Scalar>
struct RigidTransform {
  Eigen::Matrix<Scalar, 2, 2> rotation = Eigen::Matrix<Scalar, 2, 2>::Identity();
  Point2<Scalar> translation = Point2<Scalar>::Zero();
  Scalar lse = 0;
  bool reflected = false;

  // Intermediate quantities of the estimate, kept for audit output.
  Eigen::Matrix<Scalar, 2, 2> cross_covariance = Eigen::Matrix<Scalar, 2, 2>::Zero();
  Eigen::Matrix<Scalar, 2, 2> u = Eigen::Matrix<Scalar, 2, 2>::Identity();
  Point2<Scalar> singular_values = Point2<Scalar>::Zero();
  Eigen::Matrix<Scalar, 2, 2> v = Eigen::Matrix<Scalar, 2, 2>::Identity();
  Point2<Scalar> preimage_centroid = Point2<Scalar>::Zero();
  Point2<Scalar> image_centroid = Point2<Scalar>::Zero();

  static RigidTransform identity() { return {}; }
};

using RigidTransformd = RigidTransform<double>;

enum class ReflectionPolicy {
  /// Minimize over the full orthogonal group O(2).
  Allow,
  /// Restrict to proper rotations SO(2).
  RotationOnly,
};

/// Sum of squared distances between corresponding rows.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar lse(const Eigen::MatrixBase<DerivedA>& preimage,
                              const Eigen::MatrixBase<DerivedB>& transformed_image) {
  if (preimage.rows() != transformed_image.rows() ||
      preimage.cols() != transformed_image.cols()) {
    throw Error(ErrorKind::Correspondence, "point sets have different sizes");
  }
  return (preimage - transformed_image).squaredNorm();
}

/// Maps every row p to R p + T.
template <typename Scalar, typename Derived>
Coords<Scalar> apply(const RigidTransform<Scalar>& t, const Eigen::MatrixBase<Derived>& coords) {
  Coords<Scalar> out = coords * t.rotation.transpose();
  out.rowwise() += t.translation.transpose();
  return out;
}

/// Composition: apply(compose(second, first), x) == apply(second, apply(first, x)).
template <typename Scalar>
RigidTransform<Scalar> compose(const RigidTransform<Scalar>& second,
                               const RigidTransform<Scalar>& first) {
  RigidTransform<Scalar> out;
  out.rotation = second.rotation * first.rotation;
  out.translation = second.rotation * first.translation + second.translation;
  out.reflected = out.rotation.determinant() < Scalar(0);
  return out;
}

/// Least-squares rigid transform taking `image` onto `preimage` (row i corresponds
/// to row i): minimizes sum |preimage_i - (R image_i + T)|^2 over orthogonal R and T.
template <typename Scalar, typename DerivedImage, typename DerivedPre>
RigidTransform<Scalar> align(const Eigen::MatrixBase<DerivedImage>& image,
                             const Eigen::MatrixBase<DerivedPre>& preimage,
                             ReflectionPolicy policy = ReflectionPolicy::Allow) {
  using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
  if (image.rows() != preimage.rows()) {
    throw Error(ErrorKind::Correspondence,
                "image has " + std::to_string(image.rows()) + " points, preimage has " +
                    std::to_string(preimage.rows()));
  }
  if (image.cols() != 2 || preimage.cols() != 2) {
    throw Error(ErrorKind::UnsupportedDimension, "rigid alignment is planar");
  }
  const Eigen::Index n = image.rows();
  if (n < 2) throw Error(ErrorKind::DegenerateConfiguration, "alignment needs at least 2 points");

  RigidTransform<Scalar> t;
  t.image_centroid = image.colwise().mean().transpose();
  t.preimage_centroid = preimage.colwise().mean().transpose();
  const Coords<Scalar> img = image.rowwise() - t.image_centroid.transpose();
  const Coords<Scalar> pre = preimage.rowwise() - t.preimage_centroid.transpose();

  // Coincidence is judged relative to the raw coordinate magnitude.
  const Scalar scale = std::max<Scalar>(
      {image.cwiseAbs().maxCoeff(), preimage.cwiseAbs().maxCoeff(), Scalar(1)});
  const Scalar tiny = std::numeric_limits<Scalar>::epsilon() * scale * Scalar(16);
  if (img.rowwise().norm().maxCoeff() <= tiny || pre.rowwise().norm().maxCoeff() <= tiny) {
    throw Error(ErrorKind::DegenerateConfiguration, "all points of a set are coincident");
  }

  // H = sum img_i pre_i^T; R = V U^T maximizes trace(R H).
  const Mat2 h = img.transpose() * pre;
  Eigen::JacobiSVD<Mat2> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat2 u = svd.matrixU();
  Mat2 v = svd.matrixV();
  const Point2<Scalar> s = svd.singularValues();

  Mat2 r = v * u.transpose();
  if (r.determinant() < Scalar(0)) {
    // Flip the weakest direction when reflection is disallowed, or when H is rank
    // one and both orientations attain the same residual.
    const bool rank_one = s(1) <= std::numeric_limits<Scalar>::epsilon() * Scalar(64) * s(0);
    if (policy == ReflectionPolicy::RotationOnly || rank_one) {
      v.col(1) = -v.col(1);
      r = v * u.transpose();
    }
  }

  t.rotation = r;
  t.translation = t.preimage_centroid - r * t.image_centroid;
  t.reflected = r.determinant() < Scalar(0);
  t.cross_covariance = h;
  t.u = u;
  t.v = v;
  t.singular_values = s;
  t.lse = lse(preimage, apply(t, image));
  return t;
}

}  // namespace stablemds
