#pragma once

// Independent reference computations used by the tests. Nothing here calls into
// the library's numerical routines.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using Points = Eigen::Matrix<double, Eigen::Dynamic, 2>;

inline double cross(const Points& p, Eigen::Index a, Eigen::Index b, Eigen::Index c) {
  return (p(b, 0) - p(a, 0)) * (p(c, 1) - p(a, 1)) - (p(b, 1) - p(a, 1)) * (p(c, 0) - p(a, 0));
}

/// Strict hull vertices by exhaustive edge testing, O(n^3). Edge (i, j) is a hull
/// edge when no point is strictly right of i -> j and every collinear point lies on
/// the closed segment; the endpoints of such maximal edges are the strict vertices.
/// Coincident points are represented by their lowest index.
inline std::set<Eigen::Index> brute_force_hull(const Points& p) {
  const Eigen::Index n = p.rows();
  std::vector<Eigen::Index> reps;
  for (Eigen::Index i = 0; i < n; ++i) {
    bool dup = false;
    for (Eigen::Index r : reps) dup = dup || (p.row(r) == p.row(i));
    if (!dup) reps.push_back(i);
  }
  std::set<Eigen::Index> out;
  for (Eigen::Index i : reps) {
    for (Eigen::Index j : reps) {
      if (i == j) continue;
      bool edge = true;
      for (Eigen::Index k : reps) {
        if (k == i || k == j) continue;
        const double c = cross(p, i, j, k);
        if (c < 0) { edge = false; break; }
        if (c == 0) {
          const double t = (p.row(k) - p.row(i)).dot(p.row(j) - p.row(i)) /
                           (p.row(j) - p.row(i)).squaredNorm();
          if (t < 0 || t > 1) { edge = false; break; }
        }
      }
      if (edge) {
        out.insert(i);
        out.insert(j);
      }
    }
  }
  return out;
}

/// Normalized stress by a literal double loop over all ordered pairs (each
/// unordered pair counted twice in numerator and denominator).
inline double naive_normalized_stress(const Eigen::MatrixXd& d, const Points& z) {
  double num = 0, den = 0;
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      if (i == j) continue;
      const double dz = std::hypot(z(i, 0) - z(j, 0), z(i, 1) - z(j, 1));
      num += (d(i, j) - dz) * (d(i, j) - dz);
      den += d(i, j) * d(i, j);
    }
  }
  return std::sqrt(num / den);
}

inline double naive_lse(const Points& a, const Points& b) {
  double s = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double dx = a(i, 0) - b(i, 0);
    const double dy = a(i, 1) - b(i, 1);
    s += dx * dx + dy * dy;
  }
  return s;
}

/// Best residual over a grid of angles for rotation and reflection; for a fixed
/// orthogonal map the optimal translation is the centroid difference.
inline double grid_best_lse(const Points& image, const Points& preimage, int steps) {
  double best = INFINITY;
  const Eigen::RowVector2d ci = image.colwise().mean();
  const Eigen::RowVector2d cp = preimage.colwise().mean();
  for (int s = 0; s < steps; ++s) {
    const double a = 2.0 * M_PI * s / steps;
    for (int refl = 0; refl < 2; ++refl) {
      Eigen::Matrix2d r;
      r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
      if (refl) r.col(1) = -r.col(1);
      const Points moved = ((image.rowwise() - ci) * r.transpose()).rowwise() + cp;
      best = std::min(best, naive_lse(preimage, moved));
    }
  }
  return best;
}

/// Percentile with linear interpolation between closest ranks.
inline double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1) * q;
  const double lo = std::floor(h);
  const auto i = static_cast<std::size_t>(lo);
  if (i + 1 >= v.size()) return v.back();
  return v[i] + (h - lo) * (v[i + 1] - v[i]);
}

inline Points random_points(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Points p(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) p.row(i) << g(rng), g(rng);
  return p;
}

inline Eigen::Matrix2d rotation(double angle, bool reflect) {
  Eigen::Matrix2d r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  if (reflect) r.col(1) = -r.col(1);
  return r;
}

}  // namespace oracle
