#pragma once

#include "stablemds/core.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <vector>

namespace stablemds {

/// Convex-hull vertices of an embedding, used as correspondence points.
template <typename Scalar>
struct AnchorSet {
  /// Sample indices, counter-clockwise, starting from the lowest index.
  std::vector<Eigen::Index> vertex_indices;
  Coords<Scalar> coords;

  std::size_t size() const { return vertex_indices.size(); }
};

using AnchorSetd = AnchorSet<double>;

/// Twice the signed area of (a, b, c); positive when c is left of a -> b.
template <typename Scalar>
Scalar orient(const Point2<Scalar>& a, const Point2<Scalar>& b, const Point2<Scalar>& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

namespace detail {

template <typename Scalar>
class QuickHull {
 public:
  explicit QuickHull(const Coords<Scalar>& points) : points_(points) {}

  std::vector<Eigen::Index> run() {
    const Eigen::Index n = points_.rows();
    Eigen::Index lo = 0;
    Eigen::Index hi = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
      if (less(i, lo)) lo = i;
      if (greater(i, hi)) hi = i;
    }
    if (at(lo) == at(hi)) {
      throw Error(ErrorKind::DegenerateHull, "all points are coincident");
    }
    std::vector<Eigen::Index> below;
    std::vector<Eigen::Index> above;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Scalar o = orient(at(lo), at(hi), at(i));
      if (o < 0) below.push_back(i);
      if (o > 0) above.push_back(i);
    }
    if (below.empty() && above.empty()) {
      throw Error(ErrorKind::DegenerateHull, "all points are collinear");
    }
    std::vector<Eigen::Index> hull{lo};
    expand(below, lo, hi, hull);
    hull.push_back(hi);
    expand(above, hi, lo, hull);
    return hull;
  }

 private:
  Point2<Scalar> at(Eigen::Index i) const { return points_.row(i).transpose(); }

  // Lexicographic (x, y), ties broken by index so duplicates resolve to the lowest.
  bool less(Eigen::Index a, Eigen::Index b) const {
    const auto pa = at(a);
    const auto pb = at(b);
    if (pa.x() != pb.x()) return pa.x() < pb.x();
    if (pa.y() != pb.y()) return pa.y() < pb.y();
    return a < b;
  }

  bool greater(Eigen::Index a, Eigen::Index b) const {
    const auto pa = at(a);
    const auto pb = at(b);
    if (pa.x() != pb.x()) return pa.x() > pb.x();
    if (pa.y() != pb.y()) return pa.y() > pb.y();
    return a < b;
  }

  // `candidates` lie strictly right of a -> b; appends the hull vertices strictly
  // between a and b in traversal order.
  void expand(const std::vector<Eigen::Index>& candidates, Eigen::Index a, Eigen::Index b,
              std::vector<Eigen::Index>& hull) const {
    if (candidates.empty()) return;
    const Point2<Scalar> pa = at(a);
    const Point2<Scalar> pb = at(b);
    const Point2<Scalar> dir = pb - pa;
    // Farthest from the line; ties go to the point nearest a along a -> b, then to
    // the lowest index, so the chosen point is always a strict vertex.
    Eigen::Index best = candidates.front();
    Scalar best_dist = -orient(pa, pb, at(best));
    Scalar best_proj = dir.dot(at(best) - pa);
    for (Eigen::Index c : candidates) {
      const Scalar dist = -orient(pa, pb, at(c));
      const Scalar proj = dir.dot(at(c) - pa);
      if (dist > best_dist || (dist == best_dist && (proj < best_proj ||
                                                     (proj == best_proj && c < best)))) {
        best = c;
        best_dist = dist;
        best_proj = proj;
      }
    }
    const Point2<Scalar> pc = at(best);
    std::vector<Eigen::Index> left;
    std::vector<Eigen::Index> right;
    for (Eigen::Index c : candidates) {
      if (orient(pa, pc, at(c)) < 0) left.push_back(c);
      else if (orient(pc, pb, at(c)) < 0) right.push_back(c);
    }
    expand(left, a, best, hull);
    hull.push_back(best);
    expand(right, best, b, hull);
  }

  const Coords<Scalar>& points_;
};

}  // namespace detail

/// Quickhull. Counter-clockwise strict vertices (collinear boundary points dropped),
/// rotated to start at the smallest index. Coincident points resolve to their
/// lowest index.
template <typename Scalar>
std::vector<Eigen::Index> convex_hull(const Coords<Scalar>& points) {
  if (points.rows() < 3) {
    throw Error(ErrorKind::TooFewPoints,
                "convex hull needs at least 3 points (got " + std::to_string(points.rows()) + ")");
  }
  if (!points.allFinite()) throw Error(ErrorKind::Precondition, "non-finite hull input");
  std::vector<Eigen::Index> hull = detail::QuickHull<Scalar>(points).run();
  std::rotate(hull.begin(), std::min_element(hull.begin(), hull.end()), hull.end());
  return hull;
}

template <typename Scalar>
AnchorSet<Scalar> anchors(const Coords<Scalar>& coords) {
  AnchorSet<Scalar> out;
  out.vertex_indices = convex_hull(coords);
  out.coords.resize(static_cast<Eigen::Index>(out.vertex_indices.size()), 2);
  for (std::size_t r = 0; r < out.vertex_indices.size(); ++r) {
    out.coords.row(static_cast<Eigen::Index>(r)) = coords.row(out.vertex_indices[r]);
  }
  return out;
}

template <typename Scalar>
struct AnchorPairs {
  std::vector<Eigen::Index> sample_indices;
  Coords<Scalar> first;
  Coords<Scalar> second;
};

inline constexpr std::size_t kMinCommonAnchors = 3;

/// Anchors present in both sets by sample index (excluding `excluded_index`),
/// ordered by sample index.
template <typename Scalar>
AnchorPairs<Scalar> common_anchors(const AnchorSet<Scalar>& a, const AnchorSet<Scalar>& b,
                                   Eigen::Index excluded_index) {
  std::vector<std::pair<Eigen::Index, std::size_t>> in_b;
  for (std::size_t r = 0; r < b.vertex_indices.size(); ++r) in_b.emplace_back(b.vertex_indices[r], r);
  std::sort(in_b.begin(), in_b.end());

  std::vector<std::pair<Eigen::Index, std::size_t>> in_a;
  for (std::size_t r = 0; r < a.vertex_indices.size(); ++r) in_a.emplace_back(a.vertex_indices[r], r);
  std::sort(in_a.begin(), in_a.end());

  std::vector<std::array<std::size_t, 3>> matches;  // sample, row in a, row in b
  auto ib = in_b.begin();
  for (const auto& [idx, ra] : in_a) {
    if (idx == excluded_index) continue;
    while (ib != in_b.end() && ib->first < idx) ++ib;
    if (ib != in_b.end() && ib->first == idx) {
      matches.push_back({static_cast<std::size_t>(idx), ra, ib->second});
    }
  }
  if (matches.size() < kMinCommonAnchors) {
    throw Error(ErrorKind::InsufficientAnchors,
                "only " + std::to_string(matches.size()) +
                    " common anchors; rigid alignment needs at least 3");
  }
  AnchorPairs<Scalar> out;
  const auto m = static_cast<Eigen::Index>(matches.size());
  out.first.resize(m, 2);
  out.second.resize(m, 2);
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto& [idx, ra, rb] = matches[static_cast<std::size_t>(r)];
    out.sample_indices.push_back(static_cast<Eigen::Index>(idx));
    out.first.row(r) = a.coords.row(static_cast<Eigen::Index>(ra));
    out.second.row(r) = b.coords.row(static_cast<Eigen::Index>(rb));
  }
  return out;
}

}  // namespace stablemds
