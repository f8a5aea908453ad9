#include "oracles.hpp"
#include "stablemds/pipeline.hpp"

#include <doctest.h>

#include <random>

using namespace stablemds;

namespace {

DissimilarityMatrixd from_points(const Coordsd& p) { return {point_distances(p), Metric::Euclidean}; }

PipelineConfig small_config(int k = 10) {
  PipelineConfig c;
  c.ensemble.realization_count = k;
  return c;
}

StandardizedDataset random_dataset(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd x(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) x(i, j) = g(rng);
  return standardize(x);
}

}  // namespace

TEST_CASE("stabilize: shapes and invariants") {
  std::mt19937_64 rng(1);
  const auto d = from_points(oracle::random_points(rng, 15));
  const StabilizedEnsemble e = stabilize(d, small_config());
  CHECK(e.n_samples() == 15);
  CHECK(e.realization_count() == 10);
  CHECK(e.transforms.size() == 10);
  CHECK(e.dispersion.rows() == 15);
  CHECK((e.dispersion.array() >= 0).all());
  CHECK(e.sigma_n >= 0);
  CHECK(e.expectation == pointwise_mean(e.stabilized));
  for (std::size_t k = 0; k < e.stabilized.size(); ++k) {
    CHECK((apply(e.transforms[k], e.realizations[k].coords) - e.stabilized[k]).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::Matrix2d r = e.transforms[k].rotation;
    CHECK((r.transpose() * r - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("stabilize: realizations are identical when K = 1 and dispersion is zero") {
  std::mt19937_64 rng(2);
  const auto d = from_points(oracle::random_points(rng, 8));
  const StabilizedEnsemble e = stabilize(d, small_config(1));
  CHECK(e.expectation == e.stabilized[0]);
  CHECK(e.dispersion.cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(uncertainty_summary(e), Error);
}

TEST_CASE("stabilize: determinism regardless of threads") {
  std::mt19937_64 rng(3);
  const auto d = from_points(oracle::random_points(rng, 12));
  PipelineConfig c = small_config(8);
  const StabilizedEnsemble a = stabilize(d, c);
  c.ensemble.threads = 3;
  const StabilizedEnsemble b = stabilize(d, c);
  CHECK(a.expectation == b.expectation);
  CHECK(a.sigma_n == b.sigma_n);
}

TEST_CASE("stabilize: rigid copies of one configuration collapse to the base") {
  std::mt19937_64 rng(4);
  const auto d = from_points(oracle::random_points(rng, 10));
  const StabilizedEnsemble e = stabilize(d, small_config(6));
  // Realizations that converge to the same shape align onto each other.
  const UncertaintySummary u = uncertainty_summary(e);
  CHECK(u.normalized_mean_dispersion < 0.05);
}

TEST_CASE("stabilize: too few samples") {
  Coordsd p(3, 2);
  p << 0, 0, 1, 0, 0, 1;
  CHECK_THROWS_AS(stabilize(from_points(p), small_config()), Error);
}

TEST_CASE("stabilize_oosp_case: anchors, frame and report") {
  std::mt19937_64 rng(5);
  const StandardizedDataset data = random_dataset(rng, 25, 3);
  const PipelineConfig c = small_config(10);
  const StabilizedEnsemble n_case = stabilize_n_case(data, Metric::Euclidean, c);
  const Eigen::RowVectorXd oosp = Eigen::RowVectorXd::Constant(3, 0.1);
  const OOSPResult r = stabilize_oosp_case(data, oosp, n_case, Metric::Euclidean, c);
  CHECK(r.expectation_oosp.rows() == 26);
  CHECK(r.oosp_coord == r.expectation_oosp.row(25).transpose());
  CHECK(r.anchor_pairs.sample_indices.size() >= kMinCommonAnchors);
  for (Eigen::Index idx : r.anchor_pairs.sample_indices) CHECK(idx < 25);
  CHECK(r.report.sigma_n == n_case.sigma_n);
  CHECK(r.report.sigma_oosp == r.sigma_oosp);
  REQUIRE(r.report.stress_ratio.has_value());
  CHECK(*r.report.stress_ratio == doctest::Approx(r.sigma_oosp / n_case.sigma_n));

  // The OOSP sits near the origin of standardized space, so it lands inside the hull
  // and the anchor alignment should carry the N+1 frame close to the N frame.
  const double gap = distance_gap(n_case.expectation, r.expectation_oosp, n_case.dissimilarity);
  CHECK(gap <= n_case.sigma_n + r.sigma_oosp * r.augmented.dissimilarity.entries.norm() /
                                    n_case.dissimilarity.entries.norm() + 1e-12);
}

TEST_CASE("dispersion_summary and pointwise_mean") {
  Coordsd a(2, 2), b(2, 2);
  a << 0, 0, 2, 0;
  b << 0, 2, 2, 2;
  const Coordsd m = pointwise_mean({a, b});
  CHECK(m(0, 1) == 1.0);
  CHECK(m(1, 0) == 2.0);
  const UncertaintySummary u = dispersion_summary({a, b});
  CHECK(u.per_axis_sd(0, 0) == 0.0);
  CHECK(u.per_axis_sd(0, 1) == 1.0);
  CHECK(u.magnitude(1) == 1.0);
  CHECK(u.mean_dispersion == 1.0);
  CHECK_THROWS_AS(pointwise_mean({}), Error);
}

TEST_CASE("distance_gap is zero for rigid copies") {
  std::mt19937_64 rng(6);
  const Coordsd p = oracle::random_points(rng, 10);
  RigidTransformd t;
  t.rotation = oracle::rotation(0.7, true);
  t.translation << 3, 3;
  CHECK(distance_gap(p, apply(t, p), from_points(p)) < 1e-12);
}
