#include "oracles.hpp"
#include "stablemds/rigid_align.hpp"
#include "stablemds/stress.hpp"

#include <doctest.h>

#include <random>

using namespace stablemds;

namespace {

DissimilarityMatrixd from_points(const Coordsd& p) { return {point_distances(p), Metric::Euclidean}; }

}  // namespace

TEST_CASE("normalized_stress: exact reproduction is zero") {
  Coordsd p(4, 2);
  p << 0, 0, 1, 0, 1, 1, 0, 1;
  CHECK(normalized_stress(from_points(p), p) == 0.0);
}

TEST_CASE("normalized_stress: perturbed triangle against the double-loop oracle") {
  Coordsd tri(3, 2);
  tri << 0, 0, 3, 0, 0, 4;
  const auto d = from_points(tri);
  Coordsd z = tri;
  z(2, 1) += 0.25;
  const double got = normalized_stress(d, z);
  CHECK(std::abs(got - oracle::naive_normalized_stress(d.entries, z)) < 1e-12);
  CHECK(got > 0.0);
}

TEST_CASE("normalized_stress: errors") {
  DissimilarityMatrixd zero{Eigen::MatrixXd::Zero(3, 3), Metric::Euclidean};
  CHECK_THROWS_AS(normalized_stress(zero, Coordsd::Zero(3, 2)), Error);
  Coordsd p(4, 2);
  p.setRandom();
  CHECK_THROWS_AS(normalized_stress(from_points(p), p.topRows(3)), Error);
}

TEST_CASE("normalized_stress: rigid and relabeling invariance") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Coordsd x = oracle::random_points(rng, 12);
    const Coordsd z = oracle::random_points(rng, 12);
    const auto d = from_points(x);
    RigidTransformd t;
    t.rotation = oracle::rotation(0.3 * trial, trial % 2 == 0);
    t.translation << 5, -1;
    CHECK(std::abs(normalized_stress(d, z) - normalized_stress(d, apply(t, z))) < 1e-12);

    Eigen::PermutationMatrix<Eigen::Dynamic> perm(12);
    perm.setIdentity();
    std::shuffle(perm.indices().data(), perm.indices().data() + 12, rng);
    const DissimilarityMatrixd dp{perm * d.entries * perm.transpose(), Metric::Euclidean};
    const Coordsd zp = perm * z;
    CHECK(std::abs(normalized_stress(d, z) - normalized_stress(dp, zp)) < 1e-12);
  }
}

TEST_CASE("stress_ratio") {
  CHECK(stress_ratio(0.3, 0.3) == 1.0);
  CHECK(stress_ratio(0.0618, 0.0622) == doctest::Approx(0.9936).epsilon(1e-4));
  CHECK(stress_ratio(0.1937, 0.1943) == doctest::Approx(0.9969).epsilon(1e-4));
  try {
    stress_ratio(0.1, 0.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UndefinedRatio);
  }
  for (double x : {1e-9, 0.01, 0.5, 3.0}) CHECK(stress_ratio(x, x) == 1.0);
}

TEST_CASE("fit_label bands") {
  CHECK(fit_label(0.1943) == FitLabel::Good);
  CHECK(fit_label(0.25) == FitLabel::Poor);
  CHECK(fit_label(0.0) == FitLabel::Perfect);
  CHECK(fit_label(0.2) == FitLabel::Poor);
  CHECK(fit_label(0.05) == FitLabel::Good);
  CHECK(fit_label(0.049999) == FitLabel::Perfect);
  CHECK_THROWS_AS(fit_label(-0.01), Error);
}

TEST_CASE("make_report surfaces an undefined ratio") {
  const StressReport r = make_report(0.0, 0.01);
  CHECK_FALSE(r.stress_ratio.has_value());
  CHECK_FALSE(r.note.empty());
  const StressReport ok = make_report(0.0622, 0.0618);
  REQUIRE(ok.stress_ratio.has_value());
  CHECK(*ok.stress_ratio == doctest::Approx(0.0618 / 0.0622));
}

TEST_CASE("distance_scatter") {
  Coordsd tri(3, 2);
  tri << 0, 0, 1, 0, 0, 1;
  const auto d = from_points(tri);
  const auto pairs = distance_scatter(d, tri);
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0].i == 0);
  CHECK(pairs[0].j == 1);
  CHECK(pairs[2].i == 1);
  CHECK(pairs[2].j == 2);
  for (const auto& p : pairs) CHECK(p.feature_distance == p.embedding_distance);

  std::mt19937_64 rng(4);
  const Coordsd x = oracle::random_points(rng, 9);
  const Coordsd z = oracle::random_points(rng, 9);
  const auto dx = from_points(x);
  const auto sc = distance_scatter(dx, z);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < 9; ++i) {
    for (Eigen::Index j = i + 1; j < 9; ++j, ++k) {
      CHECK(sc[k].feature_distance == dx(i, j));
      CHECK(std::abs(sc[k].embedding_distance -
                     std::hypot(z(i, 0) - z(j, 0), z(i, 1) - z(j, 1))) < 1e-12);
    }
  }
}
