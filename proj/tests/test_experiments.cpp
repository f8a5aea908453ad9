#include "stablemds/experiments.hpp"

#include <doctest.h>

#include <set>

using namespace stablemds;

namespace {

const Schema kSynthetic{{"Por", "AI", "TOC"}, "Prod"};

RawDataset fixture() {
  return load_table(std::string(STABLEMDS_DATA_DIR) + "/unconv_synthetic.csv", kSynthetic);
}

}  // namespace

TEST_CASE("draw_subset") {
  const auto a = draw_subset(200, 30, 7);
  CHECK(a.size() == 30);
  CHECK(std::set<Eigen::Index>(a.begin(), a.end()).size() == 30);
  for (Eigen::Index i : a) CHECK((i >= 0 && i < 200));
  CHECK(a == draw_subset(200, 30, 7));
  CHECK(a != draw_subset(200, 30, 8));
  CHECK(draw_subset(5, 5, 1).size() == 5);
  CHECK_THROWS_AS(draw_subset(5, 6, 1), Error);
}

TEST_CASE("experiment_seed") {
  CHECK(experiment_seed(0, 30) == 30);
  CHECK(experiment_seed(2, 30) == 2030);
}

TEST_CASE("sample_size_sweep: rows are deterministic and well-formed") {
  const RawDataset data = fixture();
  PipelineConfig c;
  c.ensemble.realization_count = 8;
  const SweepResult a = sample_size_sweep(data, {10, 20}, Metric::Euclidean, c, 3);
  const SweepResult b = sample_size_sweep(data, {10, 20}, Metric::Euclidean, c, 3);
  CHECK(a.rows.size() + a.skipped.size() == 2);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].sr == b.rows[i].sr);
    CHECK(a.rows[i].seed == experiment_seed(3, a.rows[i].sample_size));
    CHECK(a.rows[i].sr == doctest::Approx(a.rows[i].sigma_oosp / a.rows[i].sigma_n));
  }
  CHECK_THROWS_AS(sample_size_sweep(data, {500}, Metric::Euclidean, c, 3), Error);
}

TEST_CASE("oosp_trajectory: unit multiplier reproduces the plain OOSP run") {
  const RawDataset full = fixture();
  const RawDataset data = full.subset(draw_subset(full.n_samples(), 25, 11));
  PipelineConfig c;
  c.ensemble.realization_count = 8;
  const Eigen::RowVectorXd oosp = generate_oosp(data, 4);
  const auto traj =
      oosp_trajectory(data, oosp, {"Por", "TOC"}, {1.0, 1.2}, Metric::Euclidean, c);
  REQUIRE(traj.size() == 2);
  CHECK(traj[0].multiplier == 1.0);
  CHECK(traj[0].varied_features == std::vector<std::string>{"Por", "TOC"});
  CHECK((traj[0].nearest_sample >= 0 && traj[0].nearest_sample < 25));

  const StandardizedDataset sd = standardize(data);
  const StabilizedEnsemble n_case = stabilize_n_case(sd, Metric::Euclidean, c);
  const OOSPResult r = stabilize_oosp_case(sd, standardize_record(oosp, sd.params), n_case,
                                           Metric::Euclidean, c);
  CHECK(traj[0].oosp_coord == r.oosp_coord);
  CHECK(traj[0].sr == *r.report.stress_ratio);

  CHECK_THROWS_AS(oosp_trajectory(data, oosp, {"Nope"}, {1.0}, Metric::Euclidean, c), Error);
}
