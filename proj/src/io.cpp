#include "stablemds/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace stablemds::io {
namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  return out;
}

std::string realization_name(int k) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "realization_%03d.csv", k);
  return buf;
}

const std::string& num(double v, std::string& scratch) {
  scratch = format_number(v);
  return scratch;
}

}  // namespace

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  std::string s;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << num(m(i, j), s);
    out << '\n';
  }
}

void write_coords(std::ostream& out, const Coordsd& coords, const std::vector<Eigen::Index>& ids) {
  std::string s;
  out << "sample_id,mds1,mds2\n";
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    out << (ids.empty() ? i : ids[static_cast<std::size_t>(i)]) << ',' << num(coords(i, 0), s);
    out << ',' << num(coords(i, 1), s) << '\n';
  }
}

void write_anchors(std::ostream& out, const AnchorSetd& anchors) {
  write_coords(out, anchors.coords, anchors.vertex_indices);
}

void write_scatter(std::ostream& out, const std::vector<ScatterPair<double>>& pairs) {
  std::string s;
  out << "i,j,d_feature,d_lds\n";
  for (const auto& p : pairs) {
    out << p.i << ',' << p.j << ',' << num(p.feature_distance, s);
    out << ',' << num(p.embedding_distance, s) << '\n';
  }
}

void write_transform_header(std::ostream& out) { out << "label,r11,r12,r21,r22,t1,t2,lse\n"; }

void write_transform(std::ostream& out, const std::string& label, const RigidTransformd& t) {
  std::string s;
  out << label;
  for (double v : {t.rotation(0, 0), t.rotation(0, 1), t.rotation(1, 0), t.rotation(1, 1),
                   t.translation(0), t.translation(1), t.lse}) {
    out << ',' << num(v, s);
  }
  out << '\n';
}

void write_sweep(std::ostream& out, const std::vector<SweepRow>& rows) {
  std::string s;
  out << "size,metric,seed,sigma_n,sigma_oosp,sr\n";
  for (const auto& r : rows) {
    out << r.sample_size << ',' << to_string(r.metric) << ',' << r.seed << ',' << num(r.sigma_n, s);
    out << ',' << num(r.sigma_oosp, s) << ',' << num(r.sr, s) << '\n';
  }
}

void write_trajectory(std::ostream& out, const std::vector<TrajectoryPoint>& points) {
  std::string s;
  out << "zeta,feature_list,mds1,mds2,sr\n";
  for (const auto& p : points) {
    std::string features;
    for (std::size_t i = 0; i < p.varied_features.size(); ++i) {
      features += (i ? ";" : "") + p.varied_features[i];
    }
    out << num(p.multiplier, s) << ',' << features << ',' << num(p.oosp_coord(0), s);
    out << ',' << num(p.oosp_coord(1), s) << ',' << num(p.sr, s) << '\n';
  }
}

nlohmann::ordered_json embedding_metadata(const std::string& name, const Embeddingd& e) {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["seed"] = e.seed;
  j["raw_stress"] = e.raw_stress;
  j["iterations"] = e.iterations;
  j["converged"] = e.converged;
  return j;
}

void write_ensemble(const fs::path& dir, const StabilizedEnsemble& e) {
  fs::create_directories(dir / "embeddings");
  fs::create_directories(dir / "stabilized");

  { auto out = open_out(dir / "dissimilarity.csv"); write_matrix(out, e.dissimilarity.entries); }
  { auto out = open_out(dir / "embeddings" / "base.csv"); write_coords(out, e.base.coords); }

  auto meta = open_out(dir / "embeddings.jsonl");
  meta << embedding_metadata("base", e.base).dump() << '\n';
  auto transforms = open_out(dir / "transforms.csv");
  write_transform_header(transforms);
  for (int k = 1; k <= e.realization_count(); ++k) {
    const auto slot = static_cast<std::size_t>(k - 1);
    const std::string name = realization_name(k);
    { auto out = open_out(dir / "embeddings" / name); write_coords(out, e.realizations[slot].coords); }
    { auto out = open_out(dir / "stabilized" / name); write_coords(out, e.stabilized[slot]); }
    meta << embedding_metadata(name.substr(0, name.size() - 4), e.realizations[slot]).dump()
         << '\n';
    write_transform(transforms, std::to_string(k), e.transforms[slot]);
  }

  { auto out = open_out(dir / "expectation.csv"); write_coords(out, e.expectation); }
  {
    std::string s;
    auto out = open_out(dir / "dispersion.csv");
    out << "sample_id,sd1,sd2\n";
    for (Eigen::Index i = 0; i < e.dispersion.rows(); ++i) {
      out << i << ',' << num(e.dispersion(i, 0), s) << ',' << num(e.dispersion(i, 1), s) << '\n';
    }
  }
  { auto out = open_out(dir / "anchors.csv"); write_anchors(out, e.anchor_set); }
  {
    auto out = open_out(dir / "scatter.csv");
    write_scatter(out, distance_scatter(e.dissimilarity, e.expectation));
  }
}

void write_oosp_bundle(const fs::path& dir, const StabilizedEnsemble& n_case, const OOSPResult& r) {
  write_ensemble(dir / "n_case", n_case);
  write_ensemble(dir / "n_plus_1", r.augmented);
  {
    auto out = open_out(dir / "anchor_transform.csv");
    write_transform_header(out);
    write_transform(out, "oosp", r.anchor_transform);
  }
  {
    auto out = open_out(dir / "common_anchors.csv");
    std::string s;
    out << "sample_id,n_mds1,n_mds2,oosp_mds1,oosp_mds2\n";
    for (std::size_t i = 0; i < r.anchor_pairs.sample_indices.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      out << r.anchor_pairs.sample_indices[i];
      for (double v : {r.anchor_pairs.first(row, 0), r.anchor_pairs.first(row, 1),
                       r.anchor_pairs.second(row, 0), r.anchor_pairs.second(row, 1)}) {
        out << ',' << num(v, s);
      }
      out << '\n';
    }
  }
  { auto out = open_out(dir / "stabilized_oosp.csv"); write_coords(out, r.expectation_oosp); }
  {
    auto out = open_out(dir / "scatter_oosp.csv");
    write_scatter(out, distance_scatter(r.augmented.dissimilarity, r.expectation_oosp));
  }
}

void write_record(const fs::path& path, const nlohmann::ordered_json& record) {
  write_text(path, record.dump() + "\n");
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  auto out = open_out(path);
  out << text;
}

}  // namespace stablemds::io
