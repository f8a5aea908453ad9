#pragma once

#include "stablemds/experiments.hpp"
#include "stablemds/pipeline.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace stablemds::io {

/// Dense n x n block, row-major, no header.
void write_matrix(std::ostream& out, const Eigen::MatrixXd& m);

/// sample_id,mds1,mds2 rows; ids are 0-based row indices unless given.
void write_coords(std::ostream& out, const Coordsd& coords,
                  const std::vector<Eigen::Index>& ids = {});

/// Anchor rows in hull order.
void write_anchors(std::ostream& out, const AnchorSetd& anchors);

/// i,j,d_feature,d_lds rows.
void write_scatter(std::ostream& out, const std::vector<ScatterPair<double>>& pairs);

/// Header line for transform records.
void write_transform_header(std::ostream& out);
/// label,r11,r12,r21,r22,t1,t2,lse
void write_transform(std::ostream& out, const std::string& label, const RigidTransformd& t);

void write_sweep(std::ostream& out, const std::vector<SweepRow>& rows);
void write_trajectory(std::ostream& out, const std::vector<TrajectoryPoint>& points);

nlohmann::ordered_json embedding_metadata(const std::string& name, const Embeddingd& e);

/// Writes the ensemble's dump files under `dir` (created if needed).
void write_ensemble(const std::filesystem::path& dir, const StabilizedEnsemble& e);

/// N-case bundle under dir/n_case, augmented case under dir/n_plus_1, plus the
/// anchor transform, S_OOSP and its scatter data at the top level.
void write_oosp_bundle(const std::filesystem::path& dir, const StabilizedEnsemble& n_case,
                       const OOSPResult& r);

/// Single-line JSON record followed by a newline.
void write_record(const std::filesystem::path& path, const nlohmann::ordered_json& record);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace stablemds::io
