#pragma once

#include "stablemds/core.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace stablemds {

struct Schema {
  std::vector<std::string> predictors;
  /// Empty when the table carries no response column of interest.
  std::string response;
};

/// Tabular well data: one row per sample.
struct RawDataset {
  std::vector<std::string> predictor_names;
  std::string response_name;
  Eigen::MatrixXd predictors;  // n_samples x n_predictors
  Eigen::VectorXd response;    // n_samples, empty when no response

  Eigen::Index n_samples() const { return predictors.rows(); }
  Eigen::Index n_predictors() const { return predictors.cols(); }
  bool has_response() const { return !response_name.empty(); }

  /// Column of a predictor by name; throws Config when absent.
  Eigen::Index predictor_index(const std::string& name) const;
  /// Rows selected by index, in the given order.
  RawDataset subset(const std::vector<Eigen::Index>& rows) const;
};

RawDataset load_table(std::istream& in, const Schema& schema);
RawDataset load_table(const std::filesystem::path& path, const Schema& schema);

/// Canonical table: header then shortest round-trip decimals.
void write_table(std::ostream& out, const RawDataset& data);

/// Shortest decimal string that parses back to the same double.
std::string format_number(double value);

enum class ParamSource { Self, External };

struct StandardizationParams {
  Eigen::RowVectorXd means;
  Eigen::RowVectorXd stds;
};

struct StandardizedDataset {
  Eigen::MatrixXd values;
  StandardizationParams params;
  ParamSource source = ParamSource::Self;

  Eigen::Index n_samples() const { return values.rows(); }
};

/// Population mean and standard deviation per column.
StandardizationParams fit_standardization(const Eigen::MatrixXd& values);

/// (x - mean) / std column-wise. Without params, they are fitted on `data`.
StandardizedDataset standardize(const Eigen::MatrixXd& values,
                                const std::optional<StandardizationParams>& params = std::nullopt);
inline StandardizedDataset standardize(
    const RawDataset& data, const std::optional<StandardizationParams>& params = std::nullopt) {
  return standardize(data.predictors, params);
}

Eigen::RowVectorXd standardize_record(const Eigen::RowVectorXd& record,
                                      const StandardizationParams& params);

struct CategoricalResponse {
  std::vector<double> thresholds;
  std::vector<std::string> labels;
  /// Index into labels per sample.
  std::vector<std::size_t> assignments;

  const std::string& label_of(std::size_t sample) const { return labels[assignments[sample]]; }
};

/// Right-inclusive bins; a value equal to the first edge falls into bin 0.
CategoricalResponse bin_response(const Eigen::VectorXd& values, std::vector<double> thresholds,
                                 std::vector<std::string> labels);

inline const std::vector<std::string>& default_bin_labels() {
  static const std::vector<std::string> labels{"low", "med", "high", "vhigh"};
  return labels;
}

struct FeatureInterval {
  double lower = 0;
  double upper = 0;
  double level = 0.95;

  bool contains(double v) const { return v >= lower && v <= upper; }
};

/// Linearly interpolated percentile (order-statistic position q * (n - 1)).
double percentile(std::vector<double> values, double q);

/// Central empirical interval [(1 - level) / 2, 1 - (1 - level) / 2].
FeatureInterval feature_interval(const Eigen::VectorXd& values, double level = 0.95);

/// One synthetic sample, each predictor uniform within its interval.
Eigen::RowVectorXd generate_oosp(const RawDataset& data, std::int64_t seed, double level = 0.95);

}  // namespace stablemds
