#include "stablemds/data_ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace stablemds {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

// Comma split with double-quoted fields ("" escapes a quote).
std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  out.push_back(trim(cell));
  return out;
}

bool parse_double(const std::string& text, double& value) {
  if (text.empty()) return false;
  const char* begin = text.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(value);
}

}  // namespace

Eigen::Index RawDataset::predictor_index(const std::string& name) const {
  const auto it = std::find(predictor_names.begin(), predictor_names.end(), name);
  if (it == predictor_names.end()) {
    throw Error(ErrorKind::Config, "unknown predictor '" + name + "'");
  }
  return static_cast<Eigen::Index>(it - predictor_names.begin());
}

RawDataset RawDataset::subset(const std::vector<Eigen::Index>& rows) const {
  RawDataset out;
  out.predictor_names = predictor_names;
  out.response_name = response_name;
  out.predictors.resize(static_cast<Eigen::Index>(rows.size()), predictors.cols());
  if (has_response()) out.response.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto dst = static_cast<Eigen::Index>(r);
    out.predictors.row(dst) = predictors.row(rows[r]);
    if (has_response()) out.response(dst) = response(rows[r]);
  }
  return out;
}

RawDataset load_table(std::istream& in, const Schema& schema) {
  if (schema.predictors.empty()) throw Error(ErrorKind::Config, "schema lists no predictors");
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::EmptyDataset, "input has no header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const std::vector<std::string> header = split_row(line);
  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t c = 0; c < header.size(); ++c) column.emplace(header[c], c);

  auto locate = [&](const std::string& name) {
    const auto it = column.find(name);
    if (it == column.end()) throw Error(ErrorKind::Schema, "missing column '" + name + "'");
    return it->second;
  };
  std::vector<std::size_t> wanted;
  for (const auto& p : schema.predictors) wanted.push_back(locate(p));
  const bool with_response = !schema.response.empty();
  if (with_response) wanted.push_back(locate(schema.response));

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_row(line);
    std::vector<double> values;
    values.reserve(wanted.size());
    for (std::size_t w = 0; w < wanted.size(); ++w) {
      const std::size_t c = wanted[w];
      double v = 0;
      if (c >= cells.size() || !parse_double(cells[c], v)) {
        std::ostringstream msg;
        msg << "line " << line_no << ", column '" << header[c] << "': not a number ("
            << (c < cells.size() ? "'" + cells[c] + "'" : "missing cell") << ")";
        throw Error(ErrorKind::Parse, msg.str());
      }
      values.push_back(v);
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw Error(ErrorKind::EmptyDataset, "input has a header but no data rows");

  RawDataset out;
  out.predictor_names = schema.predictors;
  out.response_name = schema.response;
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = static_cast<Eigen::Index>(schema.predictors.size());
  out.predictors.resize(n, m);
  if (with_response) out.response.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m; ++j) out.predictors(i, j) = row[static_cast<std::size_t>(j)];
    if (with_response) out.response(i) = row.back();
  }
  return out;
}

RawDataset load_table(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  return load_table(in, schema);
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_table(std::ostream& out, const RawDataset& data) {
  for (std::size_t j = 0; j < data.predictor_names.size(); ++j) {
    out << (j ? "," : "") << data.predictor_names[j];
  }
  if (data.has_response()) out << ',' << data.response_name;
  out << '\n';
  for (Eigen::Index i = 0; i < data.n_samples(); ++i) {
    for (Eigen::Index j = 0; j < data.n_predictors(); ++j) {
      out << (j ? "," : "") << format_number(data.predictors(i, j));
    }
    if (data.has_response()) out << ',' << format_number(data.response(i));
    out << '\n';
  }
}

StandardizationParams fit_standardization(const Eigen::MatrixXd& values) {
  if (values.rows() < 1) throw Error(ErrorKind::EmptyDataset, "cannot standardize an empty table");
  StandardizationParams p;
  p.means = values.colwise().mean();
  const Eigen::MatrixXd centered = values.rowwise() - p.means;
  p.stds = (centered.colwise().squaredNorm() / static_cast<double>(values.rows())).cwiseSqrt();
  return p;
}

StandardizedDataset standardize(const Eigen::MatrixXd& values,
                                const std::optional<StandardizationParams>& params) {
  StandardizedDataset out;
  if (params) {
    if (params->means.size() != values.cols() || params->stds.size() != values.cols()) {
      throw Error(ErrorKind::Config, "standardization parameters do not match the column count");
    }
    if ((params->stds.array() <= 0).any()) {
      throw Error(ErrorKind::ConstantFeature, "external standard deviations must be positive");
    }
    out.params = *params;
    out.source = ParamSource::External;
  } else {
    out.params = fit_standardization(values);
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      // Relative test so that a constant column with rounding noise is still rejected.
      const double scale = std::max(1.0, std::abs(out.params.means(j)));
      if (!(out.params.stds(j) > 1e-12 * scale)) {
        throw Error(ErrorKind::ConstantFeature,
                    "predictor column " + std::to_string(j) + " has zero variance");
      }
    }
    out.source = ParamSource::Self;
  }
  out.values = (values.rowwise() - out.params.means).array().rowwise() / out.params.stds.array();
  return out;
}

Eigen::RowVectorXd standardize_record(const Eigen::RowVectorXd& record,
                                      const StandardizationParams& params) {
  if (record.size() != params.means.size()) {
    throw Error(ErrorKind::Config, "record length does not match the predictor count");
  }
  return (record - params.means).array() / params.stds.array();
}

CategoricalResponse bin_response(const Eigen::VectorXd& values, std::vector<double> thresholds,
                                 std::vector<std::string> labels) {
  if (thresholds.size() < 2 || labels.size() + 1 != thresholds.size()) {
    throw Error(ErrorKind::Config, "need one more threshold than labels");
  }
  if (!std::is_sorted(thresholds.begin(), thresholds.end(), std::less_equal<>())) {
    throw Error(ErrorKind::Config, "thresholds must be strictly increasing");
  }
  CategoricalResponse out;
  out.assignments.reserve(static_cast<std::size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = values(i);
    if (!(v >= thresholds.front() && v <= thresholds.back())) {
      std::ostringstream msg;
      msg << "response value " << v << " at row " << i << " is outside [" << thresholds.front()
          << ", " << thresholds.back() << "]";
      throw Error(ErrorKind::OutOfRange, msg.str());
    }
    // First edge strictly >= v gives the right-inclusive bin.
    const auto edge = std::lower_bound(thresholds.begin() + 1, thresholds.end(), v);
    out.assignments.push_back(static_cast<std::size_t>(edge - thresholds.begin() - 1));
  }
  out.thresholds = std::move(thresholds);
  out.labels = std::move(labels);
  return out;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorKind::InsufficientData, "percentile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

FeatureInterval feature_interval(const Eigen::VectorXd& values, double level) {
  if (!(level > 0 && level <= 1)) throw Error(ErrorKind::Domain, "confidence level must be in (0, 1]");
  std::vector<double> v(values.data(), values.data() + values.size());
  if (v.size() < 2 || std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); })) {
    throw Error(ErrorKind::InsufficientData, "interval needs at least 2 distinct values");
  }
  const double tail = (1.0 - level) / 2.0;
  return {percentile(v, tail), percentile(v, 1.0 - tail), level};
}

Eigen::RowVectorXd generate_oosp(const RawDataset& data, std::int64_t seed, double level) {
  const CounterRng rng(static_cast<std::uint64_t>(seed), /*stream=*/0x0057);
  Eigen::RowVectorXd out(data.n_predictors());
  for (Eigen::Index j = 0; j < data.n_predictors(); ++j) {
    const FeatureInterval iv = feature_interval(data.predictors.col(j), level);
    out(j) = iv.lower + rng.uniform(static_cast<std::uint64_t>(j)) * (iv.upper - iv.lower);
  }
  return out;
}

}  // namespace stablemds
