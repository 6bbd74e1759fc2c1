#include "core/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace breathsim {

namespace {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, std::size_t line_no, const char* what) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    fail(Err::data_format,
         "line " + std::to_string(line_no) + ": bad " + what + " value '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t parse_u64(std::string_view s, std::size_t line_no, const char* what) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    fail(Err::data_format,
         "line " + std::to_string(line_no) + ": bad " + what + " value '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

}  // namespace

void Dataset::append_row(std::span<const double> features, int label, double distance_m,
                         std::uint64_t seed) {
  require(features.size() == cols(), Err::dimension_mismatch,
          "feature row length does not match the dataset width");
  require(label >= 0 && label < kClassCount, Err::invalid_argument,
          "label out of range 0..7");
  for (double v : features)
    require(std::isfinite(v), Err::invalid_argument, "non-finite feature value");
  x_.insert(x_.end(), features.begin(), features.end());
  labels_.push_back(label);
  distance_m_.push_back(distance_m);
  seeds_.push_back(seed);
}

Dataset Dataset::subset(std::span<const std::size_t> row_indices) const {
  Dataset out(feature_names_);
  for (std::size_t i : row_indices)
    out.append_row(row(i), labels_[i], distance_m_[i], seeds_[i]);
  return out;
}

double Dataset::common_distance() const {
  if (rows() == 0) return std::numeric_limits<double>::quiet_NaN();
  const double d = distance_m_[0];
  for (double v : distance_m_) {
    if (v != d) return std::numeric_limits<double>::quiet_NaN();
  }
  return d;
}

void write_feature_csv(std::ostream& out, const Dataset& ds) {
  for (const auto& name : ds.feature_names()) out << name << ',';
  out << "label,distance_m,seed\n";
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    const auto row = ds.row(i);
    for (double v : row) out << format_double(v) << ',';
    out << ds.label(i) << ',' << format_double(ds.distance_m(i)) << ',' << ds.seed(i)
        << '\n';
  }
  if (!out) fail(Err::io_failure, "failed writing feature CSV");
}

Dataset read_feature_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(Err::data_format, "line 1: missing CSV header");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::string expected;
  for (const auto& name : features::feature_names()) {
    expected += name;
    expected += ',';
  }
  expected += "label,distance_m,seed";
  if (line != expected) {
    fail(Err::data_format, "line 1: unexpected CSV header (expected '" + expected + "')");
  }

  const std::size_t n_features = features::feature_names().size();
  std::vector<std::string> names(features::feature_names().begin(),
                                 features::feature_names().end());
  Dataset ds(names);
  std::size_t line_no = 1;
  std::vector<double> row(n_features);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != n_features + 3) {
      fail(Err::data_format, "line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(n_features + 3) + " fields, got " +
                                 std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < n_features; ++j) {
      row[j] = parse_double(fields[j], line_no, "feature");
      if (!std::isfinite(row[j])) {
        fail(Err::data_format,
             "line " + std::to_string(line_no) + ": non-finite feature value");
      }
    }
    const double label_raw = parse_double(fields[n_features], line_no, "label");
    const int label = static_cast<int>(label_raw);
    if (label_raw != static_cast<double>(label) || label < 0 || label >= kClassCount) {
      fail(Err::data_format, "line " + std::to_string(line_no) + ": bad label");
    }
    const double dist = parse_double(fields[n_features + 1], line_no, "distance_m");
    const std::uint64_t seed = parse_u64(fields[n_features + 2], line_no, "seed");
    ds.append_row(row, label, dist, seed);
  }
  return ds;
}

void write_feature_csv_file(const std::string& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) fail(Err::io_failure, "cannot open '" + path + "' for writing");
  write_feature_csv(out, ds);
  out.flush();
  if (!out) fail(Err::io_failure, "failed writing '" + path + "'");
}

Dataset read_feature_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::io_failure, "cannot open '" + path + "' for reading");
  return read_feature_csv(in);
}

}  // namespace breathsim
