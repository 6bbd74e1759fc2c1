#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/features.hpp"

namespace breathsim {

// Feature matrix plus labels and per-row provenance. Row-major storage.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<std::string> feature_names)
      : feature_names_(std::move(feature_names)) {}

  void append_row(std::span<const double> features, int label, double distance_m,
                  std::uint64_t seed);

  std::size_t rows() const { return labels_.size(); }
  std::size_t cols() const { return feature_names_.size(); }
  std::span<const double> row(std::size_t i) const {
    return {x_.data() + i * cols(), cols()};
  }
  double at(std::size_t row, std::size_t col) const { return x_[row * cols() + col]; }
  int label(std::size_t i) const { return labels_[i]; }
  double distance_m(std::size_t i) const { return distance_m_[i]; }
  std::uint64_t seed(std::size_t i) const { return seeds_[i]; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }

  Dataset subset(std::span<const std::size_t> row_indices) const;

  // One distance shared by every row, NaN otherwise.
  double common_distance() const;

 private:
  std::vector<std::string> feature_names_;
  std::vector<double> x_;
  std::vector<int> labels_;
  std::vector<double> distance_m_;
  std::vector<std::uint64_t> seeds_;
};

// CSV with header feature_names + "label,distance_m,seed", one row per
// recording, shortest round-trip decimal for doubles.
void write_feature_csv(std::ostream& out, const Dataset& ds);
Dataset read_feature_csv(std::istream& in);

void write_feature_csv_file(const std::string& path, const Dataset& ds);
Dataset read_feature_csv_file(const std::string& path);

}  // namespace breathsim
