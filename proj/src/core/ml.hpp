#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/rng.hpp"

namespace breathsim::ml {

enum class ModelKind { tree, forest };

const char* model_kind_name(ModelKind k);          // "dt" | "rf"
ModelKind model_kind_from_name(std::string_view);  // Err::invalid_argument on unknown

// Candidate feature count per split: all features, floor(sqrt(F)), or a
// fixed count.
struct FeatureSubset {
  enum class Mode { all, sqrt_of, fixed } mode = Mode::all;
  int count = 0;

  int resolve(int n_features) const;
  static FeatureSubset all() { return {Mode::all, 0}; }
  static FeatureSubset sqrt_of() { return {Mode::sqrt_of, 0}; }
  static FeatureSubset fixed(int n) { return {Mode::fixed, n}; }
};

struct TrainConfig {
  int max_depth = 12;
  int min_samples_split = 2;
  double min_impurity_decrease = 0.0;
  int n_trees = 100;  // forests only
  FeatureSubset features_per_split = FeatureSubset::sqrt_of();
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

TrainConfig dt_default_config();  // all features, no bootstrap
TrainConfig rf_default_config();  // 100 trees, sqrt features, bootstrap

// Binary split node; leaves hold per-class sample counts. Routing rule:
// feature value <= threshold goes left.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::unique_ptr<TreeNode> left;
  std::unique_ptr<TreeNode> right;
  std::array<std::int64_t, kClassCount> counts{};

  bool is_leaf() const { return feature < 0; }
};

/// Gini impurity 1 - sum((c_k/n)^2); counts must sum to >= 1.
double gini(std::span<const std::int64_t> counts);

struct SplitChoice {
  int feature = 0;
  double threshold = 0.0;
  double impurity_decrease = 0.0;
};

/// Exhaustive CART split search over midpoint thresholds of the candidate
/// features. Ties resolve to the lowest feature index, then the lowest
/// threshold. Empty when no split clears min_impurity_decrease with a
/// strictly positive decrease.
std::optional<SplitChoice> best_split(const Dataset& ds, std::span<const std::size_t> rows,
                                      std::span<const int> candidate_features,
                                      double min_impurity_decrease);

/// Recursive CART induction over the given rows. When the configured feature
/// subset is smaller than F, a fresh uniform subset is drawn from rng at each
/// node.
std::unique_ptr<TreeNode> train_tree(const Dataset& ds, const TrainConfig& config,
                                     std::vector<std::size_t> rows, Rng& rng);

struct Model {
  ModelKind kind = ModelKind::tree;
  TrainConfig config;
  std::vector<std::string> feature_names;
  int class_count = kClassCount;
  std::vector<std::unique_ptr<TreeNode>> trees;
};

/// Trains a single tree or a bagged forest. Forest trees derive their seeds
/// from (config.seed, tree index), so the result does not depend on training
/// order or parallelism.
Model train_model(const Dataset& ds, ModelKind kind, const TrainConfig& config);

struct Prediction {
  int class_id = 0;
  std::array<double, kClassCount> scores{};
};

Prediction predict(const TreeNode& root, std::span<const double> features);
Prediction predict(const Model& model, std::span<const double> features);

/// Fraction of rows whose prediction matches the label.
double evaluate_accuracy(const Model& model, const Dataset& ds);

std::string model_to_json(const Model& model);
Model model_from_json(const std::string& text);
void save_model_file(const std::string& path, const Model& model);
Model load_model_file(const std::string& path);

}  // namespace breathsim::ml
