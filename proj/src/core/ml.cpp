#include "core/ml.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "core/parallel.hpp"
#include "core/version.hpp"

namespace breathsim::ml {

namespace {

using json = nlohmann::json;

std::array<std::int64_t, kClassCount> count_labels(const Dataset& ds,
                                                   std::span<const std::size_t> rows) {
  std::array<std::int64_t, kClassCount> counts{};
  for (std::size_t r : rows) counts[static_cast<std::size_t>(ds.label(r))]++;
  return counts;
}

bool is_pure(const std::array<std::int64_t, kClassCount>& counts) {
  int nonzero = 0;
  for (std::int64_t c : counts)
    if (c > 0) ++nonzero;
  return nonzero <= 1;
}

std::unique_ptr<TreeNode> make_leaf(const std::array<std::int64_t, kClassCount>& counts) {
  auto leaf = std::make_unique<TreeNode>();
  leaf->counts = counts;
  return leaf;
}

std::unique_ptr<TreeNode> train_node(const Dataset& ds, const TrainConfig& config,
                                     std::vector<std::size_t>&& rows, Rng& rng, int depth) {
  const auto counts = count_labels(ds, rows);
  const int n_features = static_cast<int>(ds.cols());
  const int per_split = config.features_per_split.resolve(n_features);

  if (depth >= config.max_depth || rows.size() < static_cast<std::size_t>(config.min_samples_split) ||
      is_pure(counts)) {
    return make_leaf(counts);
  }

  std::vector<int> candidates;
  if (per_split >= n_features) {
    candidates.resize(static_cast<std::size_t>(n_features));
    std::iota(candidates.begin(), candidates.end(), 0);
  } else {
    // Partial Fisher-Yates draw without replacement, then sorted so the
    // tie-break order stays by feature index.
    std::vector<int> pool(static_cast<std::size_t>(n_features));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < per_split; ++i) {
      const std::size_t j =
          static_cast<std::size_t>(i) +
          rng.uniform_below(static_cast<std::uint64_t>(n_features - i));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    candidates.assign(pool.begin(), pool.begin() + per_split);
    std::sort(candidates.begin(), candidates.end());
  }

  const auto split = best_split(ds, rows, candidates, config.min_impurity_decrease);
  if (!split) return make_leaf(counts);

  std::vector<std::size_t> left_rows, right_rows;
  left_rows.reserve(rows.size());
  right_rows.reserve(rows.size());
  for (std::size_t r : rows) {
    if (ds.at(r, static_cast<std::size_t>(split->feature)) <= split->threshold)
      left_rows.push_back(r);
    else
      right_rows.push_back(r);
  }
  rows.clear();
  rows.shrink_to_fit();

  auto node = std::make_unique<TreeNode>();
  node->feature = split->feature;
  node->threshold = split->threshold;
  node->left = train_node(ds, config, std::move(left_rows), rng, depth + 1);
  node->right = train_node(ds, config, std::move(right_rows), rng, depth + 1);
  return node;
}

void validate_config(const TrainConfig& c, int n_features) {
  require(c.max_depth >= 1, Err::invalid_argument, "max_depth must be >= 1");
  require(c.min_samples_split >= 2, Err::invalid_argument, "min_samples_split must be >= 2");
  require(c.min_impurity_decrease >= 0.0, Err::invalid_argument,
          "min_impurity_decrease must be >= 0");
  require(c.n_trees >= 1, Err::invalid_argument, "n_trees must be >= 1");
  const int k = c.features_per_split.resolve(n_features);
  require(k >= 1 && k <= n_features, Err::invalid_argument,
          "features_per_split resolves outside 1..F");
}

json node_to_json(const TreeNode& node) {
  if (node.is_leaf()) {
    json counts = json::array();
    for (std::int64_t c : node.counts) counts.push_back(c);
    return json{{"counts", std::move(counts)}};
  }
  return json{{"f", node.feature},
              {"t", node.threshold},
              {"l", node_to_json(*node.left)},
              {"r", node_to_json(*node.right)}};
}

std::unique_ptr<TreeNode> node_from_json(const json& j, int n_features) {
  require(j.is_object(), Err::schema_violation, "tree node must be an object");
  auto node = std::make_unique<TreeNode>();
  if (j.contains("counts")) {
    const auto& counts = j.at("counts");
    require(counts.is_array() && counts.size() == kClassCount, Err::schema_violation,
            "leaf counts must be an array of 8 integers");
    std::int64_t total = 0;
    for (std::size_t k = 0; k < kClassCount; ++k) {
      require(counts[k].is_number_integer(), Err::schema_violation,
              "leaf counts must be integers");
      node->counts[k] = counts[k].get<std::int64_t>();
      require(node->counts[k] >= 0, Err::schema_violation, "leaf counts must be >= 0");
      total += node->counts[k];
    }
    require(total >= 1, Err::schema_violation, "leaf counts must sum to >= 1");
    return node;
  }
  require(j.contains("f") && j.contains("t") && j.contains("l") && j.contains("r"),
          Err::schema_violation, "internal node must carry f, t, l, r");
  require(j.at("f").is_number_integer(), Err::schema_violation, "feature index must be an integer");
  node->feature = j.at("f").get<int>();
  require(node->feature >= 0 && node->feature < n_features, Err::schema_violation,
          "feature index out of range");
  require(j.at("t").is_number(), Err::schema_violation, "threshold must be a number");
  node->threshold = j.at("t").get<double>();
  require(std::isfinite(node->threshold), Err::schema_violation, "threshold must be finite");
  node->left = node_from_json(j.at("l"), n_features);
  node->right = node_from_json(j.at("r"), n_features);
  return node;
}

json subset_to_json(const FeatureSubset& s) {
  switch (s.mode) {
    case FeatureSubset::Mode::all: return json("all");
    case FeatureSubset::Mode::sqrt_of: return json("sqrt");
    case FeatureSubset::Mode::fixed: return json(s.count);
  }
  return json("all");
}

FeatureSubset subset_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "all") return FeatureSubset::all();
    if (s == "sqrt") return FeatureSubset::sqrt_of();
    fail(Err::schema_violation, "features_per_split must be 'all', 'sqrt', or an integer");
  }
  require(j.is_number_integer(), Err::schema_violation,
          "features_per_split must be 'all', 'sqrt', or an integer");
  return FeatureSubset::fixed(j.get<int>());
}

}  // namespace

const char* model_kind_name(ModelKind k) { return k == ModelKind::tree ? "dt" : "rf"; }

ModelKind model_kind_from_name(std::string_view name) {
  if (name == "dt" || name == "tree") return ModelKind::tree;
  if (name == "rf" || name == "forest") return ModelKind::forest;
  fail(Err::invalid_argument, "unknown model kind '" + std::string(name) + "'");
}

int FeatureSubset::resolve(int n_features) const {
  switch (mode) {
    case Mode::all: return n_features;
    case Mode::sqrt_of:
      return std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(n_features)))));
    case Mode::fixed: return count;
  }
  return n_features;
}

TrainConfig dt_default_config() {
  TrainConfig c;
  c.n_trees = 1;
  c.features_per_split = FeatureSubset::all();
  c.bootstrap = false;
  return c;
}

TrainConfig rf_default_config() { return TrainConfig{}; }

double gini(std::span<const std::int64_t> counts) {
  std::int64_t total = 0;
  for (std::int64_t c : counts) {
    require(c >= 0, Err::invalid_argument, "negative class count");
    total += c;
  }
  require(total >= 1, Err::empty_node, "gini of an empty node");
  const double n = static_cast<double>(total);
  double sum_sq = 0.0;
  for (std::int64_t c : counts) {
    const double p = static_cast<double>(c) / n;
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

std::optional<SplitChoice> best_split(const Dataset& ds, std::span<const std::size_t> rows,
                                      std::span<const int> candidate_features,
                                      double min_impurity_decrease) {
  const std::size_t n = rows.size();
  if (n < 2 || candidate_features.empty()) return std::nullopt;

  std::array<std::int64_t, kClassCount> parent{};
  for (std::size_t r : rows) parent[static_cast<std::size_t>(ds.label(r))]++;
  const double parent_gini = gini(parent);
  const double n_d = static_cast<double>(n);

  std::optional<SplitChoice> best;
  std::vector<std::size_t> order(rows.begin(), rows.end());

  for (int f : candidate_features) {
    const std::size_t fc = static_cast<std::size_t>(f);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return ds.at(a, fc) < ds.at(b, fc);
    });

    std::array<std::int64_t, kClassCount> left{};
    std::array<std::int64_t, kClassCount> right = parent;
    for (std::size_t pos = 1; pos < n; ++pos) {
      const std::size_t moved = order[pos - 1];
      const std::size_t lbl = static_cast<std::size_t>(ds.label(moved));
      left[lbl]++;
      right[lbl]--;
      const double prev = ds.at(order[pos - 1], fc);
      const double cur = ds.at(order[pos], fc);
      if (cur == prev) continue;
      const double threshold = (prev + cur) * 0.5;
      const double wl = static_cast<double>(pos) / n_d;
      const double wr = static_cast<double>(n - pos) / n_d;
      const double decrease = parent_gini - (wl * gini(left) + wr * gini(right));
      if (!best || decrease > best->impurity_decrease) {
        best = SplitChoice{f, threshold, decrease};
      }
    }
  }

  if (!best || best->impurity_decrease <= 0.0 ||
      best->impurity_decrease < min_impurity_decrease) {
    return std::nullopt;
  }
  return best;
}

std::unique_ptr<TreeNode> train_tree(const Dataset& ds, const TrainConfig& config,
                                     std::vector<std::size_t> rows, Rng& rng) {
  require(!rows.empty(), Err::empty_dataset, "cannot train a tree on zero rows");
  validate_config(config, static_cast<int>(ds.cols()));
  return train_node(ds, config, std::move(rows), rng, 0);
}

Model train_model(const Dataset& ds, ModelKind kind, const TrainConfig& config) {
  require(ds.rows() >= 1, Err::empty_dataset, "cannot train on an empty dataset");
  require(ds.cols() >= 1, Err::empty_dataset, "dataset has no features");
  validate_config(config, static_cast<int>(ds.cols()));

  Model model;
  model.kind = kind;
  model.config = config;
  model.feature_names = ds.feature_names();
  model.class_count = kClassCount;

  const std::size_t n = ds.rows();
  std::vector<std::size_t> all_rows(n);
  std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});

  if (kind == ModelKind::tree) {
    Rng rng(config.seed);
    model.trees.push_back(train_tree(ds, config, all_rows, rng));
    return model;
  }

  model.trees.resize(static_cast<std::size_t>(config.n_trees));
  parallel_for(static_cast<std::size_t>(config.n_trees), [&](std::size_t t) {
    // Per-tree stream: seed_t = splitmix chain over (config.seed, t). The
    // bootstrap draw and all node-level feature draws come from this stream.
    Rng rng(derive_seed(config.seed, t));
    std::vector<std::size_t> rows;
    if (config.bootstrap) {
      rows.resize(n);
      for (std::size_t i = 0; i < n; ++i) rows[i] = rng.uniform_below(n);
    } else {
      rows = all_rows;
    }
    model.trees[t] = train_tree(ds, config, std::move(rows), rng);
  });
  return model;
}

Prediction predict(const TreeNode& root, std::span<const double> features) {
  const TreeNode* node = &root;
  while (!node->is_leaf()) {
    node = features[static_cast<std::size_t>(node->feature)] <= node->threshold
               ? node->left.get()
               : node->right.get();
  }
  std::int64_t total = 0;
  for (std::int64_t c : node->counts) total += c;
  Prediction p;
  std::int64_t best = -1;
  for (std::size_t k = 0; k < kClassCount; ++k) {
    p.scores[k] = static_cast<double>(node->counts[k]) / static_cast<double>(total);
    if (node->counts[k] > best) {
      best = node->counts[k];
      p.class_id = static_cast<int>(k);
    }
  }
  return p;
}

Prediction predict(const Model& model, std::span<const double> features) {
  require(features.size() == model.feature_names.size(), Err::dimension_mismatch,
          "feature vector length does not match the model");
  if (model.kind == ModelKind::tree) return predict(*model.trees.front(), features);

  std::array<std::int64_t, kClassCount> votes{};
  for (const auto& tree : model.trees)
    votes[static_cast<std::size_t>(predict(*tree, features).class_id)]++;
  Prediction p;
  std::int64_t best = -1;
  for (std::size_t k = 0; k < kClassCount; ++k) {
    p.scores[k] = static_cast<double>(votes[k]) / static_cast<double>(model.trees.size());
    if (votes[k] > best) {
      best = votes[k];
      p.class_id = static_cast<int>(k);
    }
  }
  return p;
}

double evaluate_accuracy(const Model& model, const Dataset& ds) {
  require(ds.rows() >= 1, Err::empty_dataset, "cannot evaluate on an empty dataset");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    if (predict(model, ds.row(i)).class_id == ds.label(i)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ds.rows());
}

std::string model_to_json(const Model& model) {
  json j;
  j["format"] = kModelFormat;
  j["kind"] = model.kind == ModelKind::tree ? "tree" : "forest";
  j["config"] = json{{"max_depth", model.config.max_depth},
                     {"min_samples_split", model.config.min_samples_split},
                     {"min_impurity_decrease", model.config.min_impurity_decrease},
                     {"n_trees", model.config.n_trees},
                     {"features_per_split", subset_to_json(model.config.features_per_split)},
                     {"bootstrap", model.config.bootstrap},
                     {"seed", model.config.seed}};
  j["feature_names"] = model.feature_names;
  j["class_count"] = model.class_count;
  json trees = json::array();
  for (const auto& t : model.trees) trees.push_back(node_to_json(*t));
  j["trees"] = std::move(trees);
  return j.dump();
}

Model model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(Err::schema_violation, std::string("model JSON does not parse: ") + e.what());
  }
  require(j.is_object(), Err::schema_violation, "model JSON must be an object");
  require(j.contains("format") && j.at("format").is_string(), Err::schema_violation,
          "missing format string");
  const std::string format = j.at("format").get<std::string>();
  require(format == kModelFormat, Err::unknown_version,
          "unsupported model format '" + format + "'");

  Model model;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "tree")
    model.kind = ModelKind::tree;
  else if (kind == "forest")
    model.kind = ModelKind::forest;
  else
    fail(Err::schema_violation, "kind must be 'tree' or 'forest'");

  require(j.contains("class_count") && j.at("class_count").is_number_integer(),
          Err::schema_violation, "missing class_count");
  model.class_count = j.at("class_count").get<int>();
  require(model.class_count == kClassCount, Err::schema_violation,
          "class_count must be 8");

  require(j.contains("feature_names") && j.at("feature_names").is_array(),
          Err::schema_violation, "missing feature_names");
  for (const auto& name : j.at("feature_names")) {
    require(name.is_string(), Err::schema_violation, "feature names must be strings");
    model.feature_names.push_back(name.get<std::string>());
  }
  require(!model.feature_names.empty(), Err::schema_violation, "feature_names is empty");

  const auto& cfg = j.at("config");
  require(cfg.is_object(), Err::schema_violation, "config must be an object");
  model.config.max_depth = cfg.at("max_depth").get<int>();
  model.config.min_samples_split = cfg.at("min_samples_split").get<int>();
  model.config.min_impurity_decrease = cfg.at("min_impurity_decrease").get<double>();
  model.config.n_trees = cfg.at("n_trees").get<int>();
  model.config.features_per_split = subset_from_json(cfg.at("features_per_split"));
  model.config.bootstrap = cfg.at("bootstrap").get<bool>();
  model.config.seed = cfg.at("seed").get<std::uint64_t>();

  require(j.contains("trees") && j.at("trees").is_array(), Err::schema_violation,
          "missing trees array");
  const int n_features = static_cast<int>(model.feature_names.size());
  for (const auto& t : j.at("trees")) model.trees.push_back(node_from_json(t, n_features));
  if (model.kind == ModelKind::tree) {
    require(model.trees.size() == 1, Err::schema_violation,
            "a tree model must carry exactly one tree");
  } else {
    require(static_cast<int>(model.trees.size()) == model.config.n_trees,
            Err::schema_violation, "forest tree count must equal config.n_trees");
  }
  return model;
}

void save_model_file(const std::string& path, const Model& model) {
  std::ofstream out(path);
  if (!out) fail(Err::io_failure, "cannot open '" + path + "' for writing");
  out << model_to_json(model) << '\n';
  out.flush();
  if (!out) fail(Err::io_failure, "failed writing '" + path + "'");
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::io_failure, "cannot open '" + path + "' for reading");
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace breathsim::ml
