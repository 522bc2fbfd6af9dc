#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "lexplain/labels.h"
#include "lexplain/matrix.h"

namespace lexplain::trees {

enum class Criterion { kGini, kEntropy };
enum class Splitter { kBest, kRandom };
enum class ClassWeight { kNone, kBalanced };
enum class Variant { kRF, kEETC, kETC, kDT };
enum class Strategy { kBTS, kMTS };

std::string_view to_string(Criterion c);
std::string_view to_string(Splitter s);
std::string_view to_string(ClassWeight w);
std::string_view to_string(Variant v);
std::string_view to_string(Strategy s);
Criterion parse_criterion(std::string_view s);
Splitter parse_splitter(std::string_view s);
ClassWeight parse_class_weight(std::string_view s);
Variant parse_variant(std::string_view s);
Strategy parse_strategy(std::string_view s);

struct Hyperparams {
  ClassWeight class_weight = ClassWeight::kNone;
  std::optional<int> max_depth;  // unset: unbounded
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  Criterion criterion = Criterion::kGini;
  Splitter splitter = Splitter::kBest;
  int n_estimators = 100;
  std::uint64_t seed = 0;
  // Overrides of the variant defaults.
  std::optional<bool> bootstrap;
  std::optional<int> max_features;
  // 0: one worker per hardware thread. Results do not depend on it.
  int n_threads = 0;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

// Throws ConfigError on out-of-range values.
void validate(const Hyperparams& hp);

double gini(std::span<const double> class_counts);
double entropy(std::span<const double> class_counts);

// Flattened binary tree. Node 0 is the root; children follow in preorder.
// Rows go left when value <= threshold.
struct Tree {
  int n_classes = 0;
  int n_features = 0;
  std::vector<int> feature;  // -1 at leaves
  std::vector<double> threshold;
  std::vector<int> left;
  std::vector<int> right;
  std::vector<int> depth;
  std::vector<double> impurity;
  std::vector<int> n_samples;       // rows reaching the node, with multiplicity
  std::vector<double> weighted_n;   // class-weighted sample mass
  std::vector<double> counts;       // n_nodes x n_classes, unweighted
  std::vector<double> value;        // n_nodes x n_classes, class-weighted

  std::size_t node_count() const { return feature.size(); }
  bool is_leaf(int node) const { return feature[node] < 0; }
  std::span<const double> class_counts(int node) const {
    return {counts.data() + static_cast<std::size_t>(node) * n_classes,
            static_cast<std::size_t>(n_classes)};
  }
  // Normalised class-weighted distribution at a node.
  std::vector<double> proba(int node) const;
  // Leaf reached by a row; throws on malformed structure.
  int apply(std::span<const double> row) const;
  // Unnormalised impurity decrease per feature.
  std::vector<double> raw_importances() const;

  friend bool operator==(const Tree&, const Tree&) = default;
};

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;
  double improvement = 0.0;
};

// Split search on all rows of X with unit multiplicity; exposed for tests.
// `features` lists the candidate columns in draw order.
std::optional<SplitCandidate> find_split(DataView X, std::span<const int> y,
                                         int n_classes,
                                         std::span<const int> features,
                                         const Hyperparams& hp,
                                         std::uint64_t seed);

// Single tree over all rows and all features (no bootstrap).
Tree fit_tree(DataView X, std::span<const int> y, int n_classes,
              const Hyperparams& hp);

struct Forest {
  std::vector<Tree> trees;
  int n_classes = 0;

  std::vector<double> predict_proba(std::span<const double> row) const;
  // Per-tree normalised importances, averaged, renormalised to sum 1.
  std::vector<double> feature_importances() const;

  friend bool operator==(const Forest&, const Forest&) = default;
};

struct VariantSettings {
  int n_trees = 1;
  bool bootstrap = false;
  int max_features = 0;  // resolved column count
  Splitter splitter = Splitter::kBest;
};

VariantSettings resolve_variant(Variant variant, const Hyperparams& hp,
                                std::size_t n_features);

Forest fit_forest(DataView X, std::span<const int> y, int n_classes,
                  const Hyperparams& hp, Variant variant);

struct EnsembleModel {
  Variant variant = Variant::kRF;
  Strategy strategy = Strategy::kMTS;
  Hyperparams hyperparams;
  std::vector<std::string> feature_names;
  labels::ClassCatalog classes;
  labels::MtsCatalog combos;
  double bts_threshold = labels::kDefaultBtsThreshold;
  // MTS: one forest over combos (class c <-> alpha c+1). BTS: one binary
  // forest per catalog class.
  std::vector<Forest> forests;

  std::size_t tree_count() const;
  // MTS: per-combo probabilities. BTS: per-class positive probabilities.
  std::vector<double> predict_proba(std::span<const double> row) const;
  labels::IndexSet predict_indices(std::span<const double> row) const;
  LabelSet predict(std::span<const double> row) const;
  std::vector<double> feature_importances() const;
};

// `targets` are class-catalog index sets per row of X.
EnsembleModel fit_ensemble(DataView X, const std::vector<std::string>& names,
                           const std::vector<labels::IndexSet>& targets,
                           const labels::ClassCatalog& classes,
                           const labels::MtsCatalog& combos,
                           const Hyperparams& hp, Variant variant,
                           Strategy strategy);

nlohmann::json to_json(const Hyperparams& hp);
Hyperparams hyperparams_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EnsembleModel& model);
EnsembleModel model_from_json(const nlohmann::json& j);
std::string serialize(const EnsembleModel& model);
EnsembleModel deserialize(std::string_view text);

}  // namespace lexplain::trees
