#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexplain/corpus.h"
#include "lexplain/entities.h"
#include "lexplain/trees.h"

namespace lexplain::explain {

enum class Direction { kLess, kMore };

struct PathStep {
  std::string feature;
  int column = -1;
  double value = 0.0;
  Direction direction = Direction::kLess;  // kLess iff value <= threshold
  double threshold = 0.0;
  bool textual = true;  // n-gram column rather than an entity code

  friend bool operator==(const PathStep&, const PathStep&) = default;
};

// Columns whose name carries this prefix are entity codes.
inline constexpr std::string_view kCategoricalPrefix = "cat_";
bool is_textual(std::string_view column_name);

// Root-to-leaf walk of one tree. Throws DataError on a cycle or a missing
// child.
std::vector<PathStep> extract_path(const trees::Tree& tree, std::span<const double> row,
                                   const std::vector<std::string>& names);
std::vector<std::vector<PathStep>> extract_paths(const trees::Forest& forest,
                                                 std::span<const double> row,
                                                 const std::vector<std::string>& names);

struct TermCount {
  std::string term;
  int count = 0;

  friend bool operator==(const TermCount&, const TermCount&) = default;
};

// Occurrences of n-gram columns over all steps of all paths, most frequent
// first, ties alphabetical.
std::vector<TermCount> aggregate_terms(const std::vector<std::vector<PathStep>>& paths);

struct PerturbationParams {
  int n_samples = 500;
  std::uint64_t seed = 0;
  double zero_probability = 0.5;
  double kernel_width_factor = 0.75;  // sigma = factor * sqrt(active terms)
};

using ScoreFn = std::function<double(std::span<const double>)>;

// Local linear surrogate around `row`. Each nonzero column in `columns` is
// zeroed independently; the score of every perturbed copy is regressed on the
// presence indicators with proximity weights exp(-h^2 / sigma^2), h the number
// of zeroed columns. Returns the signed coefficient per column name. The first
// sample is the unperturbed row.
std::map<std::string, double> perturbation_relevance(const ScoreFn& score,
                                                     std::span<const double> row,
                                                     std::span<const std::size_t> columns,
                                                     const std::vector<std::string>& names,
                                                     const PerturbationParams& params);

// Relevance of every active n-gram for one output of predict_proba.
std::map<std::string, double> perturbation_relevance(const trees::EnsembleModel& model,
                                                     std::span<const double> row,
                                                     std::size_t output,
                                                     const PerturbationParams& params);

struct TermRelevance {
  std::string term;
  double relevance = 0.0;         // absolute value, as displayed
  double signed_relevance = 0.0;  // surrogate coefficient

  friend bool operator==(const TermRelevance&, const TermRelevance&) = default;
};

inline constexpr std::size_t kMaxTopTerms = 7;

// First seven frequency-ordered terms that carry a relevance, sorted by
// absolute relevance, largest first (stable).
std::vector<TermRelevance> select_top_terms(const std::vector<TermCount>& frequency_ordered,
                                            const std::map<std::string, double>& relevances);

// Output of predict_proba the explanation is about: the predicted combination
// (MTS) or the most probable class (BTS).
std::size_t explained_output(const trees::EnsembleModel& model, std::span<const double> row);
int confidence(const trees::EnsembleModel& model, std::span<const double> row);

struct Explanation {
  std::string id;
  std::array<std::string, 7> fields;  // display values, entity field order
  LabelSet predicted;
  int confidence = 0;
  std::vector<TermRelevance> top_terms;
  std::vector<std::vector<PathStep>> paths;
};

Explanation explain(const trees::EnsembleModel& model, std::span<const double> row,
                    const std::string& id, const entities::EntityRecord& record,
                    const PerturbationParams& params);

extern const std::string_view kDefaultTemplate;

// Placeholders: {id}, the seven entity fields by name, {order}, {cat1}..{cat3},
// {pct}, {term} and {relevance} (optionally {relevance:.Nf}, default three
// decimals). Lines with label placeholders repeat per predicted assignment,
// blocks separated by a blank line; lines with term placeholders repeat per
// term. Unknown or unclosed placeholders raise ConfigError. Output ends with
// exactly one newline.
std::string render_explanation(const Explanation& explanation,
                               std::string_view tmpl = kDefaultTemplate);

// Leaf captions per forest output.
std::vector<std::string> class_labels(const trees::EnsembleModel& model, std::size_t forest);

// DOT digraph of the nodes up to max_depth; deeper subtrees collapse into a
// "…" node. Split nodes read "feature ≤ threshold", leaves the majority caption.
std::string export_tree_graph(const trees::Tree& tree, int max_depth,
                              const std::vector<std::string>& names,
                              const std::vector<std::string>& class_labels);

}  // namespace lexplain::explain
