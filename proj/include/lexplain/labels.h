#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lexplain/corpus.h"

namespace lexplain::labels {

// Sorted, duplicate-free class indices into a ClassCatalog.
using IndexSet = std::vector<int>;

// Distinct label assignments of a corpus, sorted by LabelAssignment::key().
class ClassCatalog {
 public:
  ClassCatalog() = default;
  explicit ClassCatalog(std::vector<LabelAssignment> classes);

  std::size_t m() const { return classes_.size(); }
  const std::vector<LabelAssignment>& classes() const { return classes_; }
  const LabelAssignment& at(std::size_t j) const { return classes_.at(j); }

  std::optional<int> find(const LabelAssignment& label) const;
  // Throws DataError naming the label when it is not in the catalog.
  int index_of(const LabelAssignment& label) const;
  IndexSet indices(const LabelSet& set) const;
  LabelSet labels(const IndexSet& set) const;

 private:
  std::vector<LabelAssignment> classes_;
  std::map<std::string, int> index_;
};

ClassCatalog build_class_catalog(const Corpus& corpus);
ClassCatalog build_class_catalog(const std::vector<LabelSet>& label_sets);

// beta[i][j] = 1 iff class j is in label_sets[i].
using IndicatorMatrix = std::vector<std::vector<unsigned char>>;

IndicatorMatrix bts_encode(const std::vector<LabelSet>& label_sets,
                           const ClassCatalog& catalog);

inline constexpr double kDefaultBtsThreshold = 0.5;
inline constexpr std::size_t kMaxLabelSetSize = 3;

// Classes whose score exceeds the threshold. No class above it: the argmax
// (lowest index on ties). More than three: the three highest scores.
IndexSet bts_decode_indices(std::span<const double> scores,
                            double threshold = kDefaultBtsThreshold);
LabelSet bts_decode(std::span<const double> scores, const ClassCatalog& catalog,
                    double threshold = kDefaultBtsThreshold);

// Members sorted by key, duplicates dropped.
LabelSet canonicalize(LabelSet set);

// Distinct canonical label sets, sorted by their key sequences. Alpha values
// are 1-based positions in `combos`.
class MtsCatalog {
 public:
  MtsCatalog() = default;
  explicit MtsCatalog(std::vector<LabelSet> combos);

  std::size_t p() const { return combos_.size(); }
  const std::vector<LabelSet>& combos() const { return combos_; }
  std::optional<int> find(const LabelSet& set) const;

 private:
  std::vector<LabelSet> combos_;
  std::map<std::vector<std::string>, int> index_;
};

struct MtsEncoding {
  MtsCatalog catalog;
  std::vector<int> alpha;
};

MtsEncoding mts_encode(const std::vector<LabelSet>& label_sets);
// Alpha of each set under an existing catalog; unseen combination -> DataError.
std::vector<int> mts_alpha(const std::vector<LabelSet>& label_sets,
                           const MtsCatalog& catalog);
LabelSet mts_decode(int alpha, const MtsCatalog& catalog);

}  // namespace lexplain::labels
