#include "lexplain/labels.h"

#include <algorithm>

#include "lexplain/error.h"

namespace lexplain::labels {

namespace {

std::vector<std::string> keys_of(const LabelSet& set) {
  std::vector<std::string> keys;
  keys.reserve(set.size());
  for (const auto& label : set) keys.push_back(label.key());
  return keys;
}

}  // namespace

ClassCatalog::ClassCatalog(std::vector<LabelAssignment> classes) {
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  classes_ = std::move(classes);
  for (std::size_t j = 0; j < classes_.size(); ++j) {
    index_.emplace(classes_[j].key(), static_cast<int>(j));
  }
}

std::optional<int> ClassCatalog::find(const LabelAssignment& label) const {
  const auto it = index_.find(label.key());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int ClassCatalog::index_of(const LabelAssignment& label) const {
  if (auto j = find(label)) return *j;
  throw DataError("label not in class catalog: " + label.display());
}

IndexSet ClassCatalog::indices(const LabelSet& set) const {
  IndexSet out;
  out.reserve(set.size());
  for (const auto& label : set) out.push_back(index_of(label));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LabelSet ClassCatalog::labels(const IndexSet& set) const {
  LabelSet out;
  out.reserve(set.size());
  for (int j : set) {
    if (j < 0 || static_cast<std::size_t>(j) >= classes_.size()) {
      throw DataError("class index " + std::to_string(j) + " out of range");
    }
    out.push_back(classes_[j]);
  }
  return out;
}

ClassCatalog build_class_catalog(const std::vector<LabelSet>& label_sets) {
  std::vector<LabelAssignment> all;
  for (const auto& set : label_sets) all.insert(all.end(), set.begin(), set.end());
  return ClassCatalog(std::move(all));
}

ClassCatalog build_class_catalog(const Corpus& corpus) {
  std::vector<LabelSet> sets;
  sets.reserve(corpus.n());
  for (const auto& doc : corpus.documents) sets.push_back(doc.annotations);
  return build_class_catalog(sets);
}

IndicatorMatrix bts_encode(const std::vector<LabelSet>& label_sets,
                           const ClassCatalog& catalog) {
  IndicatorMatrix beta(label_sets.size(),
                       std::vector<unsigned char>(catalog.m(), 0));
  for (std::size_t i = 0; i < label_sets.size(); ++i) {
    for (const auto& label : label_sets[i]) beta[i][catalog.index_of(label)] = 1;
  }
  return beta;
}

IndexSet bts_decode_indices(std::span<const double> scores, double threshold) {
  IndexSet chosen;
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (scores[j] > threshold) chosen.push_back(static_cast<int>(j));
  }
  if (chosen.empty() && !scores.empty()) {
    const auto best = std::max_element(scores.begin(), scores.end());
    chosen.push_back(static_cast<int>(best - scores.begin()));
  }
  if (chosen.size() > kMaxLabelSetSize) {
    std::stable_sort(chosen.begin(), chosen.end(),
                     [&](int a, int b) { return scores[a] > scores[b]; });
    chosen.resize(kMaxLabelSetSize);
    std::sort(chosen.begin(), chosen.end());
  }
  return chosen;
}

LabelSet bts_decode(std::span<const double> scores, const ClassCatalog& catalog,
                    double threshold) {
  if (scores.size() != catalog.m()) {
    throw DataError("score vector has " + std::to_string(scores.size()) +
                    " entries, catalog has " + std::to_string(catalog.m()));
  }
  return catalog.labels(bts_decode_indices(scores, threshold));
}

LabelSet canonicalize(LabelSet set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  return set;
}

MtsCatalog::MtsCatalog(std::vector<LabelSet> combos) {
  std::map<std::vector<std::string>, LabelSet> unique;
  for (auto& combo : combos) {
    LabelSet canon = canonicalize(std::move(combo));
    unique.emplace(keys_of(canon), std::move(canon));
  }
  for (auto& [keys, combo] : unique) {
    combos_.push_back(std::move(combo));
    index_.emplace(keys, static_cast<int>(combos_.size()));
  }
}

std::optional<int> MtsCatalog::find(const LabelSet& set) const {
  const auto it = index_.find(keys_of(canonicalize(set)));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

MtsEncoding mts_encode(const std::vector<LabelSet>& label_sets) {
  MtsEncoding enc;
  enc.catalog = MtsCatalog(label_sets);
  enc.alpha = mts_alpha(label_sets, enc.catalog);
  return enc;
}

std::vector<int> mts_alpha(const std::vector<LabelSet>& label_sets,
                           const MtsCatalog& catalog) {
  std::vector<int> alpha;
  alpha.reserve(label_sets.size());
  for (const auto& set : label_sets) {
    const auto a = catalog.find(set);
    if (!a) throw DataError("label combination not in MTS catalog");
    alpha.push_back(*a);
  }
  return alpha;
}

LabelSet mts_decode(int alpha, const MtsCatalog& catalog) {
  if (alpha < 1 || static_cast<std::size_t>(alpha) > catalog.p()) {
    throw DataError("MTS class " + std::to_string(alpha) + " outside [1, " +
                    std::to_string(catalog.p()) + "]");
  }
  return catalog.combos()[alpha - 1];
}

}  // namespace lexplain::labels
