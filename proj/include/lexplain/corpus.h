#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lexplain {

enum class SubstantiveOrder {
  kPenal,
  kCivil,
  kSocial,
  kAdministrative,
  kCivilMercantile,
  kMercantile,
  kTributary,
};

std::string_view to_string(SubstantiveOrder order);
// Case-insensitive; throws DataError on anything outside the seven orders.
SubstantiveOrder parse_substantive_order(std::string_view text);

// One annotated class: a substantive order plus exactly three law categories.
struct LabelAssignment {
  SubstantiveOrder order = SubstantiveOrder::kPenal;
  std::array<std::string, 3> categories;

  // Case-folded, whitespace-normalised "order|cat1|cat2|cat3". Two
  // assignments are the same class iff their keys are equal.
  std::string key() const;
  // "order; cat1; cat2; cat3" for display.
  std::string display() const;

  friend bool operator==(const LabelAssignment& a, const LabelAssignment& b) {
    return a.key() == b.key();
  }
  friend bool operator<(const LabelAssignment& a, const LabelAssignment& b) {
    return a.key() < b.key();
  }
};

using LabelSet = std::vector<LabelAssignment>;

struct Judgement {
  std::string id;
  std::string raw_text;
  std::optional<std::string> gin;
  LabelSet annotations;
};

struct Corpus {
  std::vector<Judgement> documents;
  std::size_t n() const { return documents.size(); }
};

// Throws DataError naming the violated invariant.
void validate(const Judgement& doc);
void validate(const Corpus& corpus);

bool is_valid_gin(std::string_view gin);

// Line-delimited JSON records: {"id", "text", "gin"?, "labels": [{"order",
// "categories": [3]}]}. Blank lines are skipped.
Corpus load_corpus(const std::string& path);
Corpus read_corpus(std::istream& in);
void write_corpus(const Corpus& corpus, std::ostream& out);

struct CorpusStats {
  std::map<std::size_t, std::size_t> label_set_size_histogram;
  double label_cardinality = 0.0;
  std::size_t class_count = 0;
};

CorpusStats corpus_stats(const Corpus& corpus);

}  // namespace lexplain
