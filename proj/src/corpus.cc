#include "lexplain/corpus.h"

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "lexplain/error.h"
#include "lexplain/utf8.h"

namespace lexplain {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 7> kOrderNames = {
    "penal",      "civil",      "social",   "administrative",
    "civil/mercantile", "mercantile", "tributary"};

std::string normalise_category(std::string_view text) {
  const std::string folded = utf8::fold(text);
  std::string out;
  bool pending_space = false;
  for (char c : folded) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

LabelAssignment parse_label(const json& j) {
  if (!j.is_object()) throw DataError("label must be an object");
  if (!j.contains("order") || !j["order"].is_string()) {
    throw DataError("label is missing string field 'order'");
  }
  if (!j.contains("categories") || !j["categories"].is_array()) {
    throw DataError("label is missing array field 'categories'");
  }
  const auto& cats = j["categories"];
  if (cats.size() != 3) {
    throw DataError("law_categories must have exactly 3 entries, got " +
                    std::to_string(cats.size()));
  }
  LabelAssignment label;
  label.order = parse_substantive_order(j["order"].get<std::string>());
  for (std::size_t k = 0; k < 3; ++k) {
    if (!cats[k].is_string()) throw DataError("law category must be a string");
    label.categories[k] = cats[k].get<std::string>();
  }
  return label;
}

Judgement parse_record(const json& j) {
  if (!j.is_object()) throw DataError("record must be an object");
  if (!j.contains("id") || !j["id"].is_string()) {
    throw DataError("record is missing string field 'id'");
  }
  if (!j.contains("text") || !j["text"].is_string()) {
    throw DataError("record is missing string field 'text'");
  }
  Judgement doc;
  doc.id = j["id"].get<std::string>();
  doc.raw_text = j["text"].get<std::string>();
  if (j.contains("gin") && !j["gin"].is_null()) {
    if (!j["gin"].is_string()) throw DataError("'gin' must be a string");
    doc.gin = j["gin"].get<std::string>();
  }
  if (!j.contains("labels") || !j["labels"].is_array()) {
    throw DataError("record is missing array field 'labels'");
  }
  for (const auto& l : j["labels"]) doc.annotations.push_back(parse_label(l));
  return doc;
}

json to_json(const Judgement& doc) {
  json j;
  j["id"] = doc.id;
  j["text"] = doc.raw_text;
  if (doc.gin) j["gin"] = *doc.gin;
  j["labels"] = json::array();
  for (const auto& label : doc.annotations) {
    j["labels"].push_back({{"order", std::string(to_string(label.order))},
                           {"categories", label.categories}});
  }
  return j;
}

}  // namespace

std::string_view to_string(SubstantiveOrder order) {
  return kOrderNames[static_cast<std::size_t>(order)];
}

SubstantiveOrder parse_substantive_order(std::string_view text) {
  const std::string key = normalise_category(text);
  for (std::size_t i = 0; i < kOrderNames.size(); ++i) {
    if (key == kOrderNames[i]) return static_cast<SubstantiveOrder>(i);
  }
  throw DataError("unknown substantive order '" + std::string(text) + "'");
}

std::string LabelAssignment::key() const {
  std::string out(to_string(order));
  for (const auto& c : categories) {
    out.push_back('|');
    out += normalise_category(c);
  }
  return out;
}

std::string LabelAssignment::display() const {
  std::string out(to_string(order));
  for (const auto& c : categories) {
    out += "; ";
    out += c;
  }
  return out;
}

bool is_valid_gin(std::string_view gin) {
  if (gin.size() != 19) return false;
  for (char c : gin) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

void validate(const Judgement& doc) {
  if (doc.id.empty()) throw DataError("document id must be nonempty");
  const auto size = doc.annotations.size();
  if (size < 1 || size > 3) {
    throw DataError("label set size out of [1,3] (got " +
                    std::to_string(size) + ")");
  }
  if (doc.gin && !is_valid_gin(*doc.gin)) {
    throw DataError("gin must be exactly 19 decimal digits");
  }
  std::set<std::string> seen;
  for (const auto& label : doc.annotations) {
    for (const auto& c : label.categories) {
      if (is_blank(c)) throw DataError("law category must be nonempty");
    }
    if (!seen.insert(label.key()).second) {
      throw DataError("duplicate annotation '" + label.key() + "'");
    }
  }
}

void validate(const Corpus& corpus) {
  if (corpus.documents.empty()) throw DataError("corpus is empty");
  std::unordered_set<std::string> ids;
  for (const auto& doc : corpus.documents) {
    validate(doc);
    if (!ids.insert(doc.id).second) {
      throw DataError("duplicate document id '" + doc.id + "'");
    }
  }
}

Corpus read_corpus(std::istream& in) {
  Corpus corpus;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    try {
      Judgement doc = parse_record(json::parse(line));
      validate(doc);
      if (!ids.insert(doc.id).second) {
        throw DataError("duplicate document id '" + doc.id + "'");
      }
      corpus.documents.push_back(std::move(doc));
    } catch (const json::exception& e) {
      throw DataError("line " + std::to_string(line_no) +
                      ": malformed record: " + e.what());
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (corpus.documents.empty()) throw DataError("corpus is empty");
  return corpus;
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file '" + path + "'");
  return read_corpus(in);
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& doc : corpus.documents) out << to_json(doc).dump() << '\n';
}

CorpusStats corpus_stats(const Corpus& corpus) {
  validate(corpus);
  CorpusStats stats;
  std::set<std::string> classes;
  std::size_t total = 0;
  for (const auto& doc : corpus.documents) {
    ++stats.label_set_size_histogram[doc.annotations.size()];
    total += doc.annotations.size();
    for (const auto& label : doc.annotations) classes.insert(label.key());
  }
  stats.label_cardinality =
      static_cast<double>(total) / static_cast<double>(corpus.n());
  stats.class_count = classes.size();
  return stats;
}

}  // namespace lexplain
