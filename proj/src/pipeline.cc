#include "lexplain/pipeline.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "lexplain/anonymiser.h"
#include "lexplain/error.h"
#include "lexplain/text.h"

namespace lexplain::pipeline {

using nlohmann::json;

namespace {

// Reads one object level, rejecting unknown keys and reporting the dotted
// path of any field with the wrong type.
class Reader {
 public:
  Reader(const json& j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {
    if (!j_.is_object()) throw ConfigError(where("") + "expected an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where(key) + "has the wrong type");
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  std::string where(const std::string& key) const {
    const std::string path = prefix_.empty() ? key : (key.empty() ? prefix_ : prefix_ + "." + key);
    return "config field '" + (path.empty() ? std::string("<root>") : path) + "': ";
  }

  std::string path(const char* key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) throw ConfigError(where(key) + "unknown field");
    }
  }

 private:
  const json& j_;
  std::string prefix_;
  std::set<std::string> seen_;
};

template <typename Parse>
auto parse_enum(Reader& r, const char* key, Parse parse, decltype(parse("")) fallback) {
  std::string text;
  r.get(key, text);
  if (text.empty()) return fallback;
  try {
    return parse(text);
  } catch (const ConfigError& e) {
    throw ConfigError(r.where(key) + e.what());
  }
}

json vectorizer_json(const features::VectorizerParams& p) {
  return {{"max_df", p.max_df},
          {"min_df", p.min_df},
          {"ngram_range", {p.ngram_lo, p.ngram_hi}}};
}

features::VectorizerParams vectorizer_from(const json& j, const std::string& prefix) {
  features::VectorizerParams p;
  Reader r(j, prefix);
  r.get("max_df", p.max_df);
  r.get("min_df", p.min_df);
  std::vector<int> range{p.ngram_lo, p.ngram_hi};
  r.get("ngram_range", range);
  if (range.size() != 2) throw ConfigError(r.where("ngram_range") + "expected two integers");
  p.ngram_lo = range[0];
  p.ngram_hi = range[1];
  r.finish();
  return p;
}

std::string check_field(const std::string& field, bool ok, const std::string& msg) {
  if (!ok) throw ConfigError("config field '" + field + "': " + msg);
  return field;
}

}  // namespace

PipelineConfig config_from_json(const json& j) {
  PipelineConfig c;
  Reader r(j, "");
  r.get("corpus", c.corpus);
  r.get("lexica", c.lexica);
  r.get("output", c.output);
  r.get("seed", c.seed);
  r.get("folds", c.folds);
  r.get("threads", c.threads);
  c.strategy = parse_enum(r, "strategy", trees::parse_strategy, c.strategy);
  c.model = parse_enum(r, "model", trees::parse_variant, c.model);
  if (const json* v = r.child("vectorizer")) c.vectorizer = vectorizer_from(*v, "vectorizer");
  if (const json* s = r.child("selection")) {
    Reader rs(*s, "selection");
    rs.get("correlation_threshold", c.correlation_threshold);
    rs.get("importance", c.importance_selection);
    rs.get("importance_estimators", c.importance_estimators);
    rs.finish();
  }
  if (const json* h = r.child("hyperparams")) {
    if (!h->is_object()) throw ConfigError("config field 'hyperparams': expected an object");
    c.hyperparams = *h;
  }
  r.get("bts_threshold", c.bts_threshold);
  r.get("jaro_threshold", c.jaro_threshold);
  if (const json* e = r.child("explain")) {
    Reader re(*e, "explain");
    re.get("samples", c.explain_samples);
    re.get("graph_depth", c.graph_depth);
    re.finish();
  }
  if (const json* rep = r.child("report")) {
    Reader rr(*rep, "report");
    rr.get("include_timing", c.include_timing);
    rr.get("macro_skip_absent", c.macro_skip_absent);
    rr.get("scoring", c.scoring);
    rr.finish();
  }
  if (const json* g = r.child("grid")) {
    Reader rg(*g, "grid");
    rg.get("fraction", c.grid_fraction);
    if (const json* axes = rg.child("axes")) {
      if (!axes->is_array()) throw ConfigError("config field 'grid.axes': expected an array");
      for (std::size_t i = 0; i < axes->size(); ++i) {
        Reader ra((*axes)[i], "grid.axes[" + std::to_string(i) + "]");
        GridAxis axis;
        ra.get("key", axis.key);
        ra.get("values", axis.values);
        ra.finish();
        c.grid.push_back(std::move(axis));
      }
    }
    rg.finish();
  }
  r.finish();
  validate(c);
  return c;
}

json to_json(const PipelineConfig& c) {
  json axes = json::array();
  for (const auto& a : c.grid) axes.push_back({{"key", a.key}, {"values", a.values}});
  return {{"corpus", c.corpus},
          {"lexica", c.lexica},
          {"output", c.output},
          {"seed", c.seed},
          {"folds", c.folds},
          {"threads", c.threads},
          {"strategy", std::string(trees::to_string(c.strategy))},
          {"model", std::string(trees::to_string(c.model))},
          {"vectorizer", vectorizer_json(c.vectorizer)},
          {"selection",
           {{"correlation_threshold", c.correlation_threshold},
            {"importance", c.importance_selection},
            {"importance_estimators", c.importance_estimators}}},
          {"hyperparams", c.hyperparams},
          {"bts_threshold", c.bts_threshold},
          {"jaro_threshold", c.jaro_threshold},
          {"explain", {{"samples", c.explain_samples}, {"graph_depth", c.graph_depth}}},
          {"report",
           {{"include_timing", c.include_timing},
            {"macro_skip_absent", c.macro_skip_absent},
            {"scoring", c.scoring}}},
          {"grid", {{"fraction", c.grid_fraction}, {"axes", std::move(axes)}}}};
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

void validate(const PipelineConfig& c, bool check_paths) {
  check_field("folds", c.folds >= 2, "must be at least 2");
  check_field("threads", c.threads >= 0, "must be non-negative");
  const auto& v = c.vectorizer;
  check_field("vectorizer.min_df", v.min_df >= 0.0 && v.min_df < v.max_df,
              "must satisfy 0 <= min_df < max_df");
  check_field("vectorizer.max_df", v.max_df > 0.0 && v.max_df <= 1.0, "must lie in (0, 1]");
  check_field("vectorizer.ngram_range", v.ngram_lo >= 1 && v.ngram_lo <= v.ngram_hi,
              "must satisfy 1 <= lo <= hi");
  check_field("selection.correlation_threshold",
              c.correlation_threshold >= 0.0 && c.correlation_threshold <= 1.0,
              "must lie in [0, 1]");
  check_field("selection.importance_estimators", c.importance_estimators >= 1,
              "must be at least 1");
  check_field("bts_threshold", c.bts_threshold >= 0.0 && c.bts_threshold < 1.0,
              "must lie in [0, 1)");
  check_field("jaro_threshold", c.jaro_threshold >= 0.0 && c.jaro_threshold <= 1.0,
              "must lie in [0, 1]");
  check_field("explain.samples", c.explain_samples >= 10, "must be at least 10");
  check_field("explain.graph_depth", c.graph_depth >= 0, "must be non-negative");
  static const std::set<std::string> kScores = {
      "exact_match", "accuracy",       "precision",     "recall",       "micro_precision",
      "micro_recall", "micro_f",       "macro_precision", "macro_recall", "macro_f"};
  check_field("report.scoring", kScores.contains(c.scoring), "unknown scoring '" + c.scoring + "'");
  check_field("grid.fraction", c.grid_fraction > 0.0 && c.grid_fraction <= 1.0,
              "must lie in (0, 1]");
  for (const auto& axis : c.grid) {
    check_field("grid.axes", !axis.key.empty() && !axis.values.empty(),
                "each axis needs a key and at least one value");
  }
  try {
    (void)effective_hyperparams(c);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config field 'hyperparams': ") + e.what());
  }
  if (check_paths) {
    check_field("corpus", !c.corpus.empty() && std::filesystem::is_regular_file(c.corpus),
                "file '" + c.corpus + "' does not exist");
    check_field("lexica", c.lexica.empty() || std::filesystem::is_directory(c.lexica),
                "directory '" + c.lexica + "' does not exist");
  }
}

PipelineConfig with_field(const PipelineConfig& config, const std::string& key,
                          const json& value) {
  json j = to_json(config);
  std::string pointer;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, '.')) pointer += "/" + part;
  try {
    j[json::json_pointer(pointer)] = value;
  } catch (const json::exception& e) {
    throw ConfigError("config field '" + key + "': " + e.what());
  }
  return config_from_json(j);
}

trees::Hyperparams preset_hyperparams(trees::Variant model, trees::Strategy strategy) {
  using trees::ClassWeight;
  using trees::Criterion;
  const bool bts = strategy == trees::Strategy::kBTS;
  trees::Hyperparams hp;
  auto set = [&](ClassWeight w, Criterion c, std::optional<int> depth, int leaf, int split,
                 int estimators) {
    hp.class_weight = w;
    hp.criterion = c;
    hp.max_depth = depth;
    hp.min_samples_leaf = leaf;
    hp.min_samples_split = split;
    hp.n_estimators = estimators;
  };
  switch (model) {
    case trees::Variant::kETC:
      if (bts) set(ClassWeight::kNone, Criterion::kGini, 100, 10, 50, 1);
      else set(ClassWeight::kNone, Criterion::kGini, std::nullopt, 1, 100, 1);
      break;
    case trees::Variant::kEETC:
      if (bts) set(ClassWeight::kBalanced, Criterion::kEntropy, 500, 1, 50, 100);
      else set(ClassWeight::kNone, Criterion::kGini, 100, 1, 2, 100);
      break;
    case trees::Variant::kDT:
      if (bts) set(ClassWeight::kNone, Criterion::kGini, 500, 1, 50, 1);
      else set(ClassWeight::kNone, Criterion::kGini, 100, 1, 50, 1);
      break;
    case trees::Variant::kRF:
      if (bts) set(ClassWeight::kBalanced, Criterion::kGini, 100, 1, 50, 200);
      else set(ClassWeight::kNone, Criterion::kGini, 100, 10, 2, 200);
      break;
  }
  return hp;
}

trees::Hyperparams effective_hyperparams(const PipelineConfig& config) {
  json j = trees::to_json(preset_hyperparams(config.model, config.strategy));
  for (const auto& [key, value] : config.hyperparams.items()) {
    if (!j.contains(key)) throw ConfigError("unknown hyperparameter '" + key + "'");
    j[key] = value;
  }
  trees::Hyperparams hp = trees::hyperparams_from_json(j);
  hp.seed = config.seed;
  hp.n_threads = config.threads;
  return hp;
}

PreparedDoc prepare_document(const Judgement& doc, const Lexica& lexica,
                             double jaro_threshold) {
  PreparedDoc out;
  out.id = doc.id;
  try {
    out.entities = entities::extract_entities(doc, lexica.entities);
    const auto anonymised = anon::anonymize(doc.raw_text, lexica.anon, jaro_threshold);
    out.tokens =
        text::preprocess(doc.id, anonymised.text, lexica.stoplist, lexica.lemmas).tokens;
  } catch (const DataError& e) {
    throw DataError("document " + doc.id + ": " + e.what());
  }
  out.labels = labels::canonicalize(doc.annotations);
  return out;
}

PreparedCorpus prepare_corpus(const Corpus& corpus, const Lexica& lexica,
                              double jaro_threshold) {
  PreparedCorpus out;
  out.docs.reserve(corpus.n());
  std::vector<LabelSet> sets;
  for (const auto& doc : corpus.documents) {
    out.docs.push_back(prepare_document(doc, lexica, jaro_threshold));
    sets.push_back(out.docs.back().labels);
  }
  out.classes = labels::build_class_catalog(sets);
  auto enc = labels::mts_encode(sets);
  out.combos = std::move(enc.catalog);
  out.alpha = std::move(enc.alpha);
  for (const auto& s : sets) out.targets.push_back(out.classes.indices(s));
  return out;
}

features::FeatureMatrix FittedPipeline::featurize(const std::vector<PreparedDoc>& docs,
                                                  std::span<const std::size_t> rows) const {
  features::TokenDocs tokens;
  std::vector<entities::EntityRecord> records;
  tokens.reserve(rows.size());
  records.reserve(rows.size());
  for (std::size_t r : rows) {
    tokens.push_back(docs.at(r).tokens);
    records.push_back(docs.at(r).entities);
  }
  const auto textual = features::transform(vectorizer, tokens);
  const auto categorical =
      features::encode_categoricals(encoder, records).select_columns(kept_fields);
  return features::hconcat(textual, categorical);
}

features::FeatureMatrix FittedPipeline::featurize(const std::vector<PreparedDoc>& docs) const {
  std::vector<std::size_t> rows(docs.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return featurize(docs, rows);
}

FittedPipeline fit_pipeline(const PreparedCorpus& corpus,
                            std::span<const std::size_t> train_rows,
                            const PipelineConfig& config, FitDiagnostics* diagnostics) {
  if (train_rows.empty()) throw DataError("training split is empty");
  features::TokenDocs tokens;
  std::vector<entities::EntityRecord> records;
  std::vector<int> alpha;
  std::vector<labels::IndexSet> targets;
  for (std::size_t r : train_rows) {
    tokens.push_back(corpus.docs.at(r).tokens);
    records.push_back(corpus.docs.at(r).entities);
    alpha.push_back(corpus.alpha.at(r));
    targets.push_back(corpus.targets.at(r));
  }

  FittedPipeline fitted;
  const auto full_vocab = features::fit_vectorizer(tokens, config.vectorizer);
  const auto textual = features::transform(full_vocab, tokens);
  const auto categorical = features::encode_categoricals(records, &fitted.encoder);

  const auto corr =
      features::select_by_correlation(categorical, alpha, config.correlation_threshold);
  fitted.kept_fields = corr.kept;

  std::vector<std::size_t> kept_terms(textual.cols());
  for (std::size_t c = 0; c < kept_terms.size(); ++c) kept_terms[c] = c;
  const bool several_classes =
      std::adjacent_find(alpha.begin(), alpha.end(), std::not_equal_to<>()) != alpha.end();
  if (config.importance_selection && several_classes) {
    auto imp = features::select_by_importance(textual, alpha, config.importance_estimators,
                                              config.seed, config.threads);
    if (!imp.kept.empty()) kept_terms = std::move(imp.kept);
  }
  fitted.vectorizer = full_vocab.restrict_to(kept_terms);

  const auto X = features::hconcat(textual.select_columns(kept_terms),
                                   categorical.select_columns(fitted.kept_fields));
  fitted.model = trees::fit_ensemble(X.view(), X.names, targets, corpus.classes, corpus.combos,
                                     effective_hyperparams(config), config.model,
                                     config.strategy);
  fitted.model.bts_threshold = config.bts_threshold;

  if (diagnostics) {
    diagnostics->vocabulary_size = full_vocab.terms.size();
    diagnostics->kept_terms = kept_terms.size();
    diagnostics->categorical_correlation = corr.correlation;
  }
  return fitted;
}

json to_json(const FittedPipeline& fitted) {
  json tables = json::array();
  for (const auto& t : fitted.encoder.tables) {
    tables.push_back({{"field", t.field}, {"values", t.values}});
  }
  return {{"format", "lexplain-pipeline"},
          {"version", 1},
          {"vectorizer",
           {{"params", vectorizer_json(fitted.vectorizer.params)},
            {"terms", fitted.vectorizer.terms}}},
          {"categories", std::move(tables)},
          {"kept_fields", fitted.kept_fields},
          {"model", trees::to_json(fitted.model)}};
}

FittedPipeline fitted_from_json(const json& j) {
  try {
    if (j.at("format") != "lexplain-pipeline") throw DataError("not a pipeline artifact");
    FittedPipeline fitted;
    const auto& v = j.at("vectorizer");
    fitted.vectorizer.params = vectorizer_from(v.at("params"), "vectorizer.params");
    fitted.vectorizer.terms = v.at("terms").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < fitted.vectorizer.terms.size(); ++i) {
      fitted.vectorizer.vocabulary.emplace(fitted.vectorizer.terms[i], i);
    }
    const auto& tables = j.at("categories");
    if (tables.size() != fitted.encoder.tables.size()) {
      throw DataError("pipeline artifact has the wrong number of category tables");
    }
    for (std::size_t f = 0; f < tables.size(); ++f) {
      fitted.encoder.tables[f].field = tables[f].at("field").get<std::string>();
      fitted.encoder.tables[f].values = tables[f].at("values").get<std::vector<std::string>>();
    }
    fitted.kept_fields = j.at("kept_fields").get<std::vector<std::size_t>>();
    for (std::size_t f : fitted.kept_fields) {
      if (f >= fitted.encoder.tables.size()) throw DataError("kept field index out of range");
    }
    fitted.model = trees::model_from_json(j.at("model"));
    return fitted;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed pipeline artifact: ") + e.what());
  }
}

}  // namespace lexplain::pipeline
