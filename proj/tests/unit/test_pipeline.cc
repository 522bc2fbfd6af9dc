#include <numeric>

#include "doctest.h"
#include "helpers.h"
#include "lexplain/error.h"
#include "lexplain/pipeline.h"

using namespace lexplain;
using namespace lexplain::pipeline;
using nlohmann::json;

TEST_CASE("config parsing") {
  const auto c = config_from_json(json::parse(R"({
    "seed": 5, "strategy": "BTS", "model": "EETC", "folds": 4,
    "vectorizer": {"max_df": 0.8, "min_df": 0.02, "ngram_range": [1, 3]},
    "selection": {"correlation_threshold": 0.1, "importance": false},
    "hyperparams": {"n_estimators": 7},
    "report": {"scoring": "exact_match"},
    "grid": {"fraction": 0.5, "axes": [{"key": "vectorizer.max_df", "values": [0.4, 0.6]}]}
  })"));
  CHECK(c.seed == 5);
  CHECK(c.strategy == trees::Strategy::kBTS);
  CHECK(c.model == trees::Variant::kEETC);
  CHECK(c.vectorizer.ngram_hi == 3);
  CHECK_FALSE(c.importance_selection);
  CHECK(c.grid.size() == 1);
  CHECK(config_from_json(to_json(c)).seed == 5);
  CHECK(to_json(config_from_json(to_json(c))) == to_json(c));
}

TEST_CASE("config errors name the field") {
  CHECK_THROWS_WITH_AS(config_from_json(json::parse(R"({"vectorizer": {"max_dff": 1}})")),
                       doctest::Contains("vectorizer.max_dff"), ConfigError);
  CHECK_THROWS_WITH_AS(config_from_json(json::parse(R"({"folds": "ten"})")),
                       doctest::Contains("folds"), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"folds": 1})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"model": "SVM"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"report": {"scoring": "auc"}})")),
                  ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  PipelineConfig c;
  c.corpus = "/nonexistent/corpus.jsonl";
  CHECK_THROWS_AS(validate(c, true), ConfigError);
}

TEST_CASE("dotted field updates") {
  const PipelineConfig c;
  CHECK(with_field(c, "vectorizer.max_df", 0.7).vectorizer.max_df == 0.7);
  CHECK(with_field(c, "hyperparams.max_depth", 4).hyperparams["max_depth"] == 4);
  CHECK_THROWS_AS(with_field(c, "vectorizer.nothing", 1), ConfigError);
}

TEST_CASE("presets and overrides") {
  const auto rf = preset_hyperparams(trees::Variant::kRF, trees::Strategy::kMTS);
  CHECK(rf.criterion == trees::Criterion::kGini);
  CHECK(rf.max_depth == 100);
  CHECK(rf.min_samples_leaf == 10);
  CHECK(rf.min_samples_split == 2);
  CHECK(rf.n_estimators == 200);
  CHECK(preset_hyperparams(trees::Variant::kRF, trees::Strategy::kBTS).class_weight ==
        trees::ClassWeight::kBalanced);

  PipelineConfig c;
  c.seed = 99;
  c.hyperparams = {{"n_estimators", 3}};
  const auto hp = effective_hyperparams(c);
  CHECK(hp.n_estimators == 3);
  CHECK(hp.seed == 99);
  c.hyperparams = {{"depth", 3}};
  CHECK_THROWS_AS(effective_hyperparams(c), ConfigError);
}

TEST_CASE("fit, serialize, reload") {
  const auto corpus = prepare_corpus(testing::small_corpus(60), testing::lexica(), 0.9);
  CHECK(corpus.docs.size() == 60);
  CHECK(corpus.alpha.size() == 60);
  PipelineConfig c;
  c.hyperparams = {{"n_estimators", 8}};
  c.threads = 1;
  std::vector<std::size_t> rows(corpus.docs.size());
  std::iota(rows.begin(), rows.end(), 0);
  FitDiagnostics diag;
  const auto fitted = fit_pipeline(corpus, rows, c, &diag);
  CHECK(diag.kept_terms <= diag.vocabulary_size);
  CHECK(diag.kept_terms == fitted.vectorizer.terms.size());
  const auto X = fitted.featurize(corpus.docs);
  CHECK(X.cols() == fitted.vectorizer.terms.size() + fitted.kept_fields.size());
  CHECK(X.cols() == fitted.model.feature_names.size());

  const auto dumped = to_json(fitted).dump();
  const auto back = fitted_from_json(json::parse(dumped));
  CHECK(to_json(back).dump() == dumped);
  const auto X2 = back.featurize(corpus.docs);
  CHECK(X2.values == X.values);
  for (std::size_t r = 0; r < 10; ++r) {
    CHECK(back.model.predict(X2.row(r)) == fitted.model.predict(X.row(r)));
  }
  CHECK(to_json(fit_pipeline(corpus, rows, c)).dump() == dumped);
  CHECK_THROWS_AS(fitted_from_json(json{{"format", "other"}}), DataError);
  CHECK_THROWS_AS(fit_pipeline(corpus, std::vector<std::size_t>{}, c), DataError);
}

TEST_CASE("prepared document") {
  Judgement j;
  j.id = "x1";
  j.raw_text =
      "TRIBUNAL SUPERIOR DE JUSTICIA\nSala de lo Social\nRecurso de Suplicación nº 4/2020\n"
      "Vistos por el Magistrado D. Juan Pérez los trabajadores.\n";
  j.annotations = {testing::label(SubstantiveOrder::kSocial, "a", "b", "c")};
  const auto d = prepare_document(j, testing::lexica(), 0.9);
  CHECK(d.id == "x1");
  CHECK(d.entities.jurisdiction == entities::Jurisdiction::kSocial);
  for (const auto& t : d.tokens) {
    CHECK(t != "juan");
    CHECK(t != "pérez");
  }
}
