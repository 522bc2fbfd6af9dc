#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lexplain/corpus.h"
#include "lexplain/entities.h"
#include "lexplain/features.h"
#include "lexplain/labels.h"
#include "lexplain/lexica.h"
#include "lexplain/trees.h"

namespace lexplain::pipeline {

struct GridAxis {
  std::string key;  // dotted config path, e.g. "vectorizer.max_df"
  std::vector<nlohmann::json> values;
};

struct PipelineConfig {
  std::string corpus;
  std::string lexica;
  std::string output;

  std::uint64_t seed = 42;
  int folds = 10;
  trees::Strategy strategy = trees::Strategy::kMTS;
  trees::Variant model = trees::Variant::kRF;
  int threads = 0;

  features::VectorizerParams vectorizer;
  double correlation_threshold = features::kDefaultCorrelationThreshold;
  bool importance_selection = true;
  int importance_estimators = 20;

  // Applied over the preset for (model, strategy).
  nlohmann::json hyperparams = nlohmann::json::object();

  double bts_threshold = labels::kDefaultBtsThreshold;
  double jaro_threshold = anon::kDefaultJaroThreshold;

  int explain_samples = 500;
  int graph_depth = 3;

  bool include_timing = true;
  bool macro_skip_absent = true;
  std::string scoring = "micro_f";

  double grid_fraction = 0.2;
  std::vector<GridAxis> grid;
};

// Unknown keys and wrong types raise ConfigError naming the field.
PipelineConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PipelineConfig& config);
PipelineConfig load_config(const std::string& path);
// Range checks; with check_paths, referenced files must exist.
void validate(const PipelineConfig& config, bool check_paths = false);
// Sets a dotted field on a copy of the config.
PipelineConfig with_field(const PipelineConfig& config, const std::string& key,
                          const nlohmann::json& value);

// Tuned settings per (model, strategy) used when the config gives none.
trees::Hyperparams preset_hyperparams(trees::Variant model, trees::Strategy strategy);
trees::Hyperparams effective_hyperparams(const PipelineConfig& config);

// Fold-independent per-document preprocessing.
struct PreparedDoc {
  std::string id;
  entities::EntityRecord entities;
  std::vector<std::string> tokens;
  LabelSet labels;
};

struct PreparedCorpus {
  std::vector<PreparedDoc> docs;
  labels::ClassCatalog classes;
  labels::MtsCatalog combos;
  std::vector<labels::IndexSet> targets;  // class indices per document
  std::vector<int> alpha;                 // 1-based MTS class per document
};

// Entities from the raw text; tokens from the anonymised text.
PreparedDoc prepare_document(const Judgement& doc, const Lexica& lexica,
                             double jaro_threshold);
PreparedCorpus prepare_corpus(const Corpus& corpus, const Lexica& lexica,
                              double jaro_threshold);

struct FittedPipeline {
  features::VectorizerModel vectorizer;  // kept terms only
  features::CategoricalEncoder encoder;
  std::vector<std::size_t> kept_fields;  // entity field indices
  trees::EnsembleModel model;

  features::FeatureMatrix featurize(const std::vector<PreparedDoc>& docs,
                                    std::span<const std::size_t> rows) const;
  features::FeatureMatrix featurize(const std::vector<PreparedDoc>& docs) const;
};

struct FitDiagnostics {
  std::size_t vocabulary_size = 0;
  std::size_t kept_terms = 0;
  std::vector<double> categorical_correlation;
};

FittedPipeline fit_pipeline(const PreparedCorpus& corpus,
                            std::span<const std::size_t> train_rows,
                            const PipelineConfig& config,
                            FitDiagnostics* diagnostics = nullptr);

nlohmann::json to_json(const FittedPipeline& fitted);
FittedPipeline fitted_from_json(const nlohmann::json& j);

}  // namespace lexplain::pipeline
