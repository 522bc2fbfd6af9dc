// Command-line driver: one subcommand per pipeline stage.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "lexplain/error.h"
#include "lexplain/evaluation.h"
#include "lexplain/explain.h"
#include "lexplain/io.h"
#include "lexplain/lexica.h"
#include "lexplain/pipeline.h"
#include "lexplain/synth.h"

namespace {

using namespace lexplain;
using nlohmann::json;

enum Exit { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string strategy;
  std::string model;
  std::optional<int> folds;
  std::string out;
  std::string corpus;
  std::string lexica;
  std::string artifact;
  std::optional<int> sample;
  std::string graph;
  int tree = 0;
  std::optional<int> depth;
  // synth
  std::size_t docs = 2000;
  std::size_t classes = 5;
  double noise = 0.2;
};

pipeline::PipelineConfig resolve_config(const Options& o, bool need_corpus) {
  pipeline::PipelineConfig c;
  if (!o.config.empty()) c = pipeline::load_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (!o.strategy.empty()) c.strategy = trees::parse_strategy(o.strategy);
  if (!o.model.empty()) c.model = trees::parse_variant(o.model);
  if (o.folds) c.folds = *o.folds;
  if (!o.corpus.empty()) c.corpus = o.corpus;
  if (!o.lexica.empty()) c.lexica = o.lexica;
  if (!o.out.empty()) c.output = o.out;
  if (o.depth) c.graph_depth = *o.depth;
  if (need_corpus && c.corpus.empty()) {
    throw ConfigError("config field 'corpus': no corpus given (use --config or --corpus)");
  }
  pipeline::validate(c, need_corpus);
  return c;
}

Lexica lexica_for(const pipeline::PipelineConfig& c) {
  return load_lexica(c.lexica.empty() ? default_lexica_dir() : std::filesystem::path(c.lexica));
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    io::write_file_atomic(path, text);
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

pipeline::FittedPipeline load_artifact(const std::string& path) {
  if (path.empty()) throw ConfigError("--artifact is required");
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw DataError("artifact '" + path + "' is not valid JSON: " + e.what());
  }
  return pipeline::fitted_from_json(j);
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = i;
  return rows;
}

int cmd_synth(const Options& o) {
  synth::SynthConfig sc;
  sc.n_docs = o.docs;
  sc.n_classes = o.classes;
  sc.noise = o.noise;
  if (o.seed) sc.seed = *o.seed;
  std::ostringstream ss;
  write_corpus(synth::generate_corpus(sc), ss);
  emit(o.out, ss.str());
  return kOk;
}

int cmd_preprocess(const Options& o) {
  const auto c = resolve_config(o, true);
  const auto prepared = pipeline::prepare_corpus(load_corpus(c.corpus), lexica_for(c),
                                                 c.jaro_threshold);
  std::string out;
  for (const auto& d : prepared.docs) out += json{{"id", d.id}, {"tokens", d.tokens}}.dump() + "\n";
  emit(o.out, out);
  return kOk;
}

int cmd_anonymize(const Options& o) {
  const auto c = resolve_config(o, true);
  const auto corpus = load_corpus(c.corpus);
  const auto lex = lexica_for(c);
  std::string out;
  for (const auto& doc : corpus.documents) {
    anon::Anonymised a;
    try {
      a = anon::anonymize(doc.raw_text, lex.anon, c.jaro_threshold);
    } catch (const DataError& e) {
      throw DataError("document " + doc.id + ": " + e.what());
    }
    json counts = json::object();
    for (const auto& [role, n] : a.report.counts) counts[std::string(anon::tag(role))] = n;
    out += json{{"id", doc.id}, {"text", a.text}, {"replacements", counts}}.dump() + "\n";
  }
  emit(o.out, out);
  return kOk;
}

int cmd_entities(const Options& o) {
  const auto c = resolve_config(o, true);
  const auto corpus = load_corpus(c.corpus);
  const auto lex = lexica_for(c);
  std::string out = "id";
  for (auto name : entities::kEntityFieldNames) out += "\t" + std::string(name);
  out += "\n";
  for (const auto& doc : corpus.documents) {
    entities::EntityRecord r;
    try {
      r = entities::extract_entities(doc, lex.entities);
    } catch (const DataError& e) {
      throw DataError("document " + doc.id + ": " + e.what());
    }
    out += doc.id;
    for (const auto& v : entities::field_values(r)) out += "\t" + v;
    out += "\n";
  }
  emit(o.out, out);
  return kOk;
}

int cmd_featurize(const Options& o) {
  const auto c = resolve_config(o, true);
  const auto prepared = pipeline::prepare_corpus(load_corpus(c.corpus), lexica_for(c),
                                                 c.jaro_threshold);
  const auto rows = all_rows(prepared.docs.size());
  const auto fitted = pipeline::fit_pipeline(prepared, rows, c);
  std::vector<std::string> ids;
  for (const auto& d : prepared.docs) ids.push_back(d.id);
  emit(o.out, features::export_tsv(fitted.featurize(prepared.docs), ids));
  return kOk;
}

int cmd_train(const Options& o) {
  const auto c = resolve_config(o, true);
  const auto prepared = pipeline::prepare_corpus(load_corpus(c.corpus), lexica_for(c),
                                                 c.jaro_threshold);
  const auto fitted = pipeline::fit_pipeline(prepared, all_rows(prepared.docs.size()), c);
  emit(c.output, pipeline::to_json(fitted).dump() + "\n");
  return kOk;
}

int cmd_evaluate(const Options& o) {
  const auto c = resolve_config(o, true);
  const auto prepared = pipeline::prepare_corpus(load_corpus(c.corpus), lexica_for(c),
                                                 c.jaro_threshold);
  const auto report = evaluation::cross_validate(prepared, c);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  emit(c.output, evaluation::report_header(c.include_timing) +
                     evaluation::report_row(report, c.include_timing));
  return kOk;
}

int cmd_gridsearch(const Options& o) {
  auto c = resolve_config(o, true);
  if (c.grid.empty()) {
    using Values = std::vector<json>;
    c.grid = {{"vectorizer.max_df", Values{0.9, 0.7, 0.5}},
              {"vectorizer.min_df", Values{0.1, 0.01, 0.001}},
              {"vectorizer.ngram_range",
               Values{json::array({1, 1}), json::array({1, 2}), json::array({1, 3})}}};
  }
  const auto prepared = pipeline::prepare_corpus(load_corpus(c.corpus), lexica_for(c),
                                                 c.jaro_threshold);
  const auto sample = evaluation::subset(
      prepared, evaluation::sample_rows(prepared.docs.size(), c.grid_fraction, c.seed));
  const auto result = evaluation::grid_search(sample, c);
  emit(c.output, evaluation::format_grid(result, c.scoring));
  return kOk;
}

int cmd_explain(const Options& o) {
  const auto c = resolve_config(o, true);
  const auto fitted = load_artifact(o.artifact);
  const auto corpus = load_corpus(c.corpus);
  if (!o.sample) throw ConfigError("--sample is required");
  if (*o.sample < 1 || static_cast<std::size_t>(*o.sample) > corpus.n()) {
    throw ConfigError("--sample must lie in [1, " + std::to_string(corpus.n()) + "]");
  }
  const auto& doc = corpus.documents[static_cast<std::size_t>(*o.sample - 1)];
  const std::vector<pipeline::PreparedDoc> docs = {
      pipeline::prepare_document(doc, lexica_for(c), c.jaro_threshold)};
  const auto X = fitted.featurize(docs);
  const auto row = X.row(0);
  explain::PerturbationParams params;
  params.n_samples = c.explain_samples;
  params.seed = c.seed;
  const auto e = explain::explain(fitted.model, row, std::to_string(*o.sample),
                                  docs[0].entities, params);
  emit(c.output, explain::render_explanation(e));
  if (!o.graph.empty()) {
    const std::size_t forest = fitted.model.strategy == trees::Strategy::kMTS
                                   ? 0
                                   : explain::explained_output(fitted.model, row);
    const auto& f = fitted.model.forests.at(forest);
    if (o.tree < 0 || static_cast<std::size_t>(o.tree) >= f.trees.size()) {
      throw ConfigError("--tree must lie in [0, " + std::to_string(f.trees.size()) + ")");
    }
    io::write_file_atomic(o.graph, explain::export_tree_graph(
                                       f.trees[o.tree], c.graph_depth, fitted.model.feature_names,
                                       explain::class_labels(fitted.model, forest)));
  }
  return kOk;
}

int cmd_export_tree(const Options& o) {
  const auto fitted = load_artifact(o.artifact);
  const int depth = o.depth.value_or(3);
  const auto& model = fitted.model;
  // BTS models: --tree indexes the concatenation of the per-class forests.
  std::size_t index = static_cast<std::size_t>(std::max(o.tree, 0));
  for (std::size_t f = 0; f < model.forests.size(); ++f) {
    const auto& trees = model.forests[f].trees;
    if (index < trees.size()) {
      emit(o.out, explain::export_tree_graph(trees[index], depth, model.feature_names,
                                             explain::class_labels(model, f)));
      return kOk;
    }
    index -= trees.size();
  }
  throw ConfigError("--tree must lie in [0, " + std::to_string(model.tree_count()) + ")");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-label classification and explanation of court judgements"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool pipeline_flags) {
    sub->add_option("--config", o.config, "JSON configuration file");
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--out", o.out, "Output file (default: stdout)");
    sub->add_option("--corpus", o.corpus, "Corpus file (overrides the config)");
    sub->add_option("--lexica", o.lexica, "Lexica directory (overrides the config)");
    if (pipeline_flags) {
      sub->add_option("--strategy", o.strategy, "bts or mts")
          ->check(CLI::IsMember({"bts", "mts"}));
      sub->add_option("--model", o.model, "dt, etc, eetc or rf")
          ->check(CLI::IsMember({"dt", "etc", "eetc", "rf"}));
      sub->add_option("--folds", o.folds, "Cross-validation folds");
    }
  };

  auto* synth = app.add_subcommand("synth", "Generate a synthetic labelled corpus");
  synth->add_option("--seed", o.seed, "Generator seed");
  synth->add_option("--out", o.out, "Output file (default: stdout)");
  synth->add_option("--docs", o.docs, "Number of documents");
  synth->add_option("--classes", o.classes, "Number of base classes (1-7)");
  synth->add_option("--noise", o.noise, "Share of noise tokens");

  auto* preprocess = app.add_subcommand("preprocess", "Write cleaned token streams");
  common(preprocess, false);
  auto* anonymize = app.add_subcommand("anonymize", "Write anonymised texts");
  common(anonymize, false);
  auto* entities_cmd = app.add_subcommand("entities", "Write detected entity fields");
  common(entities_cmd, false);
  auto* featurize = app.add_subcommand("featurize", "Write the selected feature matrix");
  common(featurize, true);
  auto* train = app.add_subcommand("train", "Fit the pipeline and write the artifact");
  common(train, true);
  auto* evaluate = app.add_subcommand("evaluate", "Cross-validate and write the report");
  common(evaluate, true);
  auto* gridsearch = app.add_subcommand("gridsearch", "Grid search over config fields");
  common(gridsearch, true);
  auto* explain_cmd = app.add_subcommand("explain", "Explain one document's prediction");
  common(explain_cmd, false);
  explain_cmd->add_option("--artifact", o.artifact, "Trained pipeline artifact")->required();
  explain_cmd->add_option("--sample", o.sample, "1-based document number")->required();
  explain_cmd->add_option("--graph", o.graph, "Also write a DOT graph of one tree");
  explain_cmd->add_option("--tree", o.tree, "Tree index for --graph");
  explain_cmd->add_option("--depth", o.depth, "Graph depth");
  auto* export_tree = app.add_subcommand("export-tree", "Write one tree as DOT");
  export_tree->add_option("--artifact", o.artifact, "Trained pipeline artifact")->required();
  export_tree->add_option("--tree", o.tree, "Tree index");
  export_tree->add_option("--depth", o.depth, "Maximum depth drawn");
  export_tree->add_option("--out", o.out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*synth) return cmd_synth(o);
    if (*preprocess) return cmd_preprocess(o);
    if (*anonymize) return cmd_anonymize(o);
    if (*entities_cmd) return cmd_entities(o);
    if (*featurize) return cmd_featurize(o);
    if (*train) return cmd_train(o);
    if (*evaluate) return cmd_evaluate(o);
    if (*gridsearch) return cmd_gridsearch(o);
    if (*explain_cmd) return cmd_explain(o);
    if (*export_tree) return cmd_export_tree(o);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  std::cerr << app.help();
  return kUsage;
}
