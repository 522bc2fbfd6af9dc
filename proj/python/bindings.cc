#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "json.hpp"
#include "lexplain/error.h"
#include "lexplain/evaluation.h"
#include "lexplain/explain.h"
#include "lexplain/features.h"
#include "lexplain/lexica.h"
#include "lexplain/metrics.h"
#include "lexplain/pipeline.h"
#include "lexplain/synth.h"
#include "lexplain/trees.h"

namespace py = pybind11;
using namespace lexplain;
using nlohmann::json;

namespace {

const Lexica& default_lexica() {
  static const Lexica lex = load_lexica(default_lexica_dir());
  return lex;
}

pipeline::PipelineConfig config_from(const std::string& config_json) {
  return pipeline::config_from_json(config_json.empty() ? json::object()
                                                        : json::parse(config_json));
}

pipeline::PreparedCorpus prepared(const pipeline::PipelineConfig& c) {
  const Lexica lex =
      c.lexica.empty() ? default_lexica() : load_lexica(std::filesystem::path(c.lexica));
  return pipeline::prepare_corpus(load_corpus(c.corpus), lex, c.jaro_threshold);
}

py::dict metrics_dict(const metrics::Metrics& m) {
  py::dict d;
  d["exact_match"] = m.exact_match;
  d["accuracy"] = m.accuracy;
  d["precision"] = m.precision;
  d["recall"] = m.recall;
  d["hamming_loss"] = m.hamming_loss;
  d["micro_precision"] = m.averaged.micro_precision;
  d["micro_recall"] = m.averaged.micro_recall;
  d["micro_f"] = m.averaged.micro_f;
  d["macro_precision"] = m.averaged.macro_precision;
  d["macro_recall"] = m.averaged.macro_recall;
  d["macro_f"] = m.averaged.macro_f;
  return d;
}

}  // namespace

PYBIND11_MODULE(_lexplain, m) {
  m.doc() = "Explainable multi-label classification of court judgements";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("preprocess", [](const std::string& text) {
    const auto& lex = default_lexica();
    return text::preprocess("", text, lex.stoplist, lex.lemmas).tokens;
  }, py::arg("text"));

  m.def("anonymize", [](const std::string& text, double threshold) {
    return anon::anonymize(text, default_lexica().anon, threshold).text;
  }, py::arg("text"), py::arg("threshold") = anon::kDefaultJaroThreshold);

  m.def("jaro", &anon::jaro, py::arg("a"), py::arg("b"));

  m.def("entities", [](const std::string& text) {
    Judgement j;
    j.raw_text = text;
    const auto rec = entities::extract_entities(j, default_lexica().entities);
    const auto values = entities::field_values(rec);
    py::dict d;
    for (std::size_t f = 0; f < values.size(); ++f) {
      d[py::str(std::string(entities::kEntityFieldNames[f]))] = values[f];
    }
    return d;
  }, py::arg("text"));

  m.def("spearman", [](const std::vector<double>& x, const std::vector<double>& y) {
    return features::spearman(x, y);
  });
  m.def("gini", [](const std::vector<double>& c) { return trees::gini(c); });
  m.def("entropy", [](const std::vector<double>& c) { return trees::entropy(c); });

  m.def("metrics", [](const metrics::SetList& L, const metrics::SetList& Z, std::size_t n_classes) {
    return metrics_dict(metrics::compute_all(L, Z, n_classes));
  }, py::arg("annotated"), py::arg("predicted"), py::arg("n_classes"));

  m.def("synth_corpus", [](std::size_t n_docs, std::uint64_t seed, std::size_t n_classes) {
    synth::SynthConfig sc;
    sc.n_docs = n_docs;
    sc.seed = seed;
    sc.n_classes = n_classes;
    std::ostringstream ss;
    write_corpus(synth::generate_corpus(sc), ss);
    return ss.str();
  }, py::arg("n_docs") = 2000, py::arg("seed") = 7, py::arg("n_classes") = 5,
     "Synthetic corpus as JSON lines.");

  m.def("evaluate", [](const std::string& config_json) {
    const auto c = config_from(config_json);
    const auto report = evaluation::cross_validate(prepared(c), c);
    return metrics_dict(report.mean);
  }, py::arg("config_json"), "Cross-validated mean metrics for a JSON config.");

  m.def("train", [](const std::string& config_json) {
    const auto c = config_from(config_json);
    const auto p = prepared(c);
    std::vector<std::size_t> rows(p.docs.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    return pipeline::to_json(pipeline::fit_pipeline(p, rows, c)).dump();
  }, py::arg("config_json"), "Fitted pipeline artifact as JSON text.");

  m.def("explain", [](const std::string& artifact_json, const std::string& text,
                      const std::string& sample_id, int n_samples, std::uint64_t seed) {
    const auto fitted = pipeline::fitted_from_json(json::parse(artifact_json));
    Judgement j;
    j.id = sample_id;
    j.raw_text = text;
    const std::vector<pipeline::PreparedDoc> docs = {
        pipeline::prepare_document(j, default_lexica(), anon::kDefaultJaroThreshold)};
    const auto X = fitted.featurize(docs);
    explain::PerturbationParams params;
    params.n_samples = n_samples;
    params.seed = seed;
    return explain::render_explanation(
        explain::explain(fitted.model, X.row(0), sample_id, docs[0].entities, params));
  }, py::arg("artifact_json"), py::arg("text"), py::arg("sample_id") = "1",
     py::arg("n_samples") = 500, py::arg("seed") = 0);
}
