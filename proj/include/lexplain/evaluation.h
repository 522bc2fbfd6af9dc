#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lexplain/metrics.h"
#include "lexplain/pipeline.h"

namespace lexplain::evaluation {

// Fold index per document. Documents of each MTS class are shuffled with the
// seed, the classes are concatenated in catalog order and positions are dealt
// round-robin, so every class is spread over as many folds as it has members.
std::vector<int> assign_folds(const std::vector<int>& alpha, int k, std::uint64_t seed);

struct FoldResult {
  metrics::Metrics metrics;
  double train_seconds = 0.0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
};

struct CvReport {
  trees::Strategy strategy = trees::Strategy::kMTS;
  trees::Variant model = trees::Variant::kRF;
  std::vector<FoldResult> folds;
  metrics::Metrics mean;
  double train_seconds = 0.0;  // summed over folds
  std::vector<std::string> warnings;
};

// Vectoriser, selection and model are refitted on each training split.
CvReport cross_validate(const pipeline::PreparedCorpus& corpus,
                        const pipeline::PipelineConfig& config);

// Subset of a prepared corpus; catalogs are rebuilt from the kept documents.
pipeline::PreparedCorpus subset(const pipeline::PreparedCorpus& corpus,
                                const std::vector<std::size_t>& rows);
// Seeded sample of round(fraction * n) documents, at least one.
std::vector<std::size_t> sample_rows(std::size_t n, double fraction, std::uint64_t seed);

// Named metric: exact_match, accuracy, precision, recall, micro_* or macro_*.
double score_of(const metrics::Metrics& m, const std::string& scoring);

struct GridPoint {
  std::vector<nlohmann::json> values;  // one per axis
  double score = 0.0;
  metrics::Metrics mean;
};

struct GridResult {
  std::vector<std::string> keys;
  std::vector<GridPoint> points;  // cartesian order, last axis fastest
  std::size_t best = 0;           // first maximum
};

// Every combination of the config's grid axes. The evaluator defaults to
// cross_validate; tests substitute their own.
using Evaluator = std::function<metrics::Metrics(const pipeline::PipelineConfig&)>;
GridResult grid_search(const pipeline::PreparedCorpus& corpus,
                       const pipeline::PipelineConfig& config);
GridResult grid_search(const pipeline::PipelineConfig& config, const Evaluator& evaluate);

// Tab-separated rows: strategy, model, then the metrics,
// values in percent.
std::string report_header(bool include_timing);
std::string report_row(const CvReport& report, bool include_timing);
std::string format_grid(const GridResult& result, const std::string& scoring);

}  // namespace lexplain::evaluation
