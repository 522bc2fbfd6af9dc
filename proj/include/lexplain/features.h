#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lexplain/entities.h"
#include "lexplain/matrix.h"

namespace lexplain::features {

enum class ColumnKind { kTextual, kCategorical };

// Dense column-major document x feature matrix.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::vector<std::string> names;
  std::vector<ColumnKind> kinds;
  std::vector<double> values;

  std::size_t cols() const { return names.size(); }
  double at(std::size_t r, std::size_t c) const { return values[c * rows + r]; }
  std::span<const double> column(std::size_t c) const {
    return {values.data() + c * rows, rows};
  }
  DataView view() const { return {values.data(), rows, cols()}; }
  std::vector<double> row(std::size_t r) const;
  FeatureMatrix select_columns(std::span<const std::size_t> columns) const;
  FeatureMatrix select_rows(std::span<const std::size_t> rows) const;
};

// Columns of b appended to a; row counts must agree.
FeatureMatrix hconcat(const FeatureMatrix& a, const FeatureMatrix& b);

// Header "id<TAB>kind:name...", then one line per document.
std::string export_tsv(const FeatureMatrix& m, std::span<const std::string> ids);

struct VectorizerParams {
  double max_df = 0.5;
  double min_df = 0.01;
  int ngram_lo = 1;
  int ngram_hi = 2;

  friend bool operator==(const VectorizerParams&, const VectorizerParams&) = default;
};

struct VectorizerModel {
  VectorizerParams params;
  // Lexicographic; column j is terms[j].
  std::vector<std::string> terms;
  std::map<std::string, std::size_t> vocabulary;

  // Keeps only the given columns, re-indexed in their original order.
  VectorizerModel restrict_to(std::span<const std::size_t> columns) const;
};

using TokenDocs = std::vector<std::vector<std::string>>;

// Keeps n-grams with min_df * n <= df <= max_df * n. Empty vocabulary ->
// DataError; parameters outside 0 <= min_df < max_df <= 1, 1 <= lo <= hi ->
// ConfigError.
VectorizerModel fit_vectorizer(const TokenDocs& docs, const VectorizerParams& params);
FeatureMatrix transform(const VectorizerModel& model, const TokenDocs& docs);

// Frequency-ordered category codes for one entity field: 1 is the most
// frequent value (ties lexicographic); unknown and unseen values map to 0.
struct CategoryTable {
  std::string field;
  std::vector<std::string> values;  // code k is values[k - 1]

  int code(const std::string& value) const;
};

struct CategoricalEncoder {
  std::array<CategoryTable, 7> tables;
};

inline std::string categorical_column_name(std::string_view field) {
  return "cat_" + std::string(field);
}

CategoricalEncoder fit_categoricals(const std::vector<entities::EntityRecord>& records);
FeatureMatrix encode_categoricals(const CategoricalEncoder& encoder,
                                  const std::vector<entities::EntityRecord>& records);
// Fit and apply in one step.
FeatureMatrix encode_categoricals(const std::vector<entities::EntityRecord>& records,
                                  CategoricalEncoder* encoder_out = nullptr);

// Average (fractional) ranks, 1-based.
std::vector<double> average_ranks(std::span<const double> values);

struct RankBins {
  std::vector<int> bins;  // 1..10, 1 = largest magnitude
  bool constant = false;
};

RankBins discretize_ranks(std::span<const double> values);

struct SpearmanReport {
  double r = 0.0;
  std::vector<double> rank_x;
  std::vector<double> rank_y;
};

// Pearson correlation of average ranks. Throws DataError on length mismatch,
// fewer than two values, or constant input.
SpearmanReport spearman_report(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);

struct CorrelationSelection {
  std::vector<std::size_t> kept;
  std::vector<double> correlation;  // per input column; 0 when constant
  std::vector<bool> constant;
};

inline constexpr double kDefaultCorrelationThreshold = 0.05;

// Keeps columns whose discretised ranks satisfy |r_s| >= threshold against the
// target. Constant columns are never kept.
CorrelationSelection select_by_correlation(const FeatureMatrix& m,
                                           std::span<const int> target,
                                           double threshold);

struct ImportanceSelection {
  std::vector<std::size_t> kept;
  std::vector<double> importance;
  double cutoff = 0.0;
};

// Fits an n_estimators random forest on the target and keeps columns with
// importance >= mean importance. Single-class target -> DataError.
ImportanceSelection select_by_importance(const FeatureMatrix& m,
                                         std::span<const int> target,
                                         int n_estimators, std::uint64_t seed,
                                         int n_threads = 0);

}  // namespace lexplain::features
