#include "lexplain/features.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "lexplain/error.h"
#include "lexplain/trees.h"

namespace lexplain::features {

namespace {

// Calls fn(ngram) for every contiguous n-gram with lo <= n <= hi.
template <typename Fn>
void for_each_ngram(const std::vector<std::string>& tokens, int lo, int hi, Fn&& fn) {
  std::string gram;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    gram.clear();
    for (int n = 1; n <= hi && i + n <= tokens.size(); ++n) {
      if (n > 1) gram.push_back(' ');
      gram += tokens[i + n - 1];
      if (n >= lo) fn(gram);
    }
  }
}

void check_params(const VectorizerParams& p) {
  if (!(p.min_df >= 0.0 && p.min_df < p.max_df && p.max_df <= 1.0)) {
    throw ConfigError("vectorizer requires 0 <= min_df < max_df <= 1");
  }
  if (p.ngram_lo < 1 || p.ngram_lo > p.ngram_hi) {
    throw ConfigError("vectorizer requires 1 <= ngram_lo <= ngram_hi");
  }
}

}  // namespace

std::vector<double> FeatureMatrix::row(std::size_t r) const {
  std::vector<double> out(cols());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = at(r, c);
  return out;
}

FeatureMatrix FeatureMatrix::select_columns(std::span<const std::size_t> columns) const {
  FeatureMatrix out;
  out.rows = rows;
  out.values.reserve(columns.size() * rows);
  for (std::size_t c : columns) {
    if (c >= cols()) throw DataError("column index out of range");
    out.names.push_back(names[c]);
    out.kinds.push_back(kinds[c]);
    const auto col = column(c);
    out.values.insert(out.values.end(), col.begin(), col.end());
  }
  return out;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> picked) const {
  FeatureMatrix out;
  out.rows = picked.size();
  out.names = names;
  out.kinds = kinds;
  out.values.resize(out.rows * cols());
  for (std::size_t c = 0; c < cols(); ++c) {
    for (std::size_t i = 0; i < picked.size(); ++i) {
      out.values[c * out.rows + i] = at(picked[i], c);
    }
  }
  return out;
}

FeatureMatrix hconcat(const FeatureMatrix& a, const FeatureMatrix& b) {
  if (a.cols() == 0) return b;
  if (b.cols() == 0) return a;
  if (a.rows != b.rows) throw DataError("cannot concatenate matrices with different row counts");
  FeatureMatrix out = a;
  out.names.insert(out.names.end(), b.names.begin(), b.names.end());
  out.kinds.insert(out.kinds.end(), b.kinds.begin(), b.kinds.end());
  out.values.insert(out.values.end(), b.values.begin(), b.values.end());
  std::unordered_set<std::string> seen;
  for (const auto& n : out.names) {
    if (!seen.insert(n).second) throw DataError("duplicate column name '" + n + "'");
  }
  return out;
}

std::string export_tsv(const FeatureMatrix& m, std::span<const std::string> ids) {
  if (ids.size() != m.rows) throw DataError("id count does not match row count");
  std::ostringstream out;
  out << "id";
  for (std::size_t c = 0; c < m.cols(); ++c) {
    out << '\t' << (m.kinds[c] == ColumnKind::kTextual ? "textual:" : "categorical:")
        << m.names[c];
  }
  out << '\n';
  for (std::size_t r = 0; r < m.rows; ++r) {
    out << ids[r];
    for (std::size_t c = 0; c < m.cols(); ++c) out << '\t' << m.at(r, c);
    out << '\n';
  }
  return out.str();
}

VectorizerModel VectorizerModel::restrict_to(std::span<const std::size_t> columns) const {
  VectorizerModel out;
  out.params = params;
  std::vector<std::size_t> sorted(columns.begin(), columns.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t c : sorted) {
    out.vocabulary.emplace(terms.at(c), out.terms.size());
    out.terms.push_back(terms[c]);
  }
  return out;
}

VectorizerModel fit_vectorizer(const TokenDocs& docs, const VectorizerParams& params) {
  check_params(params);
  if (docs.empty()) throw DataError("cannot fit a vectorizer on zero documents");
  std::unordered_map<std::string, std::size_t> df;
  std::unordered_set<std::string> seen;
  for (const auto& doc : docs) {
    seen.clear();
    for_each_ngram(doc, params.ngram_lo, params.ngram_hi, [&](const std::string& g) {
      if (seen.insert(g).second) ++df[g];
    });
  }
  const double n = static_cast<double>(docs.size());
  const double lo = params.min_df * n;
  const double hi = params.max_df * n;
  VectorizerModel model;
  model.params = params;
  for (const auto& [term, count] : df) {
    const auto c = static_cast<double>(count);
    if (c >= lo && c <= hi) model.terms.push_back(term);
  }
  if (model.terms.empty()) {
    throw DataError("vectorizer vocabulary is empty after document-frequency filtering");
  }
  std::sort(model.terms.begin(), model.terms.end());
  for (std::size_t j = 0; j < model.terms.size(); ++j) {
    model.vocabulary.emplace(model.terms[j], j);
  }
  return model;
}

FeatureMatrix transform(const VectorizerModel& model, const TokenDocs& docs) {
  FeatureMatrix m;
  m.rows = docs.size();
  m.names = model.terms;
  m.kinds.assign(model.terms.size(), ColumnKind::kTextual);
  m.values.assign(m.rows * m.names.size(), 0.0);
  std::unordered_map<std::string, std::size_t> index(model.vocabulary.begin(),
                                                      model.vocabulary.end());
  for (std::size_t r = 0; r < docs.size(); ++r) {
    for_each_ngram(docs[r], model.params.ngram_lo, model.params.ngram_hi,
                   [&](const std::string& g) {
                     const auto it = index.find(g);
                     if (it != index.end()) m.values[it->second * m.rows + r] += 1.0;
                   });
  }
  return m;
}

int CategoryTable::code(const std::string& value) const {
  const auto it = std::find(values.begin(), values.end(), value);
  return it == values.end() ? 0 : static_cast<int>(it - values.begin()) + 1;
}

CategoricalEncoder fit_categoricals(const std::vector<entities::EntityRecord>& records) {
  CategoricalEncoder enc;
  std::array<std::map<std::string, std::size_t>, 7> freq;
  for (const auto& rec : records) {
    const auto values = entities::field_values(rec);
    for (std::size_t f = 0; f < 7; ++f) {
      if (values[f] != entities::kUnknownValue) ++freq[f][values[f]];
    }
  }
  for (std::size_t f = 0; f < 7; ++f) {
    auto& table = enc.tables[f];
    table.field = std::string(entities::kEntityFieldNames[f]);
    std::vector<std::pair<std::string, std::size_t>> items(freq[f].begin(), freq[f].end());
    std::stable_sort(items.begin(), items.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    for (auto& [value, count] : items) table.values.push_back(value);
  }
  return enc;
}

FeatureMatrix encode_categoricals(const CategoricalEncoder& encoder,
                                  const std::vector<entities::EntityRecord>& records) {
  FeatureMatrix m;
  m.rows = records.size();
  m.values.assign(m.rows * 7, 0.0);
  for (std::size_t f = 0; f < 7; ++f) {
    m.names.push_back(categorical_column_name(encoder.tables[f].field));
    m.kinds.push_back(ColumnKind::kCategorical);
  }
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto values = entities::field_values(records[r]);
    for (std::size_t f = 0; f < 7; ++f) {
      m.values[f * m.rows + r] = encoder.tables[f].code(values[f]);
    }
  }
  return m;
}

FeatureMatrix encode_categoricals(const std::vector<entities::EntityRecord>& records,
                                  CategoricalEncoder* encoder_out) {
  CategoricalEncoder enc = fit_categoricals(records);
  FeatureMatrix m = encode_categoricals(enc, records);
  if (encoder_out) *encoder_out = std::move(enc);
  return m;
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

RankBins discretize_ranks(std::span<const double> values) {
  RankBins out;
  out.bins.assign(values.size(), 1);
  if (values.empty()) {
    out.constant = true;
    return out;
  }
  const auto ranks = average_ranks(values);
  const auto [lo_it, hi_it] = std::minmax_element(ranks.begin(), ranks.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (hi <= lo) {
    out.constant = true;
    return out;
  }
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    const int bin = std::min(9, static_cast<int>(std::floor((ranks[i] - lo) / (hi - lo) * 10.0)));
    out.bins[i] = 10 - bin;
  }
  return out;
}

SpearmanReport spearman_report(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("spearman inputs differ in length");
  if (x.size() < 2) throw DataError("spearman needs at least two values");
  SpearmanReport rep;
  rep.rank_x = average_ranks(x);
  rep.rank_y = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rep.rank_x.begin(), rep.rank_x.end(), 0.0) / n;
  const double my = std::accumulate(rep.rank_y.begin(), rep.rank_y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = rep.rank_x[i] - mx;
    const double dy = rep.rank_y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw DataError("spearman correlation is undefined for constant input");
  }
  rep.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  return rep;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  return spearman_report(x, y).r;
}

CorrelationSelection select_by_correlation(const FeatureMatrix& m,
                                           std::span<const int> target,
                                           double threshold) {
  if (target.size() != m.rows) throw DataError("target length does not match row count");
  const std::vector<double> y(target.begin(), target.end());
  CorrelationSelection sel;
  sel.correlation.assign(m.cols(), 0.0);
  sel.constant.assign(m.cols(), false);
  const bool target_constant =
      std::adjacent_find(y.begin(), y.end(), std::not_equal_to<>()) == y.end();
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const RankBins bins = discretize_ranks(m.column(c));
    const bool flat = bins.constant ||
                      std::adjacent_find(bins.bins.begin(), bins.bins.end(),
                                         std::not_equal_to<>()) == bins.bins.end();
    if (flat || target_constant) {
      sel.constant[c] = true;
      continue;
    }
    const std::vector<double> b(bins.bins.begin(), bins.bins.end());
    sel.correlation[c] = spearman(b, y);
    if (std::abs(sel.correlation[c]) >= threshold) sel.kept.push_back(c);
  }
  return sel;
}

ImportanceSelection select_by_importance(const FeatureMatrix& m,
                                         std::span<const int> target,
                                         int n_estimators, std::uint64_t seed,
                                         int n_threads) {
  if (target.size() != m.rows) throw DataError("target length does not match row count");
  std::map<int, int> remap;
  for (int t : target) remap.emplace(t, 0);
  if (remap.size() < 2) {
    throw DataError("importance selection needs at least two target classes");
  }
  int next = 0;
  for (auto& [label, code] : remap) code = next++;
  std::vector<int> y;
  y.reserve(target.size());
  for (int t : target) y.push_back(remap[t]);

  trees::Hyperparams hp;
  hp.n_estimators = n_estimators;
  hp.seed = seed;
  hp.n_threads = n_threads;
  const auto forest =
      trees::fit_forest(m.view(), y, static_cast<int>(remap.size()), hp, trees::Variant::kRF);

  ImportanceSelection sel;
  sel.importance = forest.feature_importances();
  if (sel.importance.empty()) return sel;
  sel.cutoff = std::accumulate(sel.importance.begin(), sel.importance.end(), 0.0) /
               static_cast<double>(sel.importance.size());
  for (std::size_t c = 0; c < sel.importance.size(); ++c) {
    if (sel.importance[c] >= sel.cutoff) sel.kept.push_back(c);
  }
  return sel;
}

}  // namespace lexplain::features
