#include "lexplain/evaluation.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "lexplain/error.h"
#include "lexplain/rng.h"

namespace lexplain::evaluation {

namespace {

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
  return buf;
}

}  // namespace

std::vector<int> assign_folds(const std::vector<int>& alpha, int k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("cross-validation needs at least 2 folds");
  if (alpha.size() < static_cast<std::size_t>(k)) {
    throw DataError("cannot split " + std::to_string(alpha.size()) + " documents into " +
                    std::to_string(k) + " folds");
  }
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < alpha.size(); ++i) by_class[alpha[i]].push_back(i);
  Rng rng(seed);
  std::vector<std::size_t> order;
  order.reserve(alpha.size());
  for (auto& [cls, members] : by_class) {
    rng.shuffle(std::span<std::size_t>(members));
    order.insert(order.end(), members.begin(), members.end());
  }
  std::vector<int> fold(alpha.size(), 0);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    fold[order[pos]] = static_cast<int>(pos % static_cast<std::size_t>(k));
  }
  return fold;
}

CvReport cross_validate(const pipeline::PreparedCorpus& corpus,
                        const pipeline::PipelineConfig& config) {
  pipeline::validate(config);
  const auto fold = assign_folds(corpus.alpha, config.folds, config.seed);
  CvReport report;
  report.strategy = config.strategy;
  report.model = config.model;
  std::vector<metrics::Metrics> per_fold;
  for (int f = 0; f < config.folds; ++f) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < fold.size(); ++i) (fold[i] == f ? test : train).push_back(i);

    std::vector<bool> seen(corpus.classes.m(), false);
    for (std::size_t i : train) {
      for (int c : corpus.targets[i]) seen[c] = true;
    }
    for (std::size_t c = 0; c < seen.size(); ++c) {
      if (!seen[c]) {
        report.warnings.push_back("fold " + std::to_string(f) + ": class '" +
                                  corpus.classes.at(c).display() +
                                  "' has no training members");
      }
    }

    const auto start = std::chrono::steady_clock::now();
    const auto fitted = pipeline::fit_pipeline(corpus, train, config);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const auto X = fitted.featurize(corpus.docs, test);
    metrics::SetList L, Z;
    for (std::size_t r = 0; r < test.size(); ++r) {
      L.push_back(corpus.targets[test[r]]);
      Z.push_back(fitted.model.predict_indices(X.row(r)));
    }
    FoldResult res;
    res.metrics = metrics::compute_all(L, Z, corpus.classes.m(),
                                       metrics::MacroOptions{config.macro_skip_absent});
    res.train_seconds = seconds;
    res.train_size = train.size();
    res.test_size = test.size();
    per_fold.push_back(res.metrics);
    report.train_seconds += seconds;
    report.folds.push_back(res);
  }
  report.mean = metrics::mean(per_fold);
  return report;
}

pipeline::PreparedCorpus subset(const pipeline::PreparedCorpus& corpus,
                                const std::vector<std::size_t>& rows) {
  pipeline::PreparedCorpus out;
  std::vector<LabelSet> sets;
  for (std::size_t r : rows) {
    out.docs.push_back(corpus.docs.at(r));
    sets.push_back(out.docs.back().labels);
  }
  out.classes = labels::build_class_catalog(sets);
  auto enc = labels::mts_encode(sets);
  out.combos = std::move(enc.catalog);
  out.alpha = std::move(enc.alpha);
  for (const auto& s : sets) out.targets.push_back(out.classes.indices(s));
  return out;
}

std::vector<std::size_t> sample_rows(std::size_t n, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("sample fraction must lie in (0, 1]");
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(rows));
  const auto keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n))));
  rows.resize(std::min(keep, n));
  std::sort(rows.begin(), rows.end());
  return rows;
}

double score_of(const metrics::Metrics& m, const std::string& scoring) {
  const auto& a = m.averaged;
  if (scoring == "exact_match") return m.exact_match;
  if (scoring == "accuracy") return m.accuracy;
  if (scoring == "precision") return m.precision;
  if (scoring == "recall") return m.recall;
  if (scoring == "micro_precision") return a.micro_precision;
  if (scoring == "micro_recall") return a.micro_recall;
  if (scoring == "micro_f") return a.micro_f;
  if (scoring == "macro_precision") return a.macro_precision;
  if (scoring == "macro_recall") return a.macro_recall;
  if (scoring == "macro_f") return a.macro_f;
  throw ConfigError("unknown scoring '" + scoring + "'");
}

GridResult grid_search(const pipeline::PipelineConfig& config, const Evaluator& evaluate) {
  if (config.grid.empty()) throw ConfigError("config field 'grid.axes': grid is empty");
  GridResult result;
  std::size_t total = 1;
  for (const auto& axis : config.grid) {
    if (axis.values.empty()) {
      throw ConfigError("config field 'grid.axes': axis '" + axis.key + "' has no values");
    }
    result.keys.push_back(axis.key);
    total *= axis.values.size();
  }
  for (std::size_t flat = 0; flat < total; ++flat) {
    GridPoint point;
    point.values.resize(config.grid.size());
    std::size_t rest = flat;
    for (std::size_t a = config.grid.size(); a-- > 0;) {
      const auto& values = config.grid[a].values;
      point.values[a] = values[rest % values.size()];
      rest /= values.size();
    }
    pipeline::PipelineConfig c = config;
    for (std::size_t a = 0; a < config.grid.size(); ++a) {
      c = pipeline::with_field(c, config.grid[a].key, point.values[a]);
    }
    point.mean = evaluate(c);
    point.score = score_of(point.mean, config.scoring);
    if (result.points.empty() || point.score > result.points[result.best].score) {
      result.best = result.points.size();
    }
    result.points.push_back(std::move(point));
  }
  return result;
}

GridResult grid_search(const pipeline::PreparedCorpus& corpus,
                       const pipeline::PipelineConfig& config) {
  return grid_search(config, [&](const pipeline::PipelineConfig& c) {
    return cross_validate(corpus, c).mean;
  });
}

std::string report_header(bool include_timing) {
  std::string h =
      "strategy\tmodel\texact_match\taccuracy\tprecision_macro\tprecision_micro\t"
      "recall_macro\trecall_micro\tf_macro\tf_micro\thamming_loss";
  if (include_timing) h += "\ttrain_seconds";
  return h + "\n";
}

std::string report_row(const CvReport& report, bool include_timing) {
  const auto& m = report.mean;
  const auto& a = m.averaged;
  std::string row = std::string(trees::to_string(report.strategy)) + "\t" +
                    std::string(trees::to_string(report.model));
  for (double v : {m.exact_match, m.accuracy, a.macro_precision, a.micro_precision,
                   a.macro_recall, a.micro_recall, a.macro_f, a.micro_f, m.hamming_loss}) {
    row += "\t" + percent(v);
  }
  if (include_timing) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", report.train_seconds);
    row += "\t";
    row += buf;
  }
  return row + "\n";
}

std::string format_grid(const GridResult& result, const std::string& scoring) {
  std::string out;
  for (const auto& k : result.keys) out += k + "\t";
  out += scoring + "\tbest\n";
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const auto& p = result.points[i];
    for (const auto& v : p.values) out += v.dump() + "\t";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", p.score);
    out += buf;
    out += i == result.best ? "\t*\n" : "\t\n";
  }
  return out;
}

}  // namespace lexplain::evaluation
