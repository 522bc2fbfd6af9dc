#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "helpers.h"
#include "lexplain/error.h"
#include "lexplain/evaluation.h"

using namespace lexplain;
using namespace lexplain::evaluation;
using nlohmann::json;

namespace {

pipeline::PipelineConfig fast_config() {
  pipeline::PipelineConfig c;
  c.hyperparams = {{"n_estimators", 5}};
  c.importance_selection = false;
  c.vectorizer.min_df = 0.0;
  c.vectorizer.max_df = 1.0;
  c.threads = 1;
  return c;
}

const pipeline::PreparedCorpus& tiny() {
  static const auto p =
      pipeline::prepare_corpus(testing::small_corpus(12), testing::lexica(), 0.9);
  return p;
}

}  // namespace

TEST_CASE("fold assignment") {
  std::vector<int> alpha;
  for (int i = 0; i < 100; ++i) alpha.push_back(1 + i % 4);
  const auto a = assign_folds(alpha, 10, 3);
  CHECK(a == assign_folds(alpha, 10, 3));
  std::map<int, int> size;
  for (int f : a) ++size[f];
  CHECK(size.size() == 10);
  for (const auto& [f, n] : size) CHECK(n == 10);
  // A class with 25 members reaches every fold.
  std::set<int> folds_of_class1;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] == 1) folds_of_class1.insert(a[i]);
  }
  CHECK(folds_of_class1.size() == 10);
}

TEST_CASE("leave-one-out on a tiny corpus") {
  auto c = fast_config();
  c.folds = static_cast<int>(tiny().docs.size());
  const auto report = cross_validate(tiny(), c);
  CHECK(report.folds.size() == tiny().docs.size());
  std::size_t tested = 0;
  for (const auto& f : report.folds) {
    CHECK(f.test_size == 1);
    tested += f.test_size;
  }
  CHECK(tested == tiny().docs.size());
}

TEST_CASE("cross validation is deterministic apart from timing") {
  auto c = fast_config();
  c.folds = 3;
  const auto a = cross_validate(tiny(), c);
  const auto b = cross_validate(tiny(), c);
  CHECK(report_row(a, false) == report_row(b, false));
  const auto header = report_header(false);
  const auto row = report_row(a, false);
  CHECK(std::count(header.begin(), header.end(), '\t') == std::count(row.begin(), row.end(), '\t'));
  CHECK(report_header(true).find("train_seconds") != std::string::npos);
}

TEST_CASE("grid search against a manual loop") {
  auto c = fast_config();
  c.grid = {{"vectorizer.max_df", {0.5, 0.9}}, {"selection.correlation_threshold", {0.05, 0.2}}};
  auto evaluator = [](const pipeline::PipelineConfig& cfg) {
    metrics::Metrics m;
    m.averaged.micro_f = cfg.vectorizer.max_df - cfg.correlation_threshold;
    return m;
  };
  const auto result = grid_search(c, evaluator);
  REQUIRE(result.points.size() == 4);
  CHECK(result.points[1].values[0] == 0.5);
  CHECK(result.points[1].values[1] == 0.2);
  double best = -1;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& p = result.points[i];
    const double s = p.values[0].get<double>() - p.values[1].get<double>();
    CHECK(p.score == s);
    if (s > best) best = s, best_i = i;
  }
  CHECK(result.best == best_i);
  CHECK_FALSE(format_grid(result, "micro_f").empty());

  c.grid = {{"vectorizer.max_df", {0.7}}};
  CHECK(grid_search(c, evaluator).best == 0);
}

TEST_CASE("ties pick the first maximum") {
  auto c = fast_config();
  c.grid = {{"seed", {1, 2, 3}}};
  const auto r = grid_search(c, [](const pipeline::PipelineConfig&) { return metrics::Metrics{}; });
  CHECK(r.best == 0);
}

TEST_CASE("scoring names") {
  metrics::Metrics m;
  m.exact_match = 0.1;
  m.averaged.macro_recall = 0.2;
  CHECK(score_of(m, "exact_match") == 0.1);
  CHECK(score_of(m, "macro_recall") == 0.2);
  CHECK_THROWS_AS(score_of(m, "auc"), ConfigError);
}

TEST_CASE("sampling and subsets") {
  const auto rows = sample_rows(100, 0.2, 5);
  CHECK(rows.size() == 20);
  CHECK(std::is_sorted(rows.begin(), rows.end()));
  CHECK(rows == sample_rows(100, 0.2, 5));
  CHECK(sample_rows(3, 0.01, 1).size() == 1);
  const auto sub = subset(tiny(), {0, 1, 2});
  CHECK(sub.docs.size() == 3);
  CHECK(sub.classes.m() <= tiny().classes.m());
}
