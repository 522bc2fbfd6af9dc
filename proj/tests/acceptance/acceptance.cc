// Acceptance checks. Prints one PASS/FAIL line per criterion; exits nonzero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lexplain/anonymiser.h"
#include "lexplain/entities.h"
#include "lexplain/error.h"
#include "lexplain/evaluation.h"
#include "lexplain/explain.h"
#include "lexplain/features.h"
#include "lexplain/io.h"
#include "lexplain/labels.h"
#include "lexplain/lexica.h"
#include "lexplain/metrics.h"
#include "lexplain/pipeline.h"
#include "lexplain/rng.h"
#include "lexplain/synth.h"
#include "lexplain/trees.h"
#include "lexplain/utf8.h"

using namespace lexplain;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances and budgets.
constexpr double kMetricTol = 1e-12;
constexpr double kSpearmanTol = 1e-12;
constexpr double kMetricBudgetSeconds = 10.0;
constexpr double kFaithfulnessBudgetSeconds = 30.0;
constexpr double kBenchmarkBudgetSeconds = 300.0;
constexpr double kMinMicroPrecision = 0.85;
constexpr double kMaxHammingLoss = 0.05;
constexpr double kCardinalityTarget = 1.4;
constexpr double kCardinalityTol = 0.1;
constexpr double kJaroExpected = 0.9444;
constexpr double kJaroTol = 1e-4;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const Lexica& lexica() {
  static const Lexica lex = load_lexica(default_lexica_dir());
  return lex;
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

// ---------------------------------------------------------------- metrics

using Indicator = std::vector<std::vector<int>>;

Indicator to_indicator(const metrics::SetList& sets, std::size_t m) {
  Indicator out(sets.size(), std::vector<int>(m, 0));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (int j : sets[i]) out[i][j] = 1;
  }
  return out;
}

metrics::Metrics oracle_metrics(const metrics::SetList& Ls, const metrics::SetList& Zs,
                                std::size_t m) {
  const Indicator L = to_indicator(Ls, m), Z = to_indicator(Zs, m);
  const std::size_t n = L.size();
  metrics::Metrics out;
  double em = 0, acc = 0, prec = 0, rec = 0, ham = 0;
  for (std::size_t i = 0; i < n; ++i) {
    int inter = 0, uni = 0, nl = 0, nz = 0, diff = 0;
    for (std::size_t j = 0; j < m; ++j) {
      inter += L[i][j] & Z[i][j];
      uni += L[i][j] | Z[i][j];
      nl += L[i][j];
      nz += Z[i][j];
      diff += L[i][j] ^ Z[i][j];
    }
    em += diff == 0;
    acc += static_cast<double>(inter) / uni;
    prec += static_cast<double>(inter) / nz;
    rec += static_cast<double>(inter) / nl;
    ham += diff;
  }
  out.exact_match = em / n;
  out.accuracy = acc / n;
  out.precision = prec / n;
  out.recall = rec / n;
  out.hamming_loss = ham / static_cast<double>(n * m);

  double tp_sum = 0, fp_sum = 0, fn_sum = 0;
  double mp = 0, mr = 0, mf = 0;
  int present = 0;
  for (std::size_t j = 0; j < m; ++j) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < n; ++i) {
      tp += L[i][j] && Z[i][j];
      fp += !L[i][j] && Z[i][j];
      fn += L[i][j] && !Z[i][j];
    }
    tp_sum += tp;
    fp_sum += fp;
    fn_sum += fn;
    if (tp + fp + fn == 0) continue;
    ++present;
    const double p = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    const double r = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    mp += p;
    mr += r;
    mf += p + r > 0 ? 2 * p * r / (p + r) : 0.0;
  }
  auto& a = out.averaged;
  a.micro_precision = tp_sum + fp_sum > 0 ? tp_sum / (tp_sum + fp_sum) : 0.0;
  a.micro_recall = tp_sum + fn_sum > 0 ? tp_sum / (tp_sum + fn_sum) : 0.0;
  a.micro_f = a.micro_precision + a.micro_recall > 0
                  ? 2 * a.micro_precision * a.micro_recall /
                        (a.micro_precision + a.micro_recall)
                  : 0.0;
  a.macro_precision = present ? mp / present : 0.0;
  a.macro_recall = present ? mr / present : 0.0;
  a.macro_f = present ? mf / present : 0.0;
  return out;
}

labels::IndexSet random_set(Rng& rng, std::size_t m) {
  const std::size_t size = 1 + rng.uniform_index(std::min<std::size_t>(3, m));
  std::set<int> s;
  while (s.size() < size) s.insert(static_cast<int>(rng.uniform_index(m)));
  return {s.begin(), s.end()};
}

Outcome criterion_metrics() {
  Outcome o;
  const auto t0 = Clock::now();
  Rng rng(101);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(20);
    const std::size_t m = 1 + rng.uniform_index(10);
    metrics::SetList L, Z;
    for (std::size_t i = 0; i < n; ++i) {
      L.push_back(random_set(rng, m));
      Z.push_back(random_set(rng, m));
    }
    const auto got = metrics::compute_all(L, Z, m);
    const auto want = oracle_metrics(L, Z, m);
    const double diffs[] = {
        got.exact_match - want.exact_match,
        got.accuracy - want.accuracy,
        got.precision - want.precision,
        got.recall - want.recall,
        got.hamming_loss - want.hamming_loss,
        got.averaged.micro_precision - want.averaged.micro_precision,
        got.averaged.micro_recall - want.averaged.micro_recall,
        got.averaged.micro_f - want.averaged.micro_f,
        got.averaged.macro_precision - want.averaged.macro_precision,
        got.averaged.macro_recall - want.averaged.macro_recall,
        got.averaged.macro_f - want.averaged.macro_f};
    for (double d : diffs) worst = std::max(worst, std::abs(d));
  }
  const double secs = seconds_since(t0);
  o.require(worst <= kMetricTol, "max deviation " + std::to_string(worst));
  o.require(secs < kMetricBudgetSeconds, "took " + std::to_string(secs) + " s");
  char buf[96];
  std::snprintf(buf, sizeof buf, "1000 instances, max |diff| %.3g, %.2f s", worst, secs);
  if (o.pass) o.detail = buf;
  return o;
}

// ------------------------------------------------------------- transforms

Outcome criterion_transforms() {
  Outcome o;
  Rng rng(202);
  const char* orders[] = {"penal", "civil", "social", "mercantile"};
  for (int trial = 0; trial < 1000 && o.pass; ++trial) {
    const std::size_t pool = 1 + rng.uniform_index(8);
    std::vector<LabelAssignment> classes;
    for (std::size_t c = 0; c < pool; ++c) {
      LabelAssignment a;
      a.order = parse_substantive_order(orders[rng.uniform_index(4)]);
      a.categories = {"cat" + std::to_string(c), "x" + std::to_string(rng.uniform_index(3)),
                      "y"};
      classes.push_back(a);
    }
    const std::size_t n = 1 + rng.uniform_index(30);
    std::vector<LabelSet> sets;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t size = 1 + rng.uniform_index(std::min<std::size_t>(3, pool));
      std::vector<std::size_t> idx(pool);
      std::iota(idx.begin(), idx.end(), 0);
      rng.shuffle(std::span<std::size_t>(idx));
      LabelSet s;
      for (std::size_t k = 0; k < size; ++k) s.push_back(classes[idx[k]]);
      sets.push_back(s);
    }

    std::set<std::string> distinct_classes;
    std::set<std::vector<std::string>> distinct_combos;
    for (const auto& s : sets) {
      std::vector<std::string> keys;
      for (const auto& a : s) {
        distinct_classes.insert(a.key());
        keys.push_back(a.key());
      }
      std::sort(keys.begin(), keys.end());
      keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
      distinct_combos.insert(keys);
    }

    const auto catalog = labels::build_class_catalog(sets);
    o.require(catalog.m() == distinct_classes.size(), "class count differs from enumeration");
    const auto beta = labels::bts_encode(sets, catalog);
    const auto enc = labels::mts_encode(sets);
    o.require(enc.catalog.p() == distinct_combos.size(), "combo count differs from enumeration");
    for (std::size_t i = 0; i < n; ++i) {
      const auto canonical = labels::canonicalize(sets[i]);
      const std::vector<double> scores(beta[i].begin(), beta[i].end());
      o.require(labels::canonicalize(labels::bts_decode(scores, catalog)) == canonical,
                "bts round trip");
      o.require(labels::mts_decode(enc.alpha[i], enc.catalog) == canonical, "mts round trip");
      LabelSet permuted = sets[i];
      rng.shuffle(std::span<LabelAssignment>(permuted));
      o.require(labels::canonicalize(permuted) == canonical, "canonicalize not permutation invariant");
      o.require(labels::mts_alpha({permuted}, enc.catalog)[0] == enc.alpha[i],
                "permuted set changes alpha");
    }
  }
  if (o.pass) o.detail = "1000 corpora";
  return o;
}

// --------------------------------------------------------------- spearman

std::vector<long double> brute_ranks(const std::vector<double>& v) {
  std::vector<long double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t less = 0, equal = 0;
    for (double w : v) {
      less += w < v[i];
      equal += w == v[i];
    }
    r[i] = static_cast<long double>(less) + (static_cast<long double>(equal) + 1) / 2;
  }
  return r;
}

double brute_spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = brute_ranks(x), ry = brute_ranks(y);
  const long double n = static_cast<long double>(x.size());
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += rx[i], my += ry[i];
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

bool constant(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
}

Outcome criterion_spearman() {
  Outcome o;
  Rng rng(303);
  double worst = 0;
  int pairs = 0;
  while (pairs < 500) {
    const std::size_t n = 2 + rng.uniform_index(60);
    const bool ties = rng.bernoulli(0.5);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = ties ? static_cast<double>(rng.uniform_index(5)) : rng.uniform01();
      y[i] = ties ? static_cast<double>(rng.uniform_index(5)) : rng.uniform01() * 100 - 50;
    }
    if (constant(x) || constant(y)) continue;
    ++pairs;
    const double r = features::spearman(x, y);
    worst = std::max(worst, std::abs(r - brute_spearman(x, y)));
    o.require(r == features::spearman(y, x), "not symmetric");
  }
  o.require(worst <= kSpearmanTol, "max deviation " + std::to_string(worst));
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(40);
    std::vector<double> x(n), up(n), down(n);
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += 0.1 + rng.uniform01();
      x[i] = acc;
      up[i] = std::exp(acc / 10) + 3;
      down[i] = -acc * acc;
    }
    o.require(features::spearman(x, up) == 1.0, "monotone increasing not exactly 1");
    o.require(features::spearman(x, down) == -1.0, "monotone decreasing not exactly -1");
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "500 pairs, max |diff| %.3g", worst);
  if (o.pass) o.detail = buf;
  return o;
}

// ------------------------------------------------------------------ trees

Outcome criterion_trees() {
  Outcome o;
  Rng rng(404);
  const std::size_t n = 600;
  std::vector<double> X(2 * n);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = rng.uniform01() * 10, b = rng.uniform01() * 10;
    X[i] = a;
    X[n + i] = b;
    const double s = 2 * a - b;
    y[i] = s < 0 ? 0 : (s < 8 ? 1 : 2);
  }
  const DataView view{X.data(), n, 2};
  for (auto crit : {trees::Criterion::kGini, trees::Criterion::kEntropy}) {
    trees::Hyperparams hp;
    hp.criterion = crit;
    const auto tree = trees::fit_tree(view, y, 3, hp);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::vector<double> row = {X[i], X[n + i]};
      const auto p = tree.proba(tree.apply(row));
      correct += static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin()) == y[i];
    }
    o.require(correct == n, "training accuracy below 100%");
  }
  using V = std::vector<double>;
  o.require(trees::gini(V{5, 0, 0}) == 0.0 && trees::gini(V{3, 3}) == 0.5 &&
                trees::gini(V{2, 1, 1}) == 0.625,
            "gini spot values");
  o.require(trees::entropy(V{0, 5}) == 0.0 && trees::entropy(V{3, 3}) == 1.0 &&
                trees::entropy(V{2, 1, 1}) == 1.5,
            "entropy spot values");

  std::vector<LabelSet> sets;
  for (int c : y) {
    LabelAssignment a;
    a.order = static_cast<SubstantiveOrder>(c);
    a.categories = {"a", "b", "c"};
    sets.push_back({a});
  }
  const auto classes = labels::build_class_catalog(sets);
  const auto combos = labels::mts_encode(sets).catalog;
  std::vector<labels::IndexSet> targets;
  for (const auto& s : sets) targets.push_back(classes.indices(s));
  trees::Hyperparams hp;
  hp.n_estimators = 25;
  hp.seed = 5;
  for (auto v : {trees::Variant::kRF, trees::Variant::kEETC, trees::Variant::kETC,
                 trees::Variant::kDT}) {
    for (auto s : {trees::Strategy::kMTS, trees::Strategy::kBTS}) {
      const auto a = trees::serialize(
          trees::fit_ensemble(view, {"a", "b"}, targets, classes, combos, hp, v, s));
      const auto b = trees::serialize(
          trees::fit_ensemble(view, {"a", "b"}, targets, classes, combos, hp, v, s));
      o.require(a == b, "serialized models differ for the same seed");
    }
  }
  if (o.pass) o.detail = "100% training accuracy, spot values exact, byte-identical refits";
  return o;
}

// ---------------------------------------------------------- faithfulness

Outcome criterion_faithfulness() {
  Outcome o;
  synth::SynthConfig sc;
  sc.n_docs = 500;
  sc.seed = 55;
  const auto corpus = pipeline::prepare_corpus(synth::generate_corpus(sc), lexica(), 0.9);
  pipeline::PipelineConfig config;
  config.hyperparams = {{"n_estimators", 50}};
  std::vector<std::size_t> rows(corpus.docs.size());
  std::iota(rows.begin(), rows.end(), 0);
  const auto fitted = pipeline::fit_pipeline(corpus, rows, config);
  const auto& model = fitted.model;
  o.require(model.forests.size() == 1 && model.forests[0].trees.size() == 50,
            "expected a single 50-tree forest");
  if (!o.pass) return o;
  const auto X = fitted.featurize(corpus.docs);

  std::vector<std::size_t> sample(corpus.docs.size());
  std::iota(sample.begin(), sample.end(), 0);
  Rng rng(505);
  rng.shuffle(std::span<std::size_t>(sample));
  sample.resize(100);

  const auto t0 = Clock::now();
  const auto& forest = model.forests[0];
  for (std::size_t r : sample) {
    const auto row = X.row(r);
    std::vector<double> mean(forest.n_classes, 0.0);
    for (const auto& tree : forest.trees) {
      const auto path = explain::extract_path(tree, row, model.feature_names);
      int node = 0;
      for (const auto& step : path) {
        const bool less = step.value <= step.threshold;
        if (less != (step.direction == explain::Direction::kLess) ||
            step.column != tree.feature[node] || step.threshold != tree.threshold[node] ||
            step.value != row[step.column]) {
          o.require(false, "path step disagrees with the tree");
        }
        node = less ? tree.left[node] : tree.right[node];
      }
      o.require(tree.is_leaf(node), "replayed path stops before a leaf");
      o.require(node == tree.apply(row), "replayed leaf differs from the tree's leaf");
      const auto p = tree.proba(node);
      for (std::size_t c = 0; c < p.size(); ++c) mean[c] += p[c];
    }
    for (double& v : mean) v /= static_cast<double>(forest.trees.size());
    const auto best =
        static_cast<std::size_t>(std::max_element(mean.begin(), mean.end()) - mean.begin());
    explain::PerturbationParams params;
    params.n_samples = 100;
    const auto e = explain::explain(model, row, corpus.docs[r].id, corpus.docs[r].entities,
                                    params);
    o.require(e.predicted == labels::mts_decode(static_cast<int>(best) + 1, model.combos),
              "reported decision differs from the replayed argmax");
    o.require(e.predicted == model.predict(row), "reported decision differs from predict");
    o.require(e.confidence == static_cast<int>(std::lround(100 * mean[best])),
              "confidence differs from the rounded mean leaf probability");
  }
  const double secs = seconds_since(t0);
  o.require(secs < kFaithfulnessBudgetSeconds, "took " + std::to_string(secs) + " s");
  char buf[64];
  std::snprintf(buf, sizeof buf, "100 documents x 50 trees, %.2f s", secs);
  if (o.pass) o.detail = buf;
  return o;
}

// -------------------------------------------------------------- benchmark

Outcome criterion_benchmark() {
  Outcome o;
  const auto t0 = Clock::now();
  const synth::SynthConfig sc;  // 2000 docs, 20% noise
  const auto raw = synth::generate_corpus(sc);
  const auto stats = corpus_stats(raw);
  o.require(raw.n() == 2000, "corpus size");
  o.require(std::abs(stats.label_cardinality - kCardinalityTarget) <= kCardinalityTol,
            "label cardinality " + std::to_string(stats.label_cardinality));
  o.require(sc.noise == 0.2, "noise share");
  const auto corpus = pipeline::prepare_corpus(raw, lexica(), 0.9);
  o.require(corpus.combos.p() == 8, "MTS class count " + std::to_string(corpus.combos.p()));

  pipeline::PipelineConfig config;
  config.folds = 10;
  const auto hp = pipeline::effective_hyperparams(config);
  o.require(hp.criterion == trees::Criterion::kGini && hp.max_depth == 100 &&
                hp.min_samples_leaf == 10 && hp.min_samples_split == 2 &&
                hp.n_estimators == 200,
            "preset differs from the expected RF-MTS settings");
  const auto report = evaluation::cross_validate(corpus, config);
  const double secs = seconds_since(t0);
  const auto& m = report.mean;
  o.require(m.averaged.micro_precision >= kMinMicroPrecision,
            "micro precision " + std::to_string(m.averaged.micro_precision));
  o.require(m.hamming_loss <= kMaxHammingLoss, "hamming loss " + std::to_string(m.hamming_loss));
  o.require(secs < kBenchmarkBudgetSeconds, "took " + std::to_string(secs) + " s");
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "cardinality %.3f, micro P %.4f, HL %.4f, exact match %.4f, %.1f s",
                stats.label_cardinality, m.averaged.micro_precision, m.hamming_loss,
                m.exact_match, secs);
  if (o.pass) o.detail = buf;
  return o;
}

// ------------------------------------------------------------ grid search

Outcome criterion_grid() {
  Outcome o;
  synth::SynthConfig sc;
  sc.n_docs = 200;
  sc.seed = 77;
  sc.noise = 0.6;
  const auto corpus = pipeline::prepare_corpus(synth::generate_corpus(sc), lexica(), 0.9);
  pipeline::PipelineConfig config;
  config.folds = 3;
  config.hyperparams = {{"n_estimators", 20}};
  config.grid = {{"vectorizer.max_df", {0.3, 0.8}}, {"hyperparams.max_depth", {2, 100}}};
  const auto result = evaluation::grid_search(corpus, config);

  struct Manual {
    double score;
    std::size_t index;
  };
  std::vector<Manual> manual;
  std::size_t index = 0;
  for (const auto& df : config.grid[0].values) {
    for (const auto& depth : config.grid[1].values) {
      auto c = pipeline::with_field(config, "vectorizer.max_df", df);
      c = pipeline::with_field(c, "hyperparams.max_depth", depth);
      const auto m = evaluation::cross_validate(corpus, c).mean;
      manual.push_back({evaluation::score_of(m, config.scoring), index++});
    }
  }
  std::stable_sort(manual.begin(), manual.end(),
                   [](const Manual& a, const Manual& b) { return a.score > b.score; });
  std::vector<std::size_t> returned(result.points.size());
  std::iota(returned.begin(), returned.end(), 0);
  std::stable_sort(returned.begin(), returned.end(), [&](std::size_t a, std::size_t b) {
    return result.points[a].score > result.points[b].score;
  });
  o.require(result.points.size() == 4, "expected 4 grid points");
  for (std::size_t k = 0; k < manual.size() && k < returned.size(); ++k) {
    o.require(manual[k].index == returned[k], "ranking differs");
    o.require(manual[k].score == result.points[returned[k]].score, "scores differ");
  }
  o.require(result.best == manual.front().index, "best combination differs");
  char buf[96];
  std::snprintf(buf, sizeof buf, "best point %zu, score %.4f", result.best,
                result.points.empty() ? 0.0 : result.points[result.best].score);
  if (o.pass) o.detail = buf;
  return o;
}

// ------------------------------------------------------------- anonymiser

bool contains_word(const std::string& text, const std::string& word) {
  const auto t = utf8::decode(text);
  const auto w = utf8::decode(word);
  for (std::size_t p = t.find(w); p != std::u32string::npos; p = t.find(w, p + 1)) {
    const bool left = p == 0 || !utf8::is_word_char(t[p - 1]);
    const bool right = p + w.size() == t.size() || !utf8::is_word_char(t[p + w.size()]);
    if (left && right) return true;
  }
  return false;
}

Outcome criterion_anonymiser() {
  Outcome o;
  const auto dir = default_lexica_dir();
  const auto first = io::read_lines(dir / "first_names.txt");
  const auto last = io::read_lines(dir / "surnames.txt");
  const char* titles[] = {"D.", "Dña.", "Don", "Sr. D.", "Ilmo. Sr. D."};
  const char* cues[] = {"el Magistrado", "la Magistrada", "el Letrado", "el Procurador",
                        "la Procuradora", "el Juez"};
  const char* companies[] = {"Construcciones Levante, S.L.", "Transportes Norte, S.A.",
                             "Inversiones Atlántico, S.L.U."};
  Rng rng(808);
  auto pick = [&](const auto& v) -> const std::string& { return v[rng.uniform_index(v.size())]; };
  auto name = [&] { return pick(first) + " " + pick(last) + " " + pick(last); };

  std::set<std::string> used;
  for (int i = 0; i < 200; ++i) {
    std::string text;
    const int sentences = 1 + static_cast<int>(rng.uniform_index(4));
    for (int s = 0; s < sentences; ++s) {
      switch (rng.uniform_index(4)) {
        case 0:
          text += std::string(cues[rng.uniform_index(6)]) + " " + titles[rng.uniform_index(5)] +
                  " " + name() + " dictó resolución. ";
          break;
        case 1:
          text += "Comparece " + name() + " en su propio nombre. ";
          break;
        case 2:
          text += std::string("Demanda interpuesta por ") + companies[rng.uniform_index(3)] +
                  " frente a Dña. " + name() + ". ";
          break;
        default:
          text += "Así lo acuerda su señoría en la fecha indicada. ";
      }
    }
    const auto once = anon::anonymize(text, lexica().anon).text;
    const auto twice = anon::anonymize(once, lexica().anon).text;
    o.require(once == twice, "not idempotent on: " + text);
    for (const auto& n : first) {
      o.require(!contains_word(once, n), "name '" + n + "' survives in: " + once);
    }
    for (const auto& n : last) {
      o.require(!contains_word(once, n), "name '" + n + "' survives in: " + once);
    }
  }
  const double j = anon::jaro("martha", "marhta");
  o.require(std::abs(j - kJaroExpected) <= kJaroTol, "jaro " + std::to_string(j));
  if (o.pass) o.detail = "200 texts, jaro(martha, marhta) = " + std::to_string(j);
  return o;
}

// --------------------------------------------------------------- entities

Outcome criterion_entities() {
  Outcome o;
  Rng rng(909);
  for (int i = 0; i < 1000; ++i) {
    std::string gin;
    for (int k = 0; k < 19; ++k) gin += static_cast<char>('0' + rng.uniform_index(10));
    const auto g = entities::parse_gin(gin);
    o.require(g.str() == gin, "round trip failed for " + gin);
    o.require(g.province + g.court_code + g.jurisdiction_digit + g.year + g.sequence == gin,
              "field split failed for " + gin);
  }
  Judgement doc;
  doc.id = "10";
  doc.raw_text =
      "TRIBUNAL SUPERIOR DE JUSTICIA DE GALICIA\n"
      "Sala de lo Social\n"
      "NIG: 36057 44 4 2019 0001234\n"
      "RECURSO DE SUPLICACIÓN 123/2019\n\n"
      "S E N T E N C I A\n\n"
      "ANTECEDENTES DE HECHO\n\nPRIMERO.- Se presentó demanda.\n\n"
      "FUNDAMENTOS DE DERECHO\n\nPRIMERO.- Conforme al Estatuto de los Trabajadores.\n\n"
      "FALLAMOS\n\nQue debemos desestimar y desestimamos el recurso de suplicación.\n";
  const auto values = entities::display_values(entities::extract_entities(doc, lexica().entities));
  const std::array<std::string, 7> expected = {
      "recurso de suplicación", "Tribunal Superior de Justicia", "desestimatorio",
      "sustantivo", "segunda", "social", "sentencia"};
  for (std::size_t f = 0; f < 7; ++f) {
    o.require(values[f] == expected[f], std::string(entities::kEntityFieldNames[f]) + " = '" +
                                            values[f] + "'");
  }
  if (o.pass) o.detail = "1000 identifiers, septuple reproduced";
  return o;
}

// -------------------------------------------------------------- rendering

Outcome criterion_rendering() {
  Outcome o;
  const std::string expected =
      "For sample 10 the features' values and model decision are:\n"
      "\n"
      "- Case type: recurso de suplicación\n"
      "- Court: Tribunal Superior de Justicia\n"
      "- Decision: desestimatorio\n"
      "- Decision type: sustantivo\n"
      "- Instance type: segunda\n"
      "- Jurisdiction: social\n"
      "- Resolution type: sentencia\n"
      "\n"
      "- Substantive order: social\n"
      "- Law categories: derecho del trabajo, derecho de la contratacion laboral y derecho "
      "relativo al contrato de trabajo\n"
      "\n"
      "This decision has a confidence of 88\n"
      "\n"
      "The most representative terms (ngrams) and their relevance are:\n"
      "- Estatuto Trabajadores -- 0.076\n"
      "- recurso suplicación -- 0.070\n"
      "- Jurisdicción Social -- 0.067\n"
      "- suplicación -- 0.064\n"
      "- trabajadores -- 0.051\n"
      "- Estatuto -- 0.033\n";
  explain::Explanation e;
  e.id = "10";
  e.fields = {"recurso de suplicación", "Tribunal Superior de Justicia", "desestimatorio",
              "sustantivo", "segunda", "social", "sentencia"};
  LabelAssignment a;
  a.order = SubstantiveOrder::kSocial;
  a.categories = {"derecho del trabajo", "derecho de la contratacion laboral",
                  "derecho relativo al contrato de trabajo"};
  e.predicted = {a};
  e.confidence = 88;
  const std::pair<const char*, double> terms[] = {
      {"Estatuto Trabajadores", 0.076}, {"recurso suplicación", 0.070},
      {"Jurisdicción Social", 0.067},   {"suplicación", 0.064},
      {"trabajadores", 0.051},          {"Estatuto", 0.033}};
  for (const auto& [t, r] : terms) e.top_terms.push_back({t, r, r});
  const auto got = explain::render_explanation(e);
  o.require(got == expected, "rendered bytes differ");
  if (o.pass) o.detail = std::to_string(got.size()) + " bytes identical";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "metric oracle", criterion_metrics},
      {2, "label transform round trips", criterion_transforms},
      {3, "spearman oracle", criterion_spearman},
      {4, "tree correctness", criterion_trees},
      {5, "explanation faithfulness", criterion_faithfulness},
      {6, "synthetic benchmark", criterion_benchmark},
      {7, "grid search oracle", criterion_grid},
      {8, "anonymiser", criterion_anonymiser},
      {9, "entity detection", criterion_entities},
      {10, "rendering", criterion_rendering},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.pass;
    std::printf("criterion %2d %-28s %s  %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
