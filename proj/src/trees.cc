#include "lexplain/trees.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "lexplain/error.h"
#include "lexplain/rng.h"

namespace lexplain::trees {

namespace {

using nlohmann::json;

// Values closer than this are treated as equal when placing thresholds.
constexpr double kFeatureTolerance = 1e-7;
constexpr double kPureImpurity = 1e-12;

double impurity_of(Criterion criterion, const double* w, int k, double total) {
  if (total <= 0.0) return 0.0;
  double acc = 0.0;
  if (criterion == Criterion::kGini) {
    for (int c = 0; c < k; ++c) {
      const double p = w[c] / total;
      acc += p * p;
    }
    return std::max(0.0, 1.0 - acc);
  }
  for (int c = 0; c < k; ++c) {
    if (w[c] <= 0.0) continue;
    const double p = w[c] / total;
    acc -= p * std::log2(p);
  }
  return std::max(0.0, acc);
}

double checked_total(std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts) {
    if (c < 0.0) throw DataError("class counts must be non-negative");
    total += c;
  }
  if (total <= 0.0) throw DataError("class counts sum to zero");
  return total;
}

// True when candidate (imp, f, t) beats the current best.
bool better(double imp, int f, double t, const SplitCandidate& best) {
  if (best.feature < 0) return true;
  const double eps = 1e-9 * std::max(1.0, std::abs(best.improvement));
  if (imp > best.improvement + eps) return true;
  if (imp < best.improvement - eps) return false;
  if (f != best.feature) return f < best.feature;
  return t < best.threshold;
}

struct Entry {
  double x;
  int row;
};

class Builder {
 public:
  Builder(DataView X, std::span<const int> y, int n_classes,
          const Hyperparams& hp, Splitter splitter, int max_features,
          std::vector<int> multiplicity, std::vector<double> class_weight,
          std::uint64_t seed)
      : X_(X),
        y_(y),
        k_(n_classes),
        hp_(hp),
        splitter_(splitter),
        max_features_(max_features),
        mult_(std::move(multiplicity)),
        cw_(std::move(class_weight)),
        rng_(seed) {
    for (std::size_t r = 0; r < X_.rows; ++r) {
      if (mult_[r] > 0) rows_.push_back(static_cast<int>(r));
    }
    features_.resize(X_.cols);
    std::iota(features_.begin(), features_.end(), 0);
    node_w_.assign(k_, 0.0);
    left_w_.assign(k_, 0.0);
    right_w_.assign(k_, 0.0);
    zero_w_.assign(k_, 0.0);
  }

  Tree build() {
    if (rows_.empty()) throw DataError("cannot fit a tree on zero rows");
    tree_.n_classes = k_;
    tree_.n_features = static_cast<int>(X_.cols);
    grow(0, rows_.size(), 0);
    return std::move(tree_);
  }

  // Root split with an explicit candidate list; no tree is built.
  std::optional<SplitCandidate> root_split(std::span<const int> features) {
    node_stats(0, rows_.size());
    if (std::count_if(node_w_.begin(), node_w_.end(), [](double w) { return w > 0; }) <= 1) {
      return std::nullopt;
    }
    std::size_t next = 0;
    return search(0, rows_.size(), [&]() -> int {
      return next < features.size() ? features[next++] : -1;
    }, features.size());
  }

 private:
  double weight(int row) const { return mult_[row] * cw_[y_[row]]; }

  // Fills node_w_, node_total_; returns multiplicity sum.
  int node_stats(std::size_t begin, std::size_t end) {
    std::fill(node_w_.begin(), node_w_.end(), 0.0);
    int n = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const int r = rows_[i];
      node_w_[y_[r]] += weight(r);
      n += mult_[r];
    }
    node_total_ = std::accumulate(node_w_.begin(), node_w_.end(), 0.0);
    return n;
  }

  int add_node(std::size_t begin, std::size_t end, int depth) {
    const int n = node_stats(begin, end);
    const int id = static_cast<int>(tree_.feature.size());
    tree_.feature.push_back(-1);
    tree_.threshold.push_back(0.0);
    tree_.left.push_back(-1);
    tree_.right.push_back(-1);
    tree_.depth.push_back(depth);
    tree_.impurity.push_back(
        impurity_of(hp_.criterion, node_w_.data(), k_, node_total_));
    tree_.n_samples.push_back(n);
    tree_.weighted_n.push_back(node_total_);
    const std::size_t base = tree_.counts.size();
    tree_.counts.resize(base + k_, 0.0);
    for (std::size_t i = begin; i < end; ++i) {
      tree_.counts[base + y_[rows_[i]]] += mult_[rows_[i]];
    }
    tree_.value.insert(tree_.value.end(), node_w_.begin(), node_w_.end());
    return id;
  }

  int grow(std::size_t begin, std::size_t end, int depth) {
    const int id = add_node(begin, end, depth);
    const auto distinct = static_cast<int>(end - begin);
    const bool depth_exhausted = hp_.max_depth && depth >= *hp_.max_depth;
    if (depth_exhausted || distinct < hp_.min_samples_split ||
        distinct < 2 * hp_.min_samples_leaf ||
        tree_.impurity[id] <= kPureImpurity) {
      return id;
    }
    // node_w_ still holds this node's statistics.
    std::size_t drawn = 0;
    const auto split = search(begin, end, [&]() -> int {
      if (drawn >= features_.size()) return -1;
      const std::size_t j =
          drawn + rng_.uniform_index(features_.size() - drawn);
      std::swap(features_[drawn], features_[j]);
      return features_[drawn++];
    }, static_cast<std::size_t>(max_features_));
    if (!split) return id;

    const auto mid_it = std::stable_partition(
        rows_.begin() + begin, rows_.begin() + end, [&](int r) {
          return X_.at(r, split->feature) <= split->threshold;
        });
    const auto mid = static_cast<std::size_t>(mid_it - rows_.begin());
    if (mid == begin || mid == end) return id;  // numerically degenerate

    tree_.feature[id] = split->feature;
    tree_.threshold[id] = split->threshold;
    const int l = grow(begin, mid, depth + 1);
    tree_.left[id] = l;
    const int r = grow(mid, end, depth + 1);
    tree_.right[id] = r;
    return id;
  }

  // Visits drawn features until `quota` have been examined and at least one
  // was non-constant in the node, or the draw is exhausted.
  template <typename Draw>
  std::optional<SplitCandidate> search(std::size_t begin, std::size_t end,
                                       Draw&& draw, std::size_t quota) {
    const double parent = impurity_of(hp_.criterion, node_w_.data(), k_, node_total_);
    SplitCandidate best;
    std::size_t visited = 0;
    std::size_t informative = 0;
    while (visited < quota || informative == 0) {
      const int f = draw();
      if (f < 0) break;
      ++visited;
      const auto col = X_.column(static_cast<std::size_t>(f));
      double lo = col[rows_[begin]];
      double hi = lo;
      for (std::size_t i = begin + 1; i < end; ++i) {
        const double v = col[rows_[i]];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi <= lo + kFeatureTolerance) continue;
      ++informative;
      if (splitter_ == Splitter::kBest) {
        scan_best(begin, end, f, col, parent, best);
      } else {
        try_random(begin, end, f, col, lo, hi, parent, best);
      }
    }
    if (best.feature < 0) return std::nullopt;
    return best;
  }

  double improvement(double parent) {
    double left_total = 0.0;
    for (int c = 0; c < k_; ++c) {
      right_w_[c] = std::max(0.0, node_w_[c] - left_w_[c]);
      left_total += left_w_[c];
    }
    const double right_total = std::max(0.0, node_total_ - left_total);
    return parent * node_total_ -
           left_total * impurity_of(hp_.criterion, left_w_.data(), k_, left_total) -
           right_total *
               impurity_of(hp_.criterion, right_w_.data(), k_, right_total);
  }

  void scan_best(std::size_t begin, std::size_t end, int f,
                 std::span<const double> col, double parent,
                 SplitCandidate& best) {
    // Zeros dominate count features, so only the non-zero values are sorted
    // and the zeros enter the scan as one block.
    entries_.clear();
    std::fill(zero_w_.begin(), zero_w_.end(), 0.0);
    int zero_rows = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const int r = rows_[i];
      const double v = col[r];
      if (v == 0.0) {
        zero_w_[y_[r]] += weight(r);
        ++zero_rows;
      } else {
        entries_.push_back({v, r});
      }
    }
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
      return a.x < b.x || (a.x == b.x && a.row < b.row);
    });
    const auto n_distinct = static_cast<int>(end - begin);
    const std::size_t zero_pos = static_cast<std::size_t>(
        std::lower_bound(entries_.begin(), entries_.end(), 0.0,
                         [](const Entry& e, double x) { return e.x < x; }) -
        entries_.begin());

    std::fill(left_w_.begin(), left_w_.end(), 0.0);
    int left_rows = 0;
    bool has_prev = false;
    double prev = 0.0;
    auto consider = [&](double next) {
      if (!has_prev || next <= prev + kFeatureTolerance) return;
      if (left_rows < hp_.min_samples_leaf ||
          n_distinct - left_rows < hp_.min_samples_leaf) {
        return;
      }
      double t = prev / 2.0 + next / 2.0;
      if (t >= next || t < prev) t = prev;
      const double imp = improvement(parent);
      if (better(imp, f, t, best)) best = {f, t, imp};
    };
    auto add_zero_block = [&]() {
      if (zero_rows == 0) return;
      consider(0.0);
      for (int c = 0; c < k_; ++c) left_w_[c] += zero_w_[c];
      left_rows += zero_rows;
      prev = 0.0;
      has_prev = true;
    };
    for (std::size_t i = 0; i <= entries_.size(); ++i) {
      if (i == zero_pos) add_zero_block();
      if (i == entries_.size()) break;
      const Entry& e = entries_[i];
      consider(e.x);
      left_w_[y_[e.row]] += weight(e.row);
      ++left_rows;
      prev = has_prev ? std::max(prev, e.x) : e.x;
      has_prev = true;
    }
  }

  void try_random(std::size_t begin, std::size_t end, int f,
                  std::span<const double> col, double lo, double hi,
                  double parent, SplitCandidate& best) {
    double t = lo + rng_.uniform01() * (hi - lo);
    if (t >= hi) t = lo;
    std::fill(left_w_.begin(), left_w_.end(), 0.0);
    int left_rows = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const int r = rows_[i];
      if (col[r] <= t) {
        left_w_[y_[r]] += weight(r);
        ++left_rows;
      }
    }
    const auto n_distinct = static_cast<int>(end - begin);
    if (left_rows < hp_.min_samples_leaf ||
        n_distinct - left_rows < hp_.min_samples_leaf) {
      return;
    }
    const double imp = improvement(parent);
    if (better(imp, f, t, best)) best = {f, t, imp};
  }

  DataView X_;
  std::span<const int> y_;
  int k_;
  const Hyperparams& hp_;
  Splitter splitter_;
  int max_features_;
  std::vector<int> mult_;
  std::vector<double> cw_;
  Rng rng_;

  std::vector<int> rows_;
  std::vector<int> features_;
  std::vector<Entry> entries_;
  std::vector<double> node_w_, left_w_, right_w_, zero_w_;
  double node_total_ = 0.0;
  Tree tree_;
};

void check_inputs(DataView X, std::span<const int> y, int n_classes) {
  if (X.rows == 0) throw DataError("cannot fit on an empty matrix");
  if (y.size() != X.rows) {
    throw DataError("label count " + std::to_string(y.size()) +
                    " does not match row count " + std::to_string(X.rows));
  }
  if (n_classes < 1) throw DataError("n_classes must be >= 1");
  for (int c : y) {
    if (c < 0 || c >= n_classes) {
      throw DataError("class label " + std::to_string(c) + " out of range");
    }
  }
}

std::vector<double> class_weights(std::span<const int> y, int n_classes,
                                  ClassWeight mode) {
  std::vector<double> w(n_classes, 1.0);
  if (mode == ClassWeight::kNone) return w;
  std::vector<double> count(n_classes, 0.0);
  for (int c : y) count[c] += 1.0;
  const auto present = std::count_if(count.begin(), count.end(),
                                     [](double c) { return c > 0.0; });
  const auto total = static_cast<double>(y.size());
  for (int c = 0; c < n_classes; ++c) {
    if (count[c] > 0.0) w[c] = total / (static_cast<double>(present) * count[c]);
  }
  return w;
}

template <typename Job>
void run_parallel(std::size_t n_jobs, int n_threads, Job&& job) {
  std::size_t workers = n_threads > 0
                            ? static_cast<std::size_t>(n_threads)
                            : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n_jobs);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n_jobs; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (std::size_t i = next++; i < n_jobs; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Trees [first, first + n) of a forest; tree t uses seed hp.seed + first + t.
Forest fit_forest_range(DataView X, std::span<const int> y, int n_classes,
                        const Hyperparams& hp, const VariantSettings& vs,
                        std::uint64_t first) {
  check_inputs(X, y, n_classes);
  const auto cw = class_weights(y, n_classes, hp.class_weight);
  Forest forest;
  forest.n_classes = n_classes;
  forest.trees.resize(static_cast<std::size_t>(vs.n_trees));
  run_parallel(forest.trees.size(), hp.n_threads, [&](std::size_t t) {
    const std::uint64_t seed = hp.seed + first + t;
    std::vector<int> mult(X.rows, 1);
    if (vs.bootstrap) {
      Rng sampler(seed);
      std::fill(mult.begin(), mult.end(), 0);
      for (std::size_t i = 0; i < X.rows; ++i) ++mult[sampler.uniform_index(X.rows)];
    }
    // The bootstrap draw and the split search use separate streams.
    Builder builder(X, y, n_classes, hp, vs.splitter, vs.max_features,
                    std::move(mult), cw, seed ^ 0x9E3779B97F4A7C15ull);
    forest.trees[t] = builder.build();
  });
  return forest;
}

json label_to_json(const LabelAssignment& label) {
  return {{"order", std::string(to_string(label.order))},
          {"categories", label.categories}};
}

LabelAssignment label_from_json(const json& j) {
  LabelAssignment label;
  label.order = parse_substantive_order(j.at("order").get<std::string>());
  const auto cats = j.at("categories").get<std::vector<std::string>>();
  if (cats.size() != 3) throw DataError("label needs 3 categories");
  std::copy(cats.begin(), cats.end(), label.categories.begin());
  return label;
}

json tree_to_json(const Tree& t) {
  return {{"n_classes", t.n_classes},   {"n_features", t.n_features},
          {"feature", t.feature},       {"threshold", t.threshold},
          {"left", t.left},             {"right", t.right},
          {"depth", t.depth},           {"impurity", t.impurity},
          {"n_samples", t.n_samples},   {"weighted_n", t.weighted_n},
          {"counts", t.counts},         {"value", t.value}};
}

Tree tree_from_json(const json& j) {
  Tree t;
  j.at("n_classes").get_to(t.n_classes);
  j.at("n_features").get_to(t.n_features);
  j.at("feature").get_to(t.feature);
  j.at("threshold").get_to(t.threshold);
  j.at("left").get_to(t.left);
  j.at("right").get_to(t.right);
  j.at("depth").get_to(t.depth);
  j.at("impurity").get_to(t.impurity);
  j.at("n_samples").get_to(t.n_samples);
  j.at("weighted_n").get_to(t.weighted_n);
  j.at("counts").get_to(t.counts);
  j.at("value").get_to(t.value);
  const std::size_t n = t.feature.size();
  if (t.threshold.size() != n || t.left.size() != n || t.right.size() != n ||
      t.depth.size() != n || t.impurity.size() != n || t.n_samples.size() != n ||
      t.weighted_n.size() != n ||
      t.counts.size() != n * static_cast<std::size_t>(t.n_classes) ||
      t.value.size() != n * static_cast<std::size_t>(t.n_classes)) {
    throw DataError("model tree arrays have inconsistent lengths");
  }
  return t;
}

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::array<std::pair<std::string_view, E>, N>& names,
             const char* what) {
  for (const auto& [name, value] : names) {
    if (s.size() == name.size() &&
        std::equal(s.begin(), s.end(), name.begin(), [](char a, char b) {
          return std::tolower(static_cast<unsigned char>(a)) ==
                 std::tolower(static_cast<unsigned char>(b));
        })) {
      return value;
    }
  }
  throw ConfigError(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

constexpr std::array<std::pair<std::string_view, Criterion>, 2> kCriteria{
    {{"gini", Criterion::kGini}, {"entropy", Criterion::kEntropy}}};
constexpr std::array<std::pair<std::string_view, Splitter>, 2> kSplitters{
    {{"best", Splitter::kBest}, {"random", Splitter::kRandom}}};
constexpr std::array<std::pair<std::string_view, ClassWeight>, 2> kWeights{
    {{"none", ClassWeight::kNone}, {"balanced", ClassWeight::kBalanced}}};
constexpr std::array<std::pair<std::string_view, Variant>, 4> kVariants{
    {{"rf", Variant::kRF}, {"eetc", Variant::kEETC}, {"etc", Variant::kETC},
     {"dt", Variant::kDT}}};
constexpr std::array<std::pair<std::string_view, Strategy>, 2> kStrategies{
    {{"bts", Strategy::kBTS}, {"mts", Strategy::kMTS}}};

template <typename E, std::size_t N>
std::string_view name_of(E value,
                         const std::array<std::pair<std::string_view, E>, N>& names) {
  for (const auto& [name, v] : names) {
    if (v == value) return name;
  }
  return "?";
}

}  // namespace

std::string_view to_string(Criterion c) { return name_of(c, kCriteria); }
std::string_view to_string(Splitter s) { return name_of(s, kSplitters); }
std::string_view to_string(ClassWeight w) { return name_of(w, kWeights); }
std::string_view to_string(Variant v) { return name_of(v, kVariants); }
std::string_view to_string(Strategy s) { return name_of(s, kStrategies); }
Criterion parse_criterion(std::string_view s) {
  return parse_enum(s, kCriteria, "criterion");
}
Splitter parse_splitter(std::string_view s) {
  return parse_enum(s, kSplitters, "splitter");
}
ClassWeight parse_class_weight(std::string_view s) {
  return parse_enum(s, kWeights, "class weight");
}
Variant parse_variant(std::string_view s) {
  return parse_enum(s, kVariants, "model");
}
Strategy parse_strategy(std::string_view s) {
  return parse_enum(s, kStrategies, "strategy");
}

void validate(const Hyperparams& hp) {
  if (hp.min_samples_split < 2) throw ConfigError("min_samples_split must be >= 2");
  if (hp.min_samples_leaf < 1) throw ConfigError("min_samples_leaf must be >= 1");
  if (hp.n_estimators < 1) throw ConfigError("n_estimators must be >= 1");
  if (hp.max_depth && *hp.max_depth < 0) throw ConfigError("max_depth must be >= 0");
  if (hp.max_features && *hp.max_features < 1) {
    throw ConfigError("max_features must be >= 1");
  }
  if (hp.n_threads < 0) throw ConfigError("n_threads must be >= 0");
}

double gini(std::span<const double> class_counts) {
  const double total = checked_total(class_counts);
  return impurity_of(Criterion::kGini, class_counts.data(),
                     static_cast<int>(class_counts.size()), total);
}

double entropy(std::span<const double> class_counts) {
  const double total = checked_total(class_counts);
  return impurity_of(Criterion::kEntropy, class_counts.data(),
                     static_cast<int>(class_counts.size()), total);
}

std::vector<double> Tree::proba(int node) const {
  std::vector<double> p(value.begin() + static_cast<std::ptrdiff_t>(node) * n_classes,
                        value.begin() + static_cast<std::ptrdiff_t>(node + 1) * n_classes);
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (total > 0.0) {
    for (double& v : p) v /= total;
  }
  return p;
}

int Tree::apply(std::span<const double> row) const {
  if (row.size() != static_cast<std::size_t>(n_features)) {
    throw DataError("row has " + std::to_string(row.size()) +
                    " columns, tree expects " + std::to_string(n_features));
  }
  if (feature.empty()) throw DataError("tree has no nodes");
  const auto n = static_cast<int>(feature.size());
  int node = 0;
  for (int steps = 0; steps <= n; ++steps) {
    if (is_leaf(node)) return node;
    const int next = row[feature[node]] <= threshold[node] ? left[node] : right[node];
    if (next <= node || next >= n) throw DataError("malformed tree: bad child index");
    node = next;
  }
  throw DataError("malformed tree: path does not terminate");
}

std::vector<double> Tree::raw_importances() const {
  std::vector<double> imp(static_cast<std::size_t>(n_features), 0.0);
  for (std::size_t i = 0; i < feature.size(); ++i) {
    if (feature[i] < 0) continue;
    const int l = left[i];
    const int r = right[i];
    imp[feature[i]] += weighted_n[i] * impurity[i] -
                       weighted_n[l] * impurity[l] - weighted_n[r] * impurity[r];
  }
  for (double& v : imp) v = std::max(0.0, v);
  return imp;
}

std::optional<SplitCandidate> find_split(DataView X, std::span<const int> y,
                                         int n_classes,
                                         std::span<const int> features,
                                         const Hyperparams& hp,
                                         std::uint64_t seed) {
  check_inputs(X, y, n_classes);
  for (int f : features) {
    if (f < 0 || static_cast<std::size_t>(f) >= X.cols) {
      throw DataError("feature index out of range");
    }
  }
  Builder builder(X, y, n_classes, hp, hp.splitter,
                  static_cast<int>(features.size()), std::vector<int>(X.rows, 1),
                  class_weights(y, n_classes, hp.class_weight), seed);
  return builder.root_split(features);
}

Tree fit_tree(DataView X, std::span<const int> y, int n_classes,
              const Hyperparams& hp) {
  validate(hp);
  check_inputs(X, y, n_classes);
  Builder builder(X, y, n_classes, hp, hp.splitter, static_cast<int>(X.cols),
                  std::vector<int>(X.rows, 1),
                  class_weights(y, n_classes, hp.class_weight), hp.seed);
  return builder.build();
}

std::vector<double> Forest::predict_proba(std::span<const double> row) const {
  std::vector<double> p(static_cast<std::size_t>(n_classes), 0.0);
  if (trees.empty()) return p;
  for (const auto& tree : trees) {
    const auto leaf = tree.proba(tree.apply(row));
    for (int c = 0; c < n_classes; ++c) p[c] += leaf[c];
  }
  for (double& v : p) v /= static_cast<double>(trees.size());
  return p;
}

std::vector<double> Forest::feature_importances() const {
  if (trees.empty()) return {};
  std::vector<double> total(static_cast<std::size_t>(trees.front().n_features), 0.0);
  for (const auto& tree : trees) {
    auto imp = tree.raw_importances();
    const double s = std::accumulate(imp.begin(), imp.end(), 0.0);
    if (s <= 0.0) continue;
    for (std::size_t f = 0; f < imp.size(); ++f) total[f] += imp[f] / s;
  }
  const double s = std::accumulate(total.begin(), total.end(), 0.0);
  if (s > 0.0) {
    for (double& v : total) v /= s;
  }
  return total;
}

VariantSettings resolve_variant(Variant variant, const Hyperparams& hp,
                                std::size_t n_features) {
  VariantSettings vs;
  const int all = static_cast<int>(std::max<std::size_t>(n_features, 1));
  const int root = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(all))));
  switch (variant) {
    case Variant::kRF:
      vs = {hp.n_estimators, true, root, Splitter::kBest};
      break;
    case Variant::kEETC:
      vs = {hp.n_estimators, false, root, Splitter::kRandom};
      break;
    case Variant::kETC:
      vs = {1, false, root, hp.splitter};
      break;
    case Variant::kDT:
      vs = {1, false, all, hp.splitter};
      break;
  }
  if (hp.bootstrap) vs.bootstrap = *hp.bootstrap;
  if (hp.max_features) vs.max_features = std::min(*hp.max_features, all);
  return vs;
}

Forest fit_forest(DataView X, std::span<const int> y, int n_classes,
                  const Hyperparams& hp, Variant variant) {
  validate(hp);
  return fit_forest_range(X, y, n_classes, hp, resolve_variant(variant, hp, X.cols), 0);
}

std::size_t EnsembleModel::tree_count() const {
  std::size_t n = 0;
  for (const auto& f : forests) n += f.trees.size();
  return n;
}

std::vector<double> EnsembleModel::predict_proba(std::span<const double> row) const {
  if (row.size() != feature_names.size()) {
    throw DataError("row has " + std::to_string(row.size()) +
                    " columns, model expects " +
                    std::to_string(feature_names.size()));
  }
  if (strategy == Strategy::kMTS) return forests.at(0).predict_proba(row);
  std::vector<double> p;
  p.reserve(forests.size());
  for (const auto& forest : forests) p.push_back(forest.predict_proba(row)[1]);
  return p;
}

labels::IndexSet EnsembleModel::predict_indices(std::span<const double> row) const {
  const auto p = predict_proba(row);
  if (strategy == Strategy::kBTS) return labels::bts_decode_indices(p, bts_threshold);
  const auto best = std::max_element(p.begin(), p.end()) - p.begin();
  return classes.indices(labels::mts_decode(static_cast<int>(best) + 1, combos));
}

LabelSet EnsembleModel::predict(std::span<const double> row) const {
  return classes.labels(predict_indices(row));
}

std::vector<double> EnsembleModel::feature_importances() const {
  std::vector<double> total(feature_names.size(), 0.0);
  for (const auto& forest : forests) {
    const auto imp = forest.feature_importances();
    for (std::size_t f = 0; f < imp.size(); ++f) total[f] += imp[f];
  }
  const double s = std::accumulate(total.begin(), total.end(), 0.0);
  if (s > 0.0) {
    for (double& v : total) v /= s;
  }
  return total;
}

EnsembleModel fit_ensemble(DataView X, const std::vector<std::string>& names,
                           const std::vector<labels::IndexSet>& targets,
                           const labels::ClassCatalog& classes,
                           const labels::MtsCatalog& combos,
                           const Hyperparams& hp, Variant variant,
                           Strategy strategy) {
  validate(hp);
  if (names.size() != X.cols) throw DataError("feature name count mismatch");
  if (targets.size() != X.rows) throw DataError("target count mismatch");
  EnsembleModel model;
  model.variant = variant;
  model.strategy = strategy;
  model.hyperparams = hp;
  model.feature_names = names;
  model.classes = classes;
  model.combos = combos;
  const VariantSettings vs = resolve_variant(variant, hp, X.cols);
  if (strategy == Strategy::kMTS) {
    std::vector<int> y;
    y.reserve(targets.size());
    for (const auto& t : targets) {
      const auto alpha = combos.find(classes.labels(t));
      if (!alpha) throw DataError("training label set missing from MTS catalog");
      y.push_back(*alpha - 1);
    }
    model.forests.push_back(
        fit_forest_range(X, y, static_cast<int>(combos.p()), hp, vs, 0));
  } else {
    std::vector<int> y(targets.size());
    for (std::size_t j = 0; j < classes.m(); ++j) {
      for (std::size_t i = 0; i < targets.size(); ++i) {
        y[i] = std::binary_search(targets[i].begin(), targets[i].end(),
                                  static_cast<int>(j))
                   ? 1
                   : 0;
      }
      model.forests.push_back(fit_forest_range(
          X, y, 2, hp, vs, static_cast<std::uint64_t>(j) * vs.n_trees));
    }
  }
  return model;
}

json to_json(const Hyperparams& hp) {
  json j = {{"class_weight", std::string(to_string(hp.class_weight))},
            {"max_depth", nullptr},
            {"min_samples_split", hp.min_samples_split},
            {"min_samples_leaf", hp.min_samples_leaf},
            {"criterion", std::string(to_string(hp.criterion))},
            {"splitter", std::string(to_string(hp.splitter))},
            {"n_estimators", hp.n_estimators},
            {"seed", hp.seed},
            {"bootstrap", nullptr},
            {"max_features", nullptr}};
  if (hp.max_depth) j["max_depth"] = *hp.max_depth;
  if (hp.bootstrap) j["bootstrap"] = *hp.bootstrap;
  if (hp.max_features) j["max_features"] = *hp.max_features;
  return j;
}

Hyperparams hyperparams_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("hyperparams must be an object");
  Hyperparams hp;
  auto field = [&](const char* name, auto fn) {
    if (!j.contains(name) || j[name].is_null()) return;
    try {
      fn(j[name]);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("hyperparams.") + name + ": " + e.what());
    }
  };
  field("class_weight", [&](const json& v) {
    hp.class_weight = parse_class_weight(v.get<std::string>());
  });
  field("max_depth", [&](const json& v) { hp.max_depth = v.get<int>(); });
  field("min_samples_split", [&](const json& v) { hp.min_samples_split = v.get<int>(); });
  field("min_samples_leaf", [&](const json& v) { hp.min_samples_leaf = v.get<int>(); });
  field("criterion", [&](const json& v) { hp.criterion = parse_criterion(v.get<std::string>()); });
  field("splitter", [&](const json& v) { hp.splitter = parse_splitter(v.get<std::string>()); });
  field("n_estimators", [&](const json& v) { hp.n_estimators = v.get<int>(); });
  field("seed", [&](const json& v) { hp.seed = v.get<std::uint64_t>(); });
  field("bootstrap", [&](const json& v) { hp.bootstrap = v.get<bool>(); });
  field("max_features", [&](const json& v) { hp.max_features = v.get<int>(); });
  field("n_threads", [&](const json& v) { hp.n_threads = v.get<int>(); });
  validate(hp);
  return hp;
}

json to_json(const EnsembleModel& model) {
  json classes = json::array();
  for (const auto& c : model.classes.classes()) classes.push_back(label_to_json(c));
  json combos = json::array();
  for (const auto& combo : model.combos.combos()) {
    combos.push_back(model.classes.indices(combo));
  }
  json forests = json::array();
  for (const auto& forest : model.forests) {
    json trees = json::array();
    for (const auto& t : forest.trees) trees.push_back(tree_to_json(t));
    forests.push_back({{"n_classes", forest.n_classes}, {"trees", std::move(trees)}});
  }
  return {{"format", "lexplain-model"},
          {"version", 1},
          {"variant", std::string(to_string(model.variant))},
          {"strategy", std::string(to_string(model.strategy))},
          {"hyperparams", to_json(model.hyperparams)},
          {"bts_threshold", model.bts_threshold},
          {"feature_names", model.feature_names},
          {"classes", std::move(classes)},
          {"combos", std::move(combos)},
          {"forests", std::move(forests)}};
}

EnsembleModel model_from_json(const json& j) {
  try {
    if (j.at("format") != "lexplain-model") throw DataError("not a model artifact");
    EnsembleModel model;
    model.variant = parse_variant(j.at("variant").get<std::string>());
    model.strategy = parse_strategy(j.at("strategy").get<std::string>());
    model.hyperparams = hyperparams_from_json(j.at("hyperparams"));
    model.bts_threshold = j.at("bts_threshold").get<double>();
    model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    std::vector<LabelAssignment> classes;
    for (const auto& c : j.at("classes")) classes.push_back(label_from_json(c));
    model.classes = labels::ClassCatalog(std::move(classes));
    std::vector<LabelSet> combos;
    for (const auto& c : j.at("combos")) {
      combos.push_back(model.classes.labels(c.get<labels::IndexSet>()));
    }
    model.combos = labels::MtsCatalog(std::move(combos));
    for (const auto& f : j.at("forests")) {
      Forest forest;
      forest.n_classes = f.at("n_classes").get<int>();
      for (const auto& t : f.at("trees")) forest.trees.push_back(tree_from_json(t));
      model.forests.push_back(std::move(forest));
    }
    return model;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model artifact: ") + e.what());
  }
}

std::string serialize(const EnsembleModel& model) { return to_json(model).dump() + "\n"; }

EnsembleModel deserialize(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model artifact: ") + e.what());
  }
  return model_from_json(j);
}

}  // namespace lexplain::trees
