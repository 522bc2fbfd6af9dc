#include "lexplain/explain.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>

#include "lexplain/error.h"
#include "lexplain/rng.h"

namespace lexplain::explain {

bool is_textual(std::string_view column_name) {
  return !column_name.starts_with(kCategoricalPrefix);
}

std::vector<PathStep> extract_path(const trees::Tree& tree, std::span<const double> row,
                                   const std::vector<std::string>& names) {
  const int n_nodes = static_cast<int>(tree.node_count());
  if (n_nodes == 0) throw DataError("cannot walk an empty tree");
  if (row.size() < static_cast<std::size_t>(tree.n_features)) {
    throw DataError("row is shorter than the tree's feature count");
  }
  std::vector<PathStep> path;
  int node = 0;
  for (int steps = 0; !tree.is_leaf(node); ++steps) {
    if (steps >= n_nodes) throw DataError("tree has a cycle");
    const int f = tree.feature[node];
    if (f >= tree.n_features || static_cast<std::size_t>(f) >= names.size()) {
      throw DataError("split feature " + std::to_string(f) + " out of range");
    }
    PathStep step;
    step.feature = names[f];
    step.column = f;
    step.value = row[f];
    step.threshold = tree.threshold[node];
    step.textual = is_textual(step.feature);
    step.direction = step.value <= step.threshold ? Direction::kLess : Direction::kMore;
    path.push_back(step);
    const int next = step.direction == Direction::kLess ? tree.left[node] : tree.right[node];
    if (next <= 0 || next >= n_nodes) throw DataError("tree node has a missing child");
    node = next;
  }
  return path;
}

std::vector<std::vector<PathStep>> extract_paths(const trees::Forest& forest,
                                                 std::span<const double> row,
                                                 const std::vector<std::string>& names) {
  std::vector<std::vector<PathStep>> out;
  out.reserve(forest.trees.size());
  for (const auto& tree : forest.trees) out.push_back(extract_path(tree, row, names));
  return out;
}

std::vector<TermCount> aggregate_terms(const std::vector<std::vector<PathStep>>& paths) {
  std::map<std::string, int> counts;
  for (const auto& path : paths) {
    for (const auto& step : path) {
      if (step.textual) ++counts[step.feature];
    }
  }
  std::vector<TermCount> out;
  for (const auto& [term, n] : counts) out.push_back({term, n});
  std::stable_sort(out.begin(), out.end(),
                   [](const TermCount& a, const TermCount& b) { return a.count > b.count; });
  return out;
}

std::map<std::string, double> perturbation_relevance(const ScoreFn& score,
                                                     std::span<const double> row,
                                                     std::span<const std::size_t> columns,
                                                     const std::vector<std::string>& names,
                                                     const PerturbationParams& params) {
  if (params.n_samples < 10) throw ConfigError("perturbation needs at least 10 samples");
  std::vector<std::size_t> active;
  for (std::size_t c : columns) {
    if (c >= row.size() || c >= names.size()) throw DataError("perturbed column out of range");
    if (row[c] != 0.0) active.push_back(c);
  }
  if (active.empty()) return {};

  const auto d = static_cast<Eigen::Index>(active.size());
  const auto n = static_cast<Eigen::Index>(params.n_samples);
  const double sigma = params.kernel_width_factor * std::sqrt(static_cast<double>(d));
  Eigen::MatrixXd A(n, d + 1);
  Eigen::VectorXd b(n);
  Rng rng(params.seed);
  std::vector<double> copy(row.begin(), row.end());
  for (Eigen::Index s = 0; s < n; ++s) {
    int zeroed = 0;
    A(s, 0) = 1.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      const bool drop = s > 0 && rng.bernoulli(params.zero_probability);
      copy[active[j]] = drop ? 0.0 : row[active[j]];
      A(s, j + 1) = drop ? 0.0 : 1.0;
      zeroed += drop ? 1 : 0;
    }
    const double h = static_cast<double>(zeroed);
    const double w = std::sqrt(std::exp(-(h * h) / (sigma * sigma)));
    A.row(s) *= w;
    b(s) = w * score(copy);
  }
  const Eigen::VectorXd coef = A.completeOrthogonalDecomposition().solve(b);
  std::map<std::string, double> out;
  for (Eigen::Index j = 0; j < d; ++j) out[names[active[j]]] = coef(j + 1);
  return out;
}

std::map<std::string, double> perturbation_relevance(const trees::EnsembleModel& model,
                                                     std::span<const double> row,
                                                     std::size_t output,
                                                     const PerturbationParams& params) {
  std::vector<std::size_t> textual;
  for (std::size_t c = 0; c < model.feature_names.size(); ++c) {
    if (is_textual(model.feature_names[c])) textual.push_back(c);
  }
  return perturbation_relevance(
      [&](std::span<const double> r) { return model.predict_proba(r).at(output); }, row,
      textual, model.feature_names, params);
}

std::vector<TermRelevance> select_top_terms(const std::vector<TermCount>& frequency_ordered,
                                            const std::map<std::string, double>& relevances) {
  std::vector<TermRelevance> out;
  for (const auto& tc : frequency_ordered) {
    if (out.size() == kMaxTopTerms) break;
    const auto it = relevances.find(tc.term);
    if (it == relevances.end()) continue;
    out.push_back({tc.term, std::abs(it->second), it->second});
  }
  std::stable_sort(out.begin(), out.end(), [](const TermRelevance& a, const TermRelevance& b) {
    return a.relevance > b.relevance;
  });
  return out;
}

std::size_t explained_output(const trees::EnsembleModel& model, std::span<const double> row) {
  const auto p = model.predict_proba(row);
  if (p.empty()) throw DataError("model has no outputs");
  return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

int confidence(const trees::EnsembleModel& model, std::span<const double> row) {
  const auto p = model.predict_proba(row);
  return static_cast<int>(std::lround(100.0 * p.at(explained_output(model, row))));
}

Explanation explain(const trees::EnsembleModel& model, std::span<const double> row,
                    const std::string& id, const entities::EntityRecord& record,
                    const PerturbationParams& params) {
  Explanation e;
  e.id = id;
  e.fields = entities::display_values(record);
  e.predicted = model.predict(row);
  const std::size_t output = explained_output(model, row);
  e.confidence = confidence(model, row);
  const auto& forest =
      model.strategy == trees::Strategy::kMTS ? model.forests.at(0) : model.forests.at(output);
  e.paths = extract_paths(forest, row, model.feature_names);
  e.top_terms = select_top_terms(aggregate_terms(e.paths),
                                 perturbation_relevance(model, row, output, params));
  return e;
}

const std::string_view kDefaultTemplate =
    "For sample {id} the features' values and model decision are:\n"
    "\n"
    "- Case type: {case_type}\n"
    "- Court: {court}\n"
    "- Decision: {decision}\n"
    "- Decision type: {decision_type}\n"
    "- Instance type: {instance_type}\n"
    "- Jurisdiction: {jurisdiction}\n"
    "- Resolution type: {resolution_type}\n"
    "\n"
    "- Substantive order: {order}\n"
    "- Law categories: {cat1}, {cat2} y {cat3}\n"
    "\n"
    "This decision has a confidence of {pct}\n"
    "\n"
    "The most representative terms (ngrams) and their relevance are:\n"
    "- {term} -- {relevance:.3f}\n";

namespace {

enum class LineKind { kPlain, kLabel, kTerm };

struct Piece {
  std::string literal;  // used when name is empty
  std::string name;
  int decimals = 3;
};

struct Line {
  std::vector<Piece> pieces;
  LineKind kind = LineKind::kPlain;
};

std::optional<std::size_t> field_index(std::string_view name) {
  for (std::size_t f = 0; f < entities::kEntityFieldNames.size(); ++f) {
    if (entities::kEntityFieldNames[f] == name) return f;
  }
  return std::nullopt;
}

Line parse_line(std::string_view text) {
  Line line;
  std::string literal;
  auto flush = [&] {
    if (!literal.empty()) line.pieces.push_back({literal, "", 0});
    literal.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '{' && i + 1 < text.size() && text[i + 1] == '{') {
      literal += '{';
      ++i;
      continue;
    }
    if (c == '}' && i + 1 < text.size() && text[i + 1] == '}') {
      literal += '}';
      ++i;
      continue;
    }
    if (c != '{') {
      literal += c;
      continue;
    }
    const auto close = text.find('}', i);
    if (close == std::string_view::npos) {
      throw ConfigError("template placeholder at '" + std::string(text.substr(i)) +
                        "' is not closed");
    }
    std::string_view body = text.substr(i + 1, close - i - 1);
    Piece p;
    const auto colon = body.find(':');
    p.name = std::string(body.substr(0, colon));
    if (colon != std::string_view::npos) {
      const auto spec = body.substr(colon + 1);
      if (p.name != "relevance" || spec.size() < 3 || spec.front() != '.' ||
          spec.back() != 'f' || spec.size() > 4 || spec[1] < '0' || spec[1] > '9') {
        throw ConfigError("template placeholder '{" + std::string(body) +
                          "}' has an unsupported format");
      }
      p.decimals = spec[1] - '0';
    }
    LineKind kind = LineKind::kPlain;
    if (p.name == "order" || p.name == "cat1" || p.name == "cat2" || p.name == "cat3") {
      kind = LineKind::kLabel;
    } else if (p.name == "term" || p.name == "relevance") {
      kind = LineKind::kTerm;
    } else if (p.name != "id" && p.name != "pct" && !field_index(p.name)) {
      throw ConfigError("template placeholder '{" + p.name + "}' is unknown");
    }
    if (kind != LineKind::kPlain) {
      if (line.kind != LineKind::kPlain && line.kind != kind) {
        throw ConfigError("template line mixes label and term placeholders");
      }
      line.kind = kind;
    }
    flush();
    line.pieces.push_back(std::move(p));
    i = close;
  }
  flush();
  return line;
}

std::string fill(const Line& line, const Explanation& e, const LabelAssignment* label,
                 const TermRelevance* term) {
  std::string out;
  for (const auto& p : line.pieces) {
    if (p.name.empty()) {
      out += p.literal;
    } else if (p.name == "id") {
      out += e.id;
    } else if (p.name == "pct") {
      out += std::to_string(e.confidence);
    } else if (p.name == "order") {
      out += to_string(label->order);
    } else if (p.name == "cat1" || p.name == "cat2" || p.name == "cat3") {
      out += label->categories[static_cast<std::size_t>(p.name[3] - '1')];
    } else if (p.name == "term") {
      out += term->term;
    } else if (p.name == "relevance") {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.*f", p.decimals, term->relevance);
      out += buf;
    } else {
      out += e.fields[*field_index(p.name)];
    }
  }
  return out;
}

}  // namespace

std::string render_explanation(const Explanation& e, std::string_view tmpl) {
  std::vector<Line> lines;
  std::size_t start = 0;
  while (start <= tmpl.size()) {
    const auto end = tmpl.find('\n', start);
    const auto stop = end == std::string_view::npos ? tmpl.size() : end;
    lines.push_back(parse_line(tmpl.substr(start, stop - start)));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }

  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < lines.size()) {
    const LineKind kind = lines[i].kind;
    std::size_t j = i + 1;
    if (kind != LineKind::kPlain) {
      while (j < lines.size() && lines[j].kind == kind) ++j;
    }
    if (kind == LineKind::kPlain) {
      out.push_back(fill(lines[i], e, nullptr, nullptr));
    } else if (kind == LineKind::kLabel) {
      for (std::size_t a = 0; a < e.predicted.size(); ++a) {
        if (a > 0) out.emplace_back();
        for (std::size_t k = i; k < j; ++k) out.push_back(fill(lines[k], e, &e.predicted[a], nullptr));
      }
    } else {
      for (const auto& t : e.top_terms) {
        for (std::size_t k = i; k < j; ++k) out.push_back(fill(lines[k], e, nullptr, &t));
      }
    }
    i = j;
  }
  while (!out.empty() && out.back().empty()) out.pop_back();
  std::string text;
  for (const auto& l : out) {
    text += l;
    text += '\n';
  }
  return text;
}

std::vector<std::string> class_labels(const trees::EnsembleModel& model, std::size_t forest) {
  if (model.strategy == trees::Strategy::kBTS) {
    const std::string name = model.classes.at(forest).display();
    return {"not " + name, name};
  }
  std::vector<std::string> out;
  for (const auto& combo : model.combos.combos()) {
    std::string caption;
    for (const auto& a : combo) {
      if (!caption.empty()) caption += " + ";
      caption += a.display();
    }
    out.push_back(caption);
  }
  return out;
}

namespace {

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string export_tree_graph(const trees::Tree& tree, int max_depth,
                              const std::vector<std::string>& names,
                              const std::vector<std::string>& class_labels) {
  std::string out = "digraph Tree {\nnode [shape=box, fontname=\"helvetica\"] ;\n";
  out += "edge [fontname=\"helvetica\"] ;\n";
  if (tree.node_count() == 0) return out + "}\n";
  std::vector<std::pair<int, int>> stack = {{0, 0}};
  std::vector<bool> visited(tree.node_count(), false);
  while (!stack.empty()) {
    const auto [node, depth] = stack.back();
    stack.pop_back();
    if (node < 0 || static_cast<std::size_t>(node) >= tree.node_count() || visited[node]) {
      throw DataError("tree structure is malformed");
    }
    visited[node] = true;
    std::string label;
    const bool split = !tree.is_leaf(node);
    if (split && depth >= max_depth) {
      label = "…";
    } else if (split) {
      const int f = tree.feature[node];
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3f", tree.threshold[node]);
      label = (static_cast<std::size_t>(f) < names.size() ? names[f] : "x" + std::to_string(f)) +
              " ≤ " + buf;
    } else {
      const auto p = tree.proba(node);
      const auto best =
          static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
      label = best < class_labels.size() ? class_labels[best] : "class " + std::to_string(best);
    }
    out += std::to_string(node) + " [label=\"" + dot_escape(label) +
           "\\nsamples = " + std::to_string(tree.n_samples[node]) + "\"] ;\n";
    if (split && depth < max_depth) {
      for (int child : {tree.left[node], tree.right[node]}) {
        out += std::to_string(node) + " -> " + std::to_string(child) + " ;\n";
      }
      stack.push_back({tree.right[node], depth + 1});
      stack.push_back({tree.left[node], depth + 1});
    }
  }
  return out + "}\n";
}

}  // namespace lexplain::explain
