#include "lexplain/metrics.h"

#include <algorithm>
#include <string>

#include "lexplain/error.h"

namespace lexplain::metrics {

namespace {

void check_shape(const SetList& L, const SetList& Z) {
  if (L.size() != Z.size()) {
    throw DataError("annotated and predicted lists differ in length (" +
                    std::to_string(L.size()) + " vs " + std::to_string(Z.size()) + ")");
  }
  if (L.empty()) throw DataError("metrics need at least one document");
}

std::size_t intersection_size(const IndexSet& a, const IndexSet& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

void check_range(const SetList& sets, std::size_t m) {
  for (const auto& s : sets) {
    for (int j : s) {
      if (j < 0 || static_cast<std::size_t>(j) >= m) {
        throw DataError("class index " + std::to_string(j) + " outside the catalog");
      }
    }
  }
}

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

double exact_match(const SetList& L, const SetList& Z) {
  check_shape(L, Z);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < L.size(); ++i) hits += L[i] == Z[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(L.size());
}

double ml_accuracy(const SetList& L, const SetList& Z) {
  check_shape(L, Z);
  double acc = 0.0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    const auto inter = intersection_size(L[i], Z[i]);
    const auto uni = L[i].size() + Z[i].size() - inter;
    if (uni == 0) throw DataError("accuracy undefined: both sets empty for a document");
    acc += static_cast<double>(inter) / static_cast<double>(uni);
  }
  return acc / static_cast<double>(L.size());
}

double ml_precision(const SetList& L, const SetList& Z) {
  check_shape(L, Z);
  double acc = 0.0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    if (Z[i].empty()) throw DataError("precision undefined: empty predicted set");
    acc += static_cast<double>(intersection_size(L[i], Z[i])) /
           static_cast<double>(Z[i].size());
  }
  return acc / static_cast<double>(L.size());
}

double ml_recall(const SetList& L, const SetList& Z) {
  check_shape(L, Z);
  double acc = 0.0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    if (L[i].empty()) throw DataError("recall undefined: empty annotated set");
    acc += static_cast<double>(intersection_size(L[i], Z[i])) /
           static_cast<double>(L[i].size());
  }
  return acc / static_cast<double>(L.size());
}

double hamming_loss(const SetList& L, const SetList& Z, std::size_t m) {
  check_shape(L, Z);
  if (m == 0) throw DataError("hamming loss needs a nonempty catalog");
  check_range(L, m);
  check_range(Z, m);
  std::size_t errors = 0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    errors += L[i].size() + Z[i].size() - 2 * intersection_size(L[i], Z[i]);
  }
  return static_cast<double>(errors) /
         (static_cast<double>(m) * static_cast<double>(L.size()));
}

AveragedPrf micro_macro_prf(const SetList& L, const SetList& Z, std::size_t m,
                            MacroOptions options) {
  check_shape(L, Z);
  check_range(L, m);
  check_range(Z, m);
  std::vector<double> tp(m, 0.0), fp(m, 0.0), fn(m, 0.0);
  for (std::size_t i = 0; i < L.size(); ++i) {
    for (int j : Z[i]) {
      if (std::binary_search(L[i].begin(), L[i].end(), j)) {
        tp[j] += 1.0;
      } else {
        fp[j] += 1.0;
      }
    }
    for (int j : L[i]) {
      if (!std::binary_search(Z[i].begin(), Z[i].end(), j)) fn[j] += 1.0;
    }
  }
  AveragedPrf out;
  double stp = 0.0, sfp = 0.0, sfn = 0.0;
  double mp = 0.0, mr = 0.0, mf = 0.0;
  std::size_t counted = 0;
  for (std::size_t j = 0; j < m; ++j) {
    stp += tp[j];
    sfp += fp[j];
    sfn += fn[j];
    if (options.skip_absent && tp[j] + fp[j] + fn[j] == 0.0) continue;
    const double p = ratio(tp[j], tp[j] + fp[j]);
    const double r = ratio(tp[j], tp[j] + fn[j]);
    mp += p;
    mr += r;
    mf += harmonic(p, r);
    ++counted;
  }
  out.micro_precision = ratio(stp, stp + sfp);
  out.micro_recall = ratio(stp, stp + sfn);
  out.micro_f = harmonic(out.micro_precision, out.micro_recall);
  if (counted > 0) {
    out.macro_precision = mp / static_cast<double>(counted);
    out.macro_recall = mr / static_cast<double>(counted);
    out.macro_f = mf / static_cast<double>(counted);
  }
  return out;
}

Metrics compute_all(const SetList& L, const SetList& Z, std::size_t m,
                    MacroOptions options) {
  Metrics out;
  out.exact_match = exact_match(L, Z);
  out.accuracy = ml_accuracy(L, Z);
  out.precision = ml_precision(L, Z);
  out.recall = ml_recall(L, Z);
  out.hamming_loss = hamming_loss(L, Z, m);
  out.averaged = micro_macro_prf(L, Z, m, options);
  return out;
}

Metrics mean(const std::vector<Metrics>& folds) {
  Metrics out;
  if (folds.empty()) return out;
  const double n = static_cast<double>(folds.size());
  for (const auto& f : folds) {
    out.exact_match += f.exact_match / n;
    out.accuracy += f.accuracy / n;
    out.precision += f.precision / n;
    out.recall += f.recall / n;
    out.hamming_loss += f.hamming_loss / n;
    out.averaged.micro_precision += f.averaged.micro_precision / n;
    out.averaged.micro_recall += f.averaged.micro_recall / n;
    out.averaged.micro_f += f.averaged.micro_f / n;
    out.averaged.macro_precision += f.averaged.macro_precision / n;
    out.averaged.macro_recall += f.averaged.macro_recall / n;
    out.averaged.macro_f += f.averaged.macro_f / n;
  }
  return out;
}

}  // namespace lexplain::metrics
