#pragma once

#include <cstddef>
#include <vector>

#include "lexplain/labels.h"

namespace lexplain::metrics {

using labels::IndexSet;
using SetList = std::vector<IndexSet>;

// L: annotated sets, Z: predicted sets, both as sorted class indices.
double exact_match(const SetList& L, const SetList& Z);
double ml_accuracy(const SetList& L, const SetList& Z);
double ml_precision(const SetList& L, const SetList& Z);
double ml_recall(const SetList& L, const SetList& Z);
// m = catalog size; indices outside [0, m) -> DataError.
double hamming_loss(const SetList& L, const SetList& Z, std::size_t m);

struct AveragedPrf {
  double micro_precision = 0.0;
  double micro_recall = 0.0;
  double micro_f = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f = 0.0;
};

struct MacroOptions {
  // Skip classes with no annotated and no predicted member (TP+FP+FN = 0)
  // instead of counting them as zeros.
  bool skip_absent = true;
};

// Per-class TP/FP/FN over the indicator view. Micro: ratios of summed
// counts, F the harmonic mean of micro P and R. Macro: means of per-class P,
// R and F, an undefined per-class ratio counting as 0.
AveragedPrf micro_macro_prf(const SetList& L, const SetList& Z, std::size_t m,
                            MacroOptions options = {});

struct Metrics {
  double exact_match = 0.0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double hamming_loss = 0.0;
  AveragedPrf averaged;
};

Metrics compute_all(const SetList& L, const SetList& Z, std::size_t m,
                    MacroOptions options = {});

// Field-wise mean.
Metrics mean(const std::vector<Metrics>& folds);

}  // namespace lexplain::metrics
