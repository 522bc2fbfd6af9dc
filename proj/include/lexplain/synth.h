#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lexplain/corpus.h"

namespace lexplain::synth {

// Generator for a labelled corpus that looks like a court judgement
// collection: a heading with court, division, NIG, case type, resolution
// type and party names, a body drawn from per-class keyword vocabularies
// plus shared noise words, and an operative part with a decision verb.
struct SynthConfig {
  std::size_t n_docs = 2000;
  std::uint64_t seed = 7;
  // Base classes used, at most kBaseClassCount.
  std::size_t n_classes = 5;
  // Label-set combinations as base-class indices; empty selects
  // default_combos(n_classes).
  std::vector<std::vector<int>> combos;
  // Probability of a label set of size 1, 2 and 3.
  std::array<double, 3> size_weights = {0.676, 0.259, 0.066};
  // Share of body tokens drawn from the shared noise pool.
  double noise = 0.2;
  int min_tokens = 120;
  int max_tokens = 180;
  // Probability the resolution heading is typeset letter-spaced.
  double spaced_heading = 0.1;
};

inline constexpr std::size_t kBaseClassCount = 7;

// Singletons for every class, pairs (0,1) and (2,3), triple (0,2,4), as far
// as the class count allows.
std::vector<std::vector<int>> default_combos(std::size_t n_classes);

LabelAssignment base_class(std::size_t index);
const std::vector<std::string>& class_keywords(std::size_t index);
const std::vector<std::string>& noise_words();

// Deterministic in the config. Throws ConfigError on invalid settings.
Corpus generate_corpus(const SynthConfig& config);

}  // namespace lexplain::synth
