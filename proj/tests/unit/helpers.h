#pragma once

#include <string>
#include <vector>

#include "lexplain/lexica.h"
#include "lexplain/synth.h"

namespace testing {

inline const lexplain::Lexica& lexica() {
  static const lexplain::Lexica lex = lexplain::load_lexica(lexplain::default_lexica_dir());
  return lex;
}

inline lexplain::LabelAssignment label(lexplain::SubstantiveOrder order, std::string a,
                                       std::string b, std::string c) {
  lexplain::LabelAssignment l;
  l.order = order;
  l.categories = {std::move(a), std::move(b), std::move(c)};
  return l;
}

inline lexplain::Corpus small_corpus(std::size_t n, std::uint64_t seed = 3) {
  lexplain::synth::SynthConfig sc;
  sc.n_docs = n;
  sc.seed = seed;
  return lexplain::synth::generate_corpus(sc);
}

}  // namespace testing
