#include <map>

#include "doctest.h"
#include "helpers.h"
#include "lexplain/error.h"
#include "lexplain/labels.h"
#include "lexplain/synth.h"

using namespace lexplain;
using namespace lexplain::synth;

TEST_CASE("default benchmark corpus shape") {
  const auto c = generate_corpus(SynthConfig{});
  CHECK(c.n() == 2000);
  const auto stats = corpus_stats(c);
  CHECK(stats.label_cardinality == doctest::Approx(1.4).epsilon(0.1 / 1.4));
  std::vector<LabelSet> sets;
  for (const auto& d : c.documents) sets.push_back(d.annotations);
  CHECK(labels::mts_encode(sets).catalog.p() == 8);
  CHECK(stats.class_count == 5);
  for (const auto& d : c.documents) CHECK(is_valid_gin(*d.gin));
}

TEST_CASE("deterministic in the seed") {
  SynthConfig sc;
  sc.n_docs = 20;
  const auto a = generate_corpus(sc);
  const auto b = generate_corpus(sc);
  for (std::size_t i = 0; i < a.n(); ++i) CHECK(a.documents[i].raw_text == b.documents[i].raw_text);
  sc.seed = 8;
  CHECK(generate_corpus(sc).documents[0].raw_text != a.documents[0].raw_text);
}

TEST_CASE("invalid settings") {
  SynthConfig sc;
  sc.n_classes = 8;
  CHECK_THROWS_AS(generate_corpus(sc), ConfigError);
  sc = {};
  sc.combos = {{0}, {0}};
  CHECK_THROWS_AS(generate_corpus(sc), ConfigError);
  sc = {};
  sc.combos = {{0, 0}};
  CHECK_THROWS_AS(generate_corpus(sc), ConfigError);
  sc = {};
  sc.noise = 1.5;
  CHECK_THROWS_AS(generate_corpus(sc), ConfigError);
}

TEST_CASE("combos") {
  CHECK(default_combos(5).size() == 8);
  CHECK(default_combos(1).size() == 1);
  CHECK(class_keywords(0).size() >= 20);
}
