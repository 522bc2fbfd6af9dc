#include <sstream>

#include "doctest.h"
#include "helpers.h"
#include "lexplain/corpus.h"
#include "lexplain/error.h"

using namespace lexplain;

namespace {

const char* kTwoLabelRecord =
    R"({"id":"f1","text":"SENTENCIA","labels":[)"
    R"({"order":"civil/mercantile","categories":["real rights","guarantee real rights","mortgage law"]},)"
    R"({"order":"mercantile","categories":["obligations-contracts law","banking-financial market law","banking law"]}]})";

std::string record(const std::string& id, int n_labels, const std::string& extra = "") {
  std::string s = R"({"id":")" + id + R"(","text":"x")" + extra + R"(,"labels":[)";
  for (int i = 0; i < n_labels; ++i) {
    if (i) s += ",";
    s += R"({"order":"penal","categories":["a)" + std::to_string(i) + R"(","b","c"]})";
  }
  return s + "]}";
}

Corpus read(const std::string& text) {
  std::istringstream in(text);
  return read_corpus(in);
}

}  // namespace

TEST_CASE("two-annotation record parses") {
  const auto c = read(kTwoLabelRecord);
  REQUIRE(c.n() == 1);
  CHECK(c.documents[0].annotations.size() == 2);
  CHECK(c.documents[0].annotations[0].order == SubstantiveOrder::kCivilMercantile);
}

TEST_CASE("label-set size bounds") {
  CHECK_NOTHROW(read(record("a", 3)));
  CHECK_THROWS_WITH_AS(read(record("a", 4)), doctest::Contains("label set size out of [1,3]"),
                       DataError);
  CHECK_THROWS_AS(read(record("a", 0)), DataError);
}

TEST_CASE("gin must be 19 digits") {
  CHECK_NOTHROW(read(record("a", 1, R"(,"gin":"0123456789012345678")")));
  CHECK_THROWS_AS(read(record("a", 1, R"(,"gin":"012345678901234567")")), DataError);
  CHECK_THROWS_AS(read(record("a", 1, R"(,"gin":"01234567890123456x8")")), DataError);
}

TEST_CASE("errors name the line") {
  CHECK_THROWS_WITH(read(record("a", 1) + "\n{oops\n"), doctest::Contains("line 2"));
  CHECK_THROWS_WITH(read(record("a", 1) + "\n\n" + record("a", 1)),
                    doctest::Contains("duplicate document id"));
  CHECK_THROWS_AS(read(""), DataError);
  CHECK_THROWS_AS(read("\n\n"), DataError);
  CHECK_THROWS_AS(load_corpus("/nonexistent.jsonl"), DataError);
}

TEST_CASE("unknown substantive order is rejected") {
  CHECK_THROWS_AS(parse_substantive_order("maritime"), DataError);
  CHECK(parse_substantive_order("SOCIAL") == SubstantiveOrder::kSocial);
}

TEST_CASE("label keys fold case and whitespace") {
  const auto a = testing::label(SubstantiveOrder::kPenal, "Derecho  Penal", "b", "c");
  const auto b = testing::label(SubstantiveOrder::kPenal, "derecho penal", "b", "c");
  CHECK(a == b);
  CHECK(a.display().find("Derecho") != std::string::npos);
}

TEST_CASE("write/read round trip") {
  const auto c = testing::small_corpus(5);
  std::ostringstream out;
  write_corpus(c, out);
  const auto back = read(out.str());
  REQUIRE(back.n() == c.n());
  for (std::size_t i = 0; i < c.n(); ++i) {
    CHECK(back.documents[i].id == c.documents[i].id);
    CHECK(back.documents[i].raw_text == c.documents[i].raw_text);
    CHECK(back.documents[i].gin == c.documents[i].gin);
    CHECK(back.documents[i].annotations == c.documents[i].annotations);
  }
}

TEST_CASE("corpus statistics") {
  SUBCASE("single-labelled") {
    const auto s = corpus_stats(read(record("a", 1) + "\n" + record("b", 1)));
    CHECK(s.label_cardinality == 1.0);
  }
  SUBCASE("sizes 1 and 3") {
    const auto s = corpus_stats(read(record("a", 1) + "\n" + record("b", 3)));
    CHECK(s.label_cardinality == 2.0);
    CHECK(s.label_set_size_histogram.at(1) == 1);
    CHECK(s.label_set_size_histogram.at(3) == 1);
    CHECK(s.class_count == 3);
  }
  SUBCASE("large histogram") {
    const double card = (72182.0 * 1 + 27614.0 * 2 + 7010.0 * 3) / (72182 + 27614 + 7010);
    CHECK(card == doctest::Approx(1.39).epsilon(0.005));
  }
}
