#include "doctest.h"
#include "helpers.h"
#include "lexplain/anonymiser.h"
#include "lexplain/error.h"

using namespace lexplain::anon;

namespace {
const AnonLexica& lex() { return testing::lexica().anon; }
}  // namespace

TEST_CASE("title after a judge cue is tagged @Judge") {
  const auto spans = detect_references("el Magistrado D. ___", lex());
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].tag == Role::kJudge);
  CHECK(spans[0].surface == "D.");
}

TEST_CASE("corporate form") {
  const auto spans = detect_references("Construcciones Levante, S.L.", lex());
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].tag == Role::kCorporate);
}

TEST_CASE("no triggers") { CHECK(detect_references("el recurso se desestima", lex()).empty()); }

TEST_CASE("name expansion") {
  const std::string text = "el Magistrado D. Juan Pérez falló";
  const auto spans = expand_names(text, detect_references(text, lex()), lex());
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].surface == "D. Juan Pérez");

  const std::string bare = "declara María García López que";
  const auto person = expand_names(bare, detect_references(bare, lex()), lex());
  REQUIRE(person.size() == 1);
  CHECK(person[0].tag == Role::kPerson);
  CHECK(person[0].surface == "María García López");

  const std::string lone = "el Magistrado D. falló";
  const auto unchanged = expand_names(lone, detect_references(lone, lex()), lex());
  REQUIRE(unchanged.size() == 1);
  CHECK(unchanged[0].surface == "D.");
}

TEST_CASE("jaro") {
  CHECK(jaro("abc", "abc") == 1.0);
  CHECK(jaro("abc", "xyz") == 0.0);
  CHECK(jaro("martha", "marhta") == doctest::Approx(0.9444).epsilon(1e-4));
  CHECK(jaro("", "") == 1.0);
}

TEST_CASE("unify_names") {
  const auto m = unify_names({"Pérez", "Perez", "Pérez"}, 0.9);
  CHECK(m.at("Perez") == "Pérez");
  CHECK(m.at("Pérez") == "Pérez");
  const auto exact = unify_names({"Martha", "Marhta"}, 1.0);
  CHECK(exact.at("Martha") == "Martha");
  CHECK(exact.at("Marhta") == "Marhta");
  CHECK(unify_names({}, 0.9).empty());
}

TEST_CASE("anonymize") {
  const auto a = anonymize("el Magistrado D. Juan Pérez falló", lex());
  CHECK(a.text == "el Magistrado @Judge falló");
  CHECK(a.report.counts.at(Role::kJudge) == 1);

  const auto none = anonymize("sin referencias personales", lex());
  CHECK(none.text == "sin referencias personales");
  CHECK(none.report.counts.empty());

  const auto twice = anonymize(a.text, lex());
  CHECK(twice.text == a.text);
}

TEST_CASE("roles parse") {
  CHECK(parse_role("@Judge") == Role::kJudge);
  CHECK(parse_role("lawyer") == Role::kLawyer);
  CHECK(tag(Role::kAttorney) == "@Attorney");
  CHECK_THROWS_AS(parse_role("@Clerk"), lexplain::ConfigError);
}
