#include "doctest.h"
#include "helpers.h"
#include "lexplain/entities.h"
#include "lexplain/error.h"

using namespace lexplain;
using namespace lexplain::entities;

namespace {

const EntityLexica& lex() { return testing::lexica().entities; }

const char* kSocialAppealDoc =
    "TRIBUNAL SUPERIOR DE JUSTICIA DE GALICIA\n"
    "Sala de lo Social\n"
    "RECURSO DE SUPLICACIÓN 123/2019\n\n"
    "S E N T E N C I A\n\n"
    "ANTECEDENTES DE HECHO\n\nPRIMERO.- Hechos.\n\n"
    "FALLAMOS\n\nQue debemos desestimar y desestimamos el recurso.\n";

}  // namespace

TEST_CASE("parse_gin splits digit positions") {
  const auto g = parse_gin("3605742120190001234");
  CHECK(g.province == "36057");
  CHECK(g.court_code == "42");
  CHECK(g.jurisdiction_digit == '1');
  CHECK(g.year == "2019");
  CHECK(g.sequence == "0001234");
  CHECK(g.str() == "3605742120190001234");
  const auto z = parse_gin("0000000000000000000");
  CHECK(z.province == "00000");
  CHECK(z.sequence == "0000000");
  CHECK_THROWS_AS(parse_gin("360574212019000123"), DataError);
  CHECK_THROWS_AS(parse_gin("36057421201900012a4"), DataError);
}

TEST_CASE("gin found in heading text") {
  CHECK(find_gin_in_text("NIG: 36057 42 1 2019 0001234\n") == "3605742120190001234");
  CHECK_FALSE(find_gin_in_text("sin identificador").has_value());
}

TEST_CASE("case type detection") {
  CHECK(detect_case_type("RECURSO DE SUPLICACIÓN 123/2019", lex().case_types) ==
        "recurso de suplicación");
  CHECK(detect_case_type("juicio ordinario y después recurso de apelación",
                         lex().case_types) == "juicio ordinario");
  CHECK_FALSE(detect_case_type("nada relevante", lex().case_types).has_value());
}

TEST_CASE("court detection") {
  CHECK(detect_court("TRIBUNAL SUPERIOR DE JUSTICIA DE GALICIA", lex().courts) ==
        "Tribunal Superior de Justicia");
  CHECK(detect_court("AUDIENCIA PROVINCIAL ... Tribunal Supremo", lex().courts) ==
        "Audiencia Provincial");
  CHECK_FALSE(detect_court("sin tribunal", lex().courts).has_value());
}

TEST_CASE("decision detection") {
  const std::vector<DecisionEntry> words = {{"desestimatorio", "desestimatorio"},
                                            {"estimatorio", "estimatorio"}};
  CHECK(detect_decision("desestimatorio", words) == "desestimatorio");
  CHECK(detect_decision("estimatorio y desestimatorio", words) ==
        std::string(kMultipleDecision));
  CHECK_FALSE(detect_decision("", words).has_value());
  CHECK(detect_decision("Que debemos desestimar y desestimamos", lex().decisions) ==
        "desestimatorio");
  CHECK(detect_decision("Que estimamos parcialmente el recurso", lex().decisions) ==
        "estimatorio parcial");
}

TEST_CASE("instance type precedence") {
  CHECK(derive_instance_type("recurso de casación") == InstanceType::kThird);
  CHECK(derive_instance_type("recurso de suplicación") == InstanceType::kSecond);
  CHECK(derive_instance_type("recurso") == InstanceType::kFirst);
  CHECK(derive_instance_type("juicio ordinario") == InstanceType::kHigher);
  CHECK(derive_instance_type("") == InstanceType::kHigher);
}

TEST_CASE("jurisdiction cascade") {
  CHECK(detect_jurisdiction("Sala de lo Social", std::nullopt, std::nullopt, lex()) ==
        Jurisdiction::kSocial);
  CHECK(detect_jurisdiction("Sección Segunda", "0000000200000000000", std::nullopt, lex()) ==
        Jurisdiction::kPenal);
  CHECK(detect_jurisdiction("x", std::nullopt, std::string("juicio verbal"), lex()) ==
        Jurisdiction::kCivil);
  CHECK(detect_jurisdiction("x", std::nullopt, std::nullopt, lex()) == Jurisdiction::kUnknown);
}

TEST_CASE("resolution type") {
  CHECK(detect_resolution_type("... S E N T E N C I A") == ResolutionType::kSentencia);
  CHECK(detect_resolution_type("DECRETO") == ResolutionType::kDecreto);
  CHECK(detect_resolution_type("nada") == ResolutionType::kUnknown);
  CHECK(detect_resolution_type("conforme al Real Decreto 5/2000") == ResolutionType::kUnknown);
  CHECK(decision_type_for(ResolutionType::kSentencia) == DecisionType::kSubstantive);
}

TEST_CASE("social appeal yields the septuple") {
  Judgement j;
  j.raw_text = kSocialAppealDoc;
  const auto r = extract_entities(j, lex());
  const std::array<std::string, 7> expected = {
      "recurso de suplicación", "Tribunal Superior de Justicia", "desestimatorio",
      "sustantivo", "segunda", "social", "sentencia"};
  CHECK(display_values(r) == expected);
}

TEST_CASE("empty text is all unknown") {
  Judgement j;
  const auto r = extract_entities(j, lex());
  for (const auto& v : field_values(r)) CHECK(v == kUnknownValue);
  CHECK(display_values(r)[0] == "desconocido");
}

TEST_CASE("section split") {
  const auto s = split_sections(kSocialAppealDoc);
  CHECK(s.heading.find("suplicación") != std::string::npos);
  CHECK(s.heading.find("hechos") == std::string::npos);
  CHECK(s.decision.find("desestimamos") != std::string::npos);
}
