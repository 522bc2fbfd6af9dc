#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lexplain/corpus.h"

namespace lexplain::entities {

enum class Jurisdiction { kUnknown, kCivil, kContentiousAdministrative, kPenal, kSocial };
enum class DecisionType { kUnknown, kSubstantive, kProcedural };
// kUnknown only appears in records whose case type was not detected.
enum class InstanceType { kUnknown, kFirst, kSecond, kThird, kHigher };
enum class ResolutionType { kUnknown, kSentencia, kOrden, kDecreto };

inline constexpr std::string_view kUnknownValue = "unknown";
inline constexpr std::string_view kMultipleDecision = "multiple decision";

// Stable codes used for feature encoding and serialization.
std::string_view to_string(Jurisdiction j);
std::string_view to_string(DecisionType d);
std::string_view to_string(InstanceType i);
std::string_view to_string(ResolutionType r);

// Spanish surface forms used in rendered explanations ("sustantivo",
// "segunda", ...). Unknown values render as "desconocido".
std::string_view to_display(Jurisdiction j);
std::string_view to_display(DecisionType d);
std::string_view to_display(InstanceType i);
std::string_view to_display(ResolutionType r);

// Accepts the English codes and the Spanish names.
Jurisdiction parse_jurisdiction(std::string_view text);

// General Identification Number: province (1-5), court (6-7), jurisdiction
// (8), year (9-12), sequence (13-19).
struct GinFields {
  std::string province;
  std::string court_code;
  char jurisdiction_digit = '0';
  std::string year;
  std::string sequence;

  std::string str() const;
};

GinFields parse_gin(std::string_view gin);
// Looks for "NIG" followed by 19 digits (spaces and dots allowed between).
std::optional<std::string> find_gin_in_text(std::string_view text);

struct CaseTypeEntry {
  std::string name;
  Jurisdiction jurisdiction = Jurisdiction::kUnknown;
  // Abbreviations only count when a case number follows them.
  std::vector<std::string> abbreviations;
};

struct DecisionEntry {
  std::string form;
  std::string keyword;
};

struct DivisionEntry {
  std::string phrase;
  Jurisdiction jurisdiction = Jurisdiction::kUnknown;
};

struct EntityLexica {
  std::vector<CaseTypeEntry> case_types;
  std::vector<std::string> courts;
  std::vector<DivisionEntry> divisions;
  std::vector<DecisionEntry> decisions;
  std::array<Jurisdiction, 10> gin_jurisdiction{};
};

// Files in dir: case_types.tsv (name[<TAB>jurisdiction[<TAB>abbr,abbr]]),
// courts.txt, divisions.tsv (phrase<TAB>jurisdiction), decisions.tsv
// (form[<TAB>keyword]), gin_jurisdiction.tsv (digit<TAB>jurisdiction).
EntityLexica load_entity_lexica(const std::filesystem::path& dir);

struct Sections {
  // Text before the first pleas-of-fact marker (whole text if absent).
  std::string heading;
  // Text after the last decision marker (empty if absent).
  std::string decision;
};

Sections split_sections(std::string_view text);

std::optional<std::string> detect_case_type(
    std::string_view heading, const std::vector<CaseTypeEntry>& lexicon);
std::optional<std::string> detect_court(std::string_view heading,
                                        const std::vector<std::string>& lexicon);
// One distinct keyword -> that keyword; several -> kMultipleDecision.
std::optional<std::string> detect_decision(
    std::string_view decision_section,
    const std::vector<DecisionEntry>& lexicon);
// Total over strings; precedence third > second > first > higher.
InstanceType derive_instance_type(std::string_view case_type);
// Division phrase, then GIN digit, then the case-type lexicon.
Jurisdiction detect_jurisdiction(std::string_view heading,
                                 std::optional<std::string_view> gin,
                                 const std::optional<std::string>& case_type,
                                 const EntityLexica& lexica);
ResolutionType detect_resolution_type(std::string_view heading);
DecisionType decision_type_for(ResolutionType r);

struct EntityRecord {
  std::optional<std::string> case_type;
  std::optional<std::string> court;
  std::optional<std::string> decision;
  DecisionType decision_type = DecisionType::kUnknown;
  InstanceType instance_type = InstanceType::kUnknown;
  Jurisdiction jurisdiction = Jurisdiction::kUnknown;
  ResolutionType resolution_type = ResolutionType::kUnknown;

  friend bool operator==(const EntityRecord&, const EntityRecord&) = default;
};

EntityRecord extract_entities(const Judgement& judgement,
                              const EntityLexica& lexica);

inline constexpr std::array<std::string_view, 7> kEntityFieldNames = {
    "case_type",     "court",        "decision",       "decision_type",
    "instance_type", "jurisdiction", "resolution_type"};

// Field values in kEntityFieldNames order; unknown fields are kUnknownValue.
std::array<std::string, 7> field_values(const EntityRecord& record);
// Same order, Spanish display forms.
std::array<std::string, 7> display_values(const EntityRecord& record);

}  // namespace lexplain::entities
