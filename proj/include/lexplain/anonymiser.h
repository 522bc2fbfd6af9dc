#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace lexplain::anon {

// Declaration order is the precedence order used when lexica overlap.
enum class Role { kJudge, kAttorney, kLawyer, kCorporate, kPerson };

std::string_view tag(Role role);
// Accepts "@Judge" or "judge".
Role parse_role(std::string_view text);

// Offsets are code point indices into the NFC form of the input text.
struct ReferenceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  Role tag = Role::kPerson;
  std::string surface;
  // Extent of the personal or company name inside the span, if any.
  std::size_t name_start = 0;
  std::size_t name_end = 0;

  friend bool operator==(const ReferenceSpan&, const ReferenceSpan&) = default;
};

struct RoleEntry {
  std::string phrase;
  Role role = Role::kPerson;
};

struct AnonLexica {
  // Honorifics ("D.", "Dña.", "Sr. D."). Role column optional.
  std::vector<RoleEntry> titles;
  // Words that give a following title its role ("Magistrado" -> @Judge).
  // They are context only and never replaced.
  std::vector<RoleEntry> role_cues;
  // Phrases that refer to a person without naming them; replaced whole.
  std::vector<RoleEntry> implicit_refs;
  std::vector<std::string> corporate_forms;
  // Folded names.
  std::unordered_set<std::string> first_names;
  std::unordered_set<std::string> surnames;
  // Folded name -> verified role, overriding non-@Person tags.
  std::unordered_map<std::string, Role> role_registry;
};

// titles.tsv, role_cues.tsv, implicit_refs.tsv, corporate_forms.txt,
// first_names.txt, surnames.txt, role_registry.tsv.
AnonLexica load_anon_lexica(const std::filesystem::path& dir);

// Left-to-right longest-match scan over the title, implicit-reference and
// corporate-form lexica. Spans are non-overlapping and sorted.
std::vector<ReferenceSpan> detect_references(std::string_view text,
                                             const AnonLexica& lexica);

// Grows each span over adjacent capitalised lexicon names (rightward, then
// leftward), applies the role registry, and adds @Person spans for bare
// multi-token names that no trigger covered.
std::vector<ReferenceSpan> expand_names(std::string_view text,
                                        std::vector<ReferenceSpan> spans,
                                        const AnonLexica& lexica);

// Jaro similarity over code points.
double jaro(std::string_view a, std::string_view b);

// Single-link grouping of names whose case- and accent-folded forms have
// Jaro similarity >= threshold. Canonical member: most frequent in `names`,
// ties to the lexicographically smallest.
std::map<std::string, std::string> unify_names(
    const std::vector<std::string>& names, double threshold);

struct AnonymisationReport {
  std::map<Role, std::size_t> counts;
  // (original, canonical), first-appearance order, no duplicates.
  std::vector<std::pair<std::string, std::string>> replaced_names;
};

struct Anonymised {
  std::string text;
  AnonymisationReport report;
};

inline constexpr double kDefaultJaroThreshold = 0.90;

Anonymised anonymize(std::string_view text, const AnonLexica& lexica,
                     double threshold = kDefaultJaroThreshold);

}  // namespace lexplain::anon
