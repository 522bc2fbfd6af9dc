#include "lexplain/entities.h"

#include <algorithm>
#include <set>

#include "lexplain/error.h"
#include "lexplain/io.h"
#include "lexplain/utf8.h"
#include "match.h"

namespace lexplain::entities {

namespace {

using detail::find_first;
using detail::find_word;
using detail::normalise_for_match;

constexpr std::u32string_view kPleasOfFact = U"antecedentes de hecho";
const std::vector<std::u32string> kDecisionMarkers = {
    U"fallo", U"fallamos", U"parte dispositiva"};

std::vector<std::u32string> normalised(const std::vector<std::string>& items) {
  std::vector<std::u32string> out;
  out.reserve(items.size());
  for (const auto& s : items) out.push_back(normalise_for_match(s));
  return out;
}

bool contains_word(std::u32string_view haystack, std::u32string_view word) {
  return find_word(haystack, word) != std::u32string::npos;
}

// Length of a case-number pattern (\d+ with optional /\d{1,4}, at least two
// digits overall) starting at pos, allowing an "nº"-style marker first.
std::size_t case_number_length(std::u32string_view s, std::size_t pos) {
  std::size_t i = pos;
  while (i < s.size() && s[i] == U' ') ++i;
  for (std::u32string_view marker :
       {U"n.º", U"nº", U"núm.", U"num.", U"no.", U"número"}) {
    if (s.substr(i, marker.size()) == marker) {
      i += marker.size();
      while (i < s.size() && s[i] == U' ') ++i;
      break;
    }
  }
  std::size_t digits = 0;
  while (i < s.size() && utf8::is_digit(s[i])) {
    ++i;
    ++digits;
  }
  if (digits == 0) return 0;
  if (i + 1 < s.size() && (s[i] == U'/' || s[i] == U'-') &&
      utf8::is_digit(s[i + 1])) {
    std::size_t tail = 0;
    std::size_t j = i + 1;
    while (j < s.size() && utf8::is_digit(s[j]) && tail < 4) {
      ++j;
      ++tail;
    }
    digits += tail;
    i = j;
  }
  if (digits < 2) return 0;
  return i - pos;
}

// Collapses letter-spaced words ("s e n t e n c i a" -> "sentencia").
// Input is space-normalised.
std::u32string collapse_spaced_letters(std::u32string_view s) {
  std::vector<std::u32string_view> words;
  std::size_t i = 0;
  while (i <= s.size()) {
    const std::size_t j = std::min(s.find(U' ', i), s.size());
    words.push_back(s.substr(i, j - i));
    i = j + 1;
  }
  auto single_letter = [](std::u32string_view w) {
    return w.size() == 1 && utf8::is_letter(w[0]);
  };
  std::u32string out;
  std::size_t k = 0;
  while (k < words.size()) {
    std::size_t run = k;
    while (run < words.size() && single_letter(words[run])) ++run;
    if (!out.empty()) out.push_back(U' ');
    if (run - k >= 3) {
      for (std::size_t w = k; w < run; ++w) out += words[w];
      k = run;
    } else {
      out += words[k];
      ++k;
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Jurisdiction j) {
  switch (j) {
    case Jurisdiction::kCivil: return "civil";
    case Jurisdiction::kContentiousAdministrative: return "contentious-administrative";
    case Jurisdiction::kPenal: return "penal";
    case Jurisdiction::kSocial: return "social";
    case Jurisdiction::kUnknown: break;
  }
  return kUnknownValue;
}

std::string_view to_string(DecisionType d) {
  switch (d) {
    case DecisionType::kSubstantive: return "substantive";
    case DecisionType::kProcedural: return "procedural";
    case DecisionType::kUnknown: break;
  }
  return kUnknownValue;
}

std::string_view to_string(InstanceType i) {
  switch (i) {
    case InstanceType::kFirst: return "first";
    case InstanceType::kSecond: return "second";
    case InstanceType::kThird: return "third";
    case InstanceType::kHigher: return "higher";
    case InstanceType::kUnknown: break;
  }
  return kUnknownValue;
}

std::string_view to_string(ResolutionType r) {
  switch (r) {
    case ResolutionType::kSentencia: return "sentencia";
    case ResolutionType::kOrden: return "orden";
    case ResolutionType::kDecreto: return "decreto";
    case ResolutionType::kUnknown: break;
  }
  return kUnknownValue;
}

std::string_view to_display(Jurisdiction j) {
  switch (j) {
    case Jurisdiction::kCivil: return "civil";
    case Jurisdiction::kContentiousAdministrative: return "contencioso-administrativo";
    case Jurisdiction::kPenal: return "penal";
    case Jurisdiction::kSocial: return "social";
    case Jurisdiction::kUnknown: break;
  }
  return "desconocido";
}

std::string_view to_display(DecisionType d) {
  switch (d) {
    case DecisionType::kSubstantive: return "sustantivo";
    case DecisionType::kProcedural: return "procesal";
    case DecisionType::kUnknown: break;
  }
  return "desconocido";
}

std::string_view to_display(InstanceType i) {
  switch (i) {
    case InstanceType::kFirst: return "primera";
    case InstanceType::kSecond: return "segunda";
    case InstanceType::kThird: return "tercera";
    case InstanceType::kHigher: return "superior";
    case InstanceType::kUnknown: break;
  }
  return "desconocido";
}

std::string_view to_display(ResolutionType r) {
  if (r == ResolutionType::kUnknown) return "desconocido";
  return to_string(r);
}

Jurisdiction parse_jurisdiction(std::string_view text) {
  const std::string key = utf8::fold(text);
  if (key == "civil") return Jurisdiction::kCivil;
  if (key == "penal") return Jurisdiction::kPenal;
  if (key == "social") return Jurisdiction::kSocial;
  if (key == "contentious-administrative" ||
      key == "contencioso-administrativo") {
    return Jurisdiction::kContentiousAdministrative;
  }
  throw ConfigError("unknown jurisdiction '" + std::string(text) + "'");
}

std::string GinFields::str() const {
  return province + court_code + std::string(1, jurisdiction_digit) + year +
         sequence;
}

GinFields parse_gin(std::string_view gin) {
  if (!is_valid_gin(gin)) {
    throw DataError("gin must be exactly 19 decimal digits, got '" +
                    std::string(gin) + "'");
  }
  GinFields f;
  f.province = std::string(gin.substr(0, 5));
  f.court_code = std::string(gin.substr(5, 2));
  f.jurisdiction_digit = gin[7];
  f.year = std::string(gin.substr(8, 4));
  f.sequence = std::string(gin.substr(12, 7));
  return f;
}

std::optional<std::string> find_gin_in_text(std::string_view text) {
  const std::u32string s = normalise_for_match(text);
  std::size_t pos = find_word(s, U"nig");
  while (pos != std::u32string::npos) {
    std::string digits;
    std::size_t i = pos + 3;
    while (i < s.size() && (s[i] == U':' || s[i] == U' ' || s[i] == U'.')) ++i;
    while (i < s.size() && digits.size() < 19) {
      if (utf8::is_digit(s[i])) {
        digits.push_back(static_cast<char>(s[i]));
      } else if (s[i] != U' ' && s[i] != U'.') {
        break;
      }
      ++i;
    }
    const bool trailing_digit = i < s.size() && utf8::is_digit(s[i]);
    if (digits.size() == 19 && !trailing_digit) return digits;
    pos = find_word(s, U"nig", pos + 1);
  }
  return std::nullopt;
}

EntityLexica load_entity_lexica(const std::filesystem::path& dir) {
  EntityLexica lex;
  for (const auto& line : io::read_lines(dir / "case_types.tsv")) {
    const auto parts = io::split(line, '\t');
    CaseTypeEntry entry;
    entry.name = parts[0];
    if (parts.size() > 1 && !parts[1].empty()) {
      entry.jurisdiction = parse_jurisdiction(parts[1]);
    }
    if (parts.size() > 2) {
      for (auto& abbr : io::split(parts[2], ',')) {
        if (!abbr.empty()) entry.abbreviations.push_back(abbr);
      }
    }
    lex.case_types.push_back(std::move(entry));
  }
  lex.courts = io::read_lines(dir / "courts.txt");
  for (const auto& line : io::read_lines(dir / "divisions.tsv")) {
    const auto parts = io::split(line, '\t');
    if (parts.size() != 2) {
      throw ConfigError("divisions.tsv: expected phrase<TAB>jurisdiction in '" +
                        line + "'");
    }
    lex.divisions.push_back({parts[0], parse_jurisdiction(parts[1])});
  }
  for (const auto& line : io::read_lines(dir / "decisions.tsv")) {
    const auto parts = io::split(line, '\t');
    lex.decisions.push_back(
        {parts[0], parts.size() > 1 && !parts[1].empty() ? parts[1] : parts[0]});
  }
  for (const auto& line : io::read_lines(dir / "gin_jurisdiction.tsv")) {
    const auto parts = io::split(line, '\t');
    if (parts.size() != 2 || parts[0].size() != 1 || parts[0][0] < '0' ||
        parts[0][0] > '9') {
      throw ConfigError("gin_jurisdiction.tsv: expected digit<TAB>jurisdiction in '" +
                        line + "'");
    }
    lex.gin_jurisdiction[parts[0][0] - '0'] = parse_jurisdiction(parts[1]);
  }
  return lex;
}

Sections split_sections(std::string_view text) {
  const std::u32string s = normalise_for_match(text);
  Sections sections;
  const std::size_t pleas = find_word(s, kPleasOfFact);
  sections.heading = utf8::encode(
      pleas == std::u32string::npos ? std::u32string_view(s)
                                    : std::u32string_view(s).substr(0, pleas));
  std::size_t last_end = std::u32string::npos;
  std::size_t from = 0;
  while (true) {
    const auto hit = find_first(s, kDecisionMarkers, from);
    if (!hit.found()) break;
    last_end = hit.pos + hit.len;
    from = hit.pos + 1;
  }
  if (last_end != std::u32string::npos) {
    sections.decision = utf8::encode(std::u32string_view(s).substr(last_end));
  }
  return sections;
}

std::optional<std::string> detect_case_type(
    std::string_view heading, const std::vector<CaseTypeEntry>& lexicon) {
  const std::u32string s = normalise_for_match(heading);
  std::size_t best_pos = std::u32string::npos;
  std::size_t best_len = 0;
  std::optional<std::string> best;
  auto consider = [&](std::size_t pos, std::size_t len, const std::string& name) {
    if (best_pos == std::u32string::npos || pos < best_pos ||
        (pos == best_pos && len > best_len)) {
      best_pos = pos;
      best_len = len;
      best = name;
    }
  };
  for (const auto& entry : lexicon) {
    const std::u32string name = normalise_for_match(entry.name);
    const std::size_t pos = find_word(s, name);
    if (pos != std::u32string::npos) consider(pos, name.size(), entry.name);
    for (const auto& abbr : entry.abbreviations) {
      const std::u32string a = normalise_for_match(abbr);
      std::size_t p = find_word(s, a);
      while (p != std::u32string::npos) {
        if (case_number_length(s, p + a.size()) > 0) {
          consider(p, a.size(), entry.name);
          break;
        }
        p = find_word(s, a, p + 1);
      }
    }
  }
  return best;
}

std::optional<std::string> detect_court(std::string_view heading,
                                        const std::vector<std::string>& lexicon) {
  const auto hit = find_first(normalise_for_match(heading), normalised(lexicon));
  if (!hit.found()) return std::nullopt;
  return lexicon[hit.index];
}

std::optional<std::string> detect_decision(
    std::string_view decision_section,
    const std::vector<DecisionEntry>& lexicon) {
  const std::u32string s = normalise_for_match(decision_section);
  if (s.empty()) return std::nullopt;
  struct Hit {
    std::size_t start, end, entry;
  };
  std::vector<Hit> hits;
  for (std::size_t e = 0; e < lexicon.size(); ++e) {
    const std::u32string form = normalise_for_match(lexicon[e].form);
    for (std::size_t p = find_word(s, form); p != std::u32string::npos;
         p = find_word(s, form, p + 1)) {
      hits.push_back({p, p + form.size(), e});
    }
  }
  // A form inside a longer matched form ("estimamos" in "estimamos
  // parcialmente") does not count on its own.
  auto covered = [&](const Hit& h) {
    return std::any_of(hits.begin(), hits.end(), [&](const Hit& o) {
      return o.start <= h.start && o.end >= h.end &&
             o.end - o.start > h.end - h.start;
    });
  };
  std::sort(hits.begin(), hits.end(),
            [](const Hit& a, const Hit& b) { return a.start < b.start; });
  std::set<std::string> keywords;
  std::optional<std::string> first;
  for (const auto& h : hits) {
    if (covered(h)) continue;
    const std::string& keyword = lexicon[h.entry].keyword;
    if (keywords.insert(utf8::fold(keyword)).second && !first) first = keyword;
  }
  if (keywords.empty()) return std::nullopt;
  if (keywords.size() > 1) return std::string(kMultipleDecision);
  return first;
}

InstanceType derive_instance_type(std::string_view case_type) {
  const std::u32string s = normalise_for_match(case_type);
  if (contains_word(s, U"casación") || contains_word(s, U"unificación")) {
    return InstanceType::kThird;
  }
  if (contains_word(s, U"apelación") || contains_word(s, U"suplicación")) {
    return InstanceType::kSecond;
  }
  if (contains_word(s, U"recurso")) return InstanceType::kFirst;
  return InstanceType::kHigher;
}

Jurisdiction detect_jurisdiction(std::string_view heading,
                                 std::optional<std::string_view> gin,
                                 const std::optional<std::string>& case_type,
                                 const EntityLexica& lexica) {
  std::vector<std::string> phrases;
  for (const auto& d : lexica.divisions) phrases.push_back(d.phrase);
  const auto hit = find_first(normalise_for_match(heading), normalised(phrases));
  if (hit.found() &&
      lexica.divisions[hit.index].jurisdiction != Jurisdiction::kUnknown) {
    return lexica.divisions[hit.index].jurisdiction;
  }
  if (gin && is_valid_gin(*gin)) {
    const auto j = lexica.gin_jurisdiction[parse_gin(*gin).jurisdiction_digit - '0'];
    if (j != Jurisdiction::kUnknown) return j;
  }
  if (case_type) {
    const std::string key = utf8::fold(*case_type);
    for (const auto& entry : lexica.case_types) {
      if (utf8::fold(entry.name) == key &&
          entry.jurisdiction != Jurisdiction::kUnknown) {
        return entry.jurisdiction;
      }
    }
  }
  return Jurisdiction::kUnknown;
}

ResolutionType detect_resolution_type(std::string_view heading) {
  const std::u32string s = collapse_spaced_letters(normalise_for_match(heading));
  struct Keyword {
    std::u32string_view word;
    ResolutionType type;
  };
  constexpr Keyword kKeywords[] = {{U"sentencia", ResolutionType::kSentencia},
                                   {U"orden", ResolutionType::kOrden},
                                   {U"decreto", ResolutionType::kDecreto}};
  std::size_t best_pos = std::u32string::npos;
  ResolutionType best = ResolutionType::kUnknown;
  for (const auto& kw : kKeywords) {
    std::size_t pos = find_word(s, kw.word);
    while (pos != std::u32string::npos) {
      bool law_citation = false;
      if (kw.type == ResolutionType::kDecreto) {
        // "Real Decreto", "Decreto-ley", "Decreto Legislativo" cite laws.
        const std::u32string_view before =
            std::u32string_view(s).substr(0, pos);
        const std::u32string_view after =
            std::u32string_view(s).substr(pos + kw.word.size());
        law_citation = before.ends_with(U"real ") || after.starts_with(U"-ley") ||
                       after.starts_with(U" ley") ||
                       after.starts_with(U" legislativo");
      }
      if (!law_citation &&
          (best_pos == std::u32string::npos || pos > best_pos)) {
        best_pos = pos;
        best = kw.type;
      }
      pos = find_word(s, kw.word, pos + 1);
    }
  }
  return best;
}

DecisionType decision_type_for(ResolutionType r) {
  switch (r) {
    case ResolutionType::kSentencia: return DecisionType::kSubstantive;
    case ResolutionType::kOrden:
    case ResolutionType::kDecreto: return DecisionType::kProcedural;
    case ResolutionType::kUnknown: break;
  }
  return DecisionType::kUnknown;
}

EntityRecord extract_entities(const Judgement& judgement,
                              const EntityLexica& lexica) {
  const Sections sections = split_sections(judgement.raw_text);
  EntityRecord r;
  r.case_type = detect_case_type(sections.heading, lexica.case_types);
  r.court = detect_court(sections.heading, lexica.courts);
  r.decision = detect_decision(sections.decision, lexica.decisions);
  if (r.case_type) r.instance_type = derive_instance_type(*r.case_type);
  std::optional<std::string> gin = judgement.gin;
  if (!gin) gin = find_gin_in_text(judgement.raw_text);
  r.jurisdiction = detect_jurisdiction(
      sections.heading,
      gin ? std::optional<std::string_view>(*gin) : std::nullopt, r.case_type,
      lexica);
  r.resolution_type = detect_resolution_type(sections.heading);
  r.decision_type = decision_type_for(r.resolution_type);
  return r;
}

std::array<std::string, 7> field_values(const EntityRecord& r) {
  auto or_unknown = [](const std::optional<std::string>& v) {
    return v ? *v : std::string(kUnknownValue);
  };
  return {or_unknown(r.case_type),
          or_unknown(r.court),
          or_unknown(r.decision),
          std::string(to_string(r.decision_type)),
          std::string(to_string(r.instance_type)),
          std::string(to_string(r.jurisdiction)),
          std::string(to_string(r.resolution_type))};
}

std::array<std::string, 7> display_values(const EntityRecord& r) {
  auto or_unknown = [](const std::optional<std::string>& v) {
    return v ? *v : std::string("desconocido");
  };
  return {or_unknown(r.case_type),
          or_unknown(r.court),
          or_unknown(r.decision),
          std::string(to_display(r.decision_type)),
          std::string(to_display(r.instance_type)),
          std::string(to_display(r.jurisdiction)),
          std::string(to_display(r.resolution_type))};
}

}  // namespace lexplain::entities
