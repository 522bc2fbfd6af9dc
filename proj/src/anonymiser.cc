#include "lexplain/anonymiser.h"

#include <algorithm>
#include <numeric>
#include <optional>

#include "lexplain/error.h"
#include "lexplain/io.h"
#include "lexplain/utf8.h"

namespace lexplain::anon {

namespace {

const std::unordered_set<std::u32string> kConnectors = {
    U"de", U"del", U"la", U"las", U"los", U"y", U"i"};

struct Text {
  std::u32string orig;  // NFC
  std::u32string low;   // lowercase of orig, same length
};

Text make_text(std::string_view s) {
  Text t;
  t.orig = utf8::nfc(utf8::decode(s));
  t.low = utf8::lower(t.orig);
  return t;
}

bool is_ws(char32_t c) { return utf8::is_space(c) || utf8::is_control(c); }

// Registry key: accent-stripped, case-folded, single spaces.
std::string fold_name(std::string_view s) {
  std::u32string out;
  for (char32_t c : utf8::strip_accents(utf8::decode(s))) {
    if (is_ws(c)) {
      if (!out.empty() && out.back() != U' ') out.push_back(U' ');
    } else {
      out.push_back(c);
    }
  }
  while (!out.empty() && out.back() == U' ') out.pop_back();
  return utf8::encode(out);
}

// Matches a folded phrase at pos; a space in the phrase matches any run of
// whitespace. Returns the matched length, or 0.
std::size_t match_at(const std::u32string& low, std::size_t pos,
                     std::u32string_view phrase) {
  if (phrase.empty()) return 0;
  if (pos > 0 && utf8::is_word_char(phrase.front()) &&
      utf8::is_word_char(low[pos - 1])) {
    return 0;
  }
  std::size_t i = pos;
  for (std::size_t k = 0; k < phrase.size(); ++k) {
    if (phrase[k] == U' ') {
      if (i >= low.size() || !is_ws(low[i])) return 0;
      while (i < low.size() && is_ws(low[i])) ++i;
      continue;
    }
    if (i >= low.size() || low[i] != phrase[k]) return 0;
    ++i;
  }
  if (i < low.size() && utf8::is_word_char(phrase.back()) &&
      utf8::is_word_char(low[i])) {
    return 0;
  }
  return i - pos;
}

// Word token: letters/digits with inner hyphens or apostrophes.
struct Token {
  std::size_t start = 0;
  std::size_t end = 0;
  bool found() const { return end > start; }
};

Token token_at(const std::u32string& s, std::size_t pos) {
  Token t{pos, pos};
  std::size_t i = pos;
  while (i < s.size()) {
    if (utf8::is_word_char(s[i])) {
      ++i;
    } else if ((s[i] == U'-' || s[i] == U'\'') && i > pos && i + 1 < s.size() &&
               utf8::is_word_char(s[i + 1])) {
      ++i;
    } else {
      break;
    }
  }
  t.end = i;
  return t;
}

Token token_ending_at(const std::u32string& s, std::size_t end) {
  std::size_t i = end;
  while (i > 0) {
    const char32_t c = s[i - 1];
    if (utf8::is_word_char(c)) {
      --i;
    } else if ((c == U'-' || c == U'\'') && i < end && i >= 2 &&
               utf8::is_word_char(s[i - 2])) {
      --i;
    } else {
      break;
    }
  }
  return Token{i, end};
}

std::size_t skip_ws_forward(const std::u32string& s, std::size_t i) {
  while (i < s.size() && is_ws(s[i])) ++i;
  return i;
}

std::size_t skip_ws_backward(const std::u32string& s, std::size_t i) {
  while (i > 0 && is_ws(s[i - 1])) --i;
  return i;
}

class NameChecker {
 public:
  explicit NameChecker(const AnonLexica& lex) : lex_(lex) {}

  bool capitalised(const Text& t, Token tok) const {
    return tok.found() && utf8::is_upper(t.orig[tok.start]);
  }
  std::string folded(const Text& t, Token tok) const {
    return utf8::encode(
        std::u32string_view(t.low).substr(tok.start, tok.end - tok.start));
  }
  bool is_first_name(const Text& t, Token tok) const {
    return capitalised(t, tok) && lex_.first_names.contains(folded(t, tok));
  }
  bool is_name(const Text& t, Token tok) const {
    if (!capitalised(t, tok)) return false;
    const std::string f = folded(t, tok);
    return lex_.first_names.contains(f) || lex_.surnames.contains(f);
  }
  bool is_connector(const Text& t, Token tok) const {
    return tok.found() && !utf8::is_upper(t.orig[tok.start]) &&
           kConnectors.contains(
               std::u32string(t.low.substr(tok.start, tok.end - tok.start)));
  }

 private:
  const AnonLexica& lex_;
};

struct Trigger {
  std::u32string phrase;
  Role role;
  enum Kind { kTitle, kImplicit, kCorporate } kind;
};

std::vector<Trigger> build_triggers(const AnonLexica& lex) {
  std::vector<Trigger> triggers;
  for (const auto& e : lex.titles) {
    triggers.push_back({utf8::fold(utf8::decode(e.phrase)), e.role, Trigger::kTitle});
  }
  for (const auto& e : lex.implicit_refs) {
    triggers.push_back(
        {utf8::fold(utf8::decode(e.phrase)), e.role, Trigger::kImplicit});
  }
  for (const auto& f : lex.corporate_forms) {
    triggers.push_back(
        {utf8::fold(utf8::decode(f)), Role::kCorporate, Trigger::kCorporate});
  }
  return triggers;
}

// Role of a cue that ends right before pos (whitespace or one comma between).
std::optional<Role> cue_before(const Text& t, std::size_t pos,
                               const std::vector<RoleEntry>& cues) {
  std::size_t e = skip_ws_backward(t.low, pos);
  if (e > 0 && t.low[e - 1] == U',') e = skip_ws_backward(t.low, e - 1);
  std::optional<Role> best;
  std::size_t best_len = 0;
  for (const auto& cue : cues) {
    const std::u32string phrase = utf8::fold(utf8::decode(cue.phrase));
    if (phrase.size() > e) continue;
    const std::size_t start = e - phrase.size();
    if (match_at(t.low, start, phrase) != phrase.size()) continue;
    if (phrase.size() > best_len ||
        (phrase.size() == best_len && best && cue.role < *best)) {
      best = cue.role;
      best_len = phrase.size();
    }
  }
  return best;
}

// Leftward company name before a corporate form: capitalised tokens, inner
// connectors, one optional comma directly before the form.
std::size_t company_name_start(const Text& t, std::size_t form_start,
                               std::size_t floor, const NameChecker& names) {
  std::size_t i = skip_ws_backward(t.orig, form_start);
  if (i > floor && t.orig[i - 1] == U',') i = skip_ws_backward(t.orig, i - 1);
  std::size_t start = form_start;
  while (i > floor) {
    const Token tok = token_ending_at(t.orig, i);
    if (!tok.found() || tok.start < floor) break;
    if (names.capitalised(t, tok)) {
      start = tok.start;
      i = skip_ws_backward(t.orig, tok.start);
      continue;
    }
    const bool joins = names.is_connector(t, tok) || t.orig[i - 1] == U'&';
    if (!joins) break;
    const std::size_t before = skip_ws_backward(t.orig, tok.found() ? tok.start : i - 1);
    const Token prev = token_ending_at(t.orig, before);
    if (!prev.found() || prev.start < floor || !names.capitalised(t, prev)) break;
    start = prev.start;
    i = skip_ws_backward(t.orig, prev.start);
  }
  return start;
}

std::string surface_of(const Text& t, std::size_t start, std::size_t end) {
  return utf8::encode(std::u32string_view(t.orig).substr(start, end - start));
}

std::string trimmed_surface(const Text& t, std::size_t start, std::size_t end) {
  while (start < end && (is_ws(t.orig[start]) || t.orig[start] == U',')) ++start;
  while (end > start && (is_ws(t.orig[end - 1]) || t.orig[end - 1] == U',')) --end;
  return surface_of(t, start, end);
}

std::vector<ReferenceSpan> detect(const Text& t, const AnonLexica& lex) {
  const std::vector<Trigger> triggers = build_triggers(lex);
  const NameChecker names(lex);
  std::vector<ReferenceSpan> spans;
  std::size_t i = 0;
  std::size_t floor = 0;
  while (i < t.low.size()) {
    const Trigger* best = nullptr;
    std::size_t best_len = 0;
    for (const auto& trig : triggers) {
      const std::size_t len = match_at(t.low, i, trig.phrase);
      if (len == 0) continue;
      if (len > best_len || (len == best_len && trig.role < best->role)) {
        best = &trig;
        best_len = len;
      }
    }
    if (!best) {
      ++i;
      continue;
    }
    ReferenceSpan span;
    span.start = i;
    span.end = i + best_len;
    span.tag = best->role;
    span.name_start = span.name_end = span.end;
    if (best->kind == Trigger::kTitle) {
      if (auto role = cue_before(t, i, lex.role_cues)) span.tag = *role;
    } else if (best->kind == Trigger::kCorporate) {
      span.start = company_name_start(t, i, floor, names);
      span.name_start = span.start;
      span.name_end = i;
    }
    span.surface = surface_of(t, span.start, span.end);
    spans.push_back(span);
    floor = span.end;
    i = span.end;
  }
  return spans;
}

// Extends [start, end) rightward over names; returns the new end.
std::size_t grow_right(const Text& t, std::size_t end, std::size_t limit,
                       const NameChecker& names) {
  while (true) {
    const std::size_t next = skip_ws_forward(t.orig, end);
    if (next == end && end != 0 && next < t.orig.size() &&
        utf8::is_word_char(t.orig[next]) && utf8::is_word_char(t.orig[end - 1])) {
      break;
    }
    const Token tok = token_at(t.orig, next);
    if (!tok.found() || tok.end > limit) break;
    if (names.is_name(t, tok)) {
      end = tok.end;
      continue;
    }
    if (names.is_connector(t, tok)) {
      const Token after = token_at(t.orig, skip_ws_forward(t.orig, tok.end));
      if (after.found() && after.end <= limit && after.start > tok.end &&
          names.is_name(t, after)) {
        end = after.end;
        continue;
      }
    }
    break;
  }
  return end;
}

std::size_t grow_left(const Text& t, std::size_t start, std::size_t floor,
                      const NameChecker& names) {
  while (start > floor) {
    const std::size_t prev_end = skip_ws_backward(t.orig, start);
    if (prev_end == start) break;
    const Token tok = token_ending_at(t.orig, prev_end);
    if (!tok.found() || tok.start < floor || !names.is_name(t, tok)) break;
    start = tok.start;
  }
  return start;
}

}  // namespace

std::string_view tag(Role role) {
  switch (role) {
    case Role::kJudge: return "@Judge";
    case Role::kAttorney: return "@Attorney";
    case Role::kLawyer: return "@Lawyer";
    case Role::kCorporate: return "@Corporate";
    case Role::kPerson: return "@Person";
  }
  return "@Person";
}

Role parse_role(std::string_view text) {
  std::string key = utf8::fold(text);
  if (!key.empty() && key.front() == '@') key.erase(0, 1);
  if (key == "judge") return Role::kJudge;
  if (key == "attorney") return Role::kAttorney;
  if (key == "lawyer") return Role::kLawyer;
  if (key == "corporate") return Role::kCorporate;
  if (key == "person") return Role::kPerson;
  throw ConfigError("unknown role '" + std::string(text) + "'");
}

AnonLexica load_anon_lexica(const std::filesystem::path& dir) {
  AnonLexica lex;
  auto role_entries = [&](const char* file, bool role_required) {
    std::vector<RoleEntry> entries;
    for (const auto& line : io::read_lines(dir / file)) {
      const auto parts = io::split(line, '\t');
      if (role_required && parts.size() < 2) {
        throw ConfigError(std::string(file) + ": expected phrase<TAB>role in '" +
                          line + "'");
      }
      entries.push_back({parts[0], parts.size() > 1 ? parse_role(parts[1])
                                                    : Role::kPerson});
    }
    return entries;
  };
  lex.titles = role_entries("titles.tsv", false);
  lex.role_cues = role_entries("role_cues.tsv", true);
  lex.implicit_refs = role_entries("implicit_refs.tsv", true);
  lex.corporate_forms = io::read_lines(dir / "corporate_forms.txt");
  for (const auto& n : io::read_lines(dir / "first_names.txt")) {
    lex.first_names.insert(utf8::fold(n));
  }
  for (const auto& n : io::read_lines(dir / "surnames.txt")) {
    lex.surnames.insert(utf8::fold(n));
  }
  for (const auto& line : io::read_lines(dir / "role_registry.tsv")) {
    const auto parts = io::split(line, '\t');
    if (parts.size() != 2) {
      throw ConfigError("role_registry.tsv: expected name<TAB>role in '" + line +
                        "'");
    }
    lex.role_registry[fold_name(parts[0])] = parse_role(parts[1]);
  }
  return lex;
}

std::vector<ReferenceSpan> detect_references(std::string_view text,
                                             const AnonLexica& lexica) {
  return detect(make_text(text), lexica);
}

std::vector<ReferenceSpan> expand_names(std::string_view text,
                                        std::vector<ReferenceSpan> spans,
                                        const AnonLexica& lexica) {
  const Text t = make_text(text);
  const NameChecker names(lexica);
  std::sort(spans.begin(), spans.end(),
            [](const auto& a, const auto& b) { return a.start < b.start; });

  for (std::size_t k = 0; k < spans.size(); ++k) {
    auto& span = spans[k];
    if (span.tag == Role::kCorporate && span.name_end > span.name_start) continue;
    const std::size_t limit =
        k + 1 < spans.size() ? spans[k + 1].start : t.orig.size();
    const std::size_t floor = k > 0 ? spans[k - 1].end : 0;
    const std::size_t trigger_end = span.end;
    const std::size_t trigger_start = span.start;
    span.end = grow_right(t, span.end, limit, names);
    span.start = grow_left(t, span.start, floor, names);
    if (span.end > trigger_end) {
      span.name_start = skip_ws_forward(t.orig, trigger_end);
      span.name_end = span.end;
    } else if (span.start < trigger_start) {
      span.name_start = span.start;
      span.name_end = skip_ws_backward(t.orig, trigger_start);
    }
    span.surface = surface_of(t, span.start, span.end);
  }

  // Bare names: a first name followed by at least one more name token.
  std::vector<ReferenceSpan> bare;
  std::size_t next_span = 0;
  std::size_t i = 0;
  while (i < t.orig.size()) {
    while (next_span < spans.size() && spans[next_span].end <= i) ++next_span;
    if (next_span < spans.size() && i >= spans[next_span].start) {
      i = spans[next_span].end;
      continue;
    }
    const bool at_word_start = i == 0 || !utf8::is_word_char(t.orig[i - 1]);
    const Token tok = at_word_start ? token_at(t.orig, i) : Token{i, i};
    if (!tok.found()) {
      ++i;
      continue;
    }
    const std::size_t limit =
        next_span < spans.size() ? spans[next_span].start : t.orig.size();
    if (tok.end <= limit && names.is_first_name(t, tok)) {
      const std::size_t end = grow_right(t, tok.end, limit, names);
      if (end > tok.end) {
        ReferenceSpan span;
        span.start = tok.start;
        span.end = end;
        span.tag = Role::kPerson;
        span.name_start = span.start;
        span.name_end = span.end;
        span.surface = surface_of(t, span.start, span.end);
        bare.push_back(span);
        i = end;
        continue;
      }
    }
    i = tok.end;
  }
  spans.insert(spans.end(), bare.begin(), bare.end());
  std::sort(spans.begin(), spans.end(),
            [](const auto& a, const auto& b) { return a.start < b.start; });

  for (auto& span : spans) {
    if (span.tag == Role::kPerson || span.name_end <= span.name_start) continue;
    const std::string name = trimmed_surface(t, span.name_start, span.name_end);
    const auto it = lexica.role_registry.find(fold_name(name));
    if (it != lexica.role_registry.end()) span.tag = it->second;
  }
  return spans;
}

double jaro(std::string_view a_utf8, std::string_view b_utf8) {
  const std::u32string a = utf8::decode(a_utf8);
  const std::u32string b = utf8::decode(b_utf8);
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const std::size_t window =
      std::max<std::size_t>(std::max(a.size(), b.size()) / 2, 1) - 1;
  std::vector<bool> a_matched(a.size(), false);
  std::vector<bool> b_matched(b.size(), false);
  std::size_t matches = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t lo = i > window ? i - window : 0;
    const std::size_t hi = std::min(b.size(), i + window + 1);
    for (std::size_t j = lo; j < hi; ++j) {
      if (b_matched[j] || a[i] != b[j]) continue;
      a_matched[i] = b_matched[j] = true;
      ++matches;
      break;
    }
  }
  if (matches == 0) return 0.0;
  std::size_t half_transpositions = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a_matched[i]) continue;
    while (!b_matched[j]) ++j;
    if (a[i] != b[j]) ++half_transpositions;
    ++j;
  }
  const double m = static_cast<double>(matches);
  const double t = static_cast<double>(half_transpositions) / 2.0;
  return (m / static_cast<double>(a.size()) + m / static_cast<double>(b.size()) +
          (m - t) / m) /
         3.0;
}

std::map<std::string, std::string> unify_names(
    const std::vector<std::string>& names, double threshold) {
  std::vector<std::string> distinct;
  std::map<std::string, std::size_t> freq;
  for (const auto& n : names) {
    if (freq[n]++ == 0) distinct.push_back(n);
  }
  std::vector<std::string> keys;
  keys.reserve(distinct.size());
  for (const auto& n : distinct) {
    keys.push_back(utf8::encode(utf8::strip_accents(utf8::decode(n))));
  }
  std::vector<std::size_t> parent(distinct.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    for (std::size_t j = i + 1; j < distinct.size(); ++j) {
      if (jaro(keys[i], keys[j]) >= threshold) parent[find(i)] = find(j);
    }
  }
  std::map<std::size_t, std::string> canonical;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    const std::size_t root = find(i);
    auto it = canonical.find(root);
    if (it == canonical.end()) {
      canonical.emplace(root, distinct[i]);
      continue;
    }
    const auto fi = freq[distinct[i]];
    const auto fc = freq[it->second];
    if (fi > fc || (fi == fc && distinct[i] < it->second)) it->second = distinct[i];
  }
  std::map<std::string, std::string> mapping;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    mapping[distinct[i]] = canonical[find(i)];
  }
  return mapping;
}

Anonymised anonymize(std::string_view text, const AnonLexica& lexica,
                     double threshold) {
  Anonymised result;
  const auto spans = expand_names(text, detect_references(text, lexica), lexica);
  if (spans.empty()) {
    result.text = std::string(text);
    return result;
  }
  const Text t = make_text(text);
  std::u32string out;
  out.reserve(t.orig.size());
  std::size_t cursor = 0;
  std::vector<std::string> names;
  for (const auto& span : spans) {
    out.append(t.orig, cursor, span.start - cursor);
    out += utf8::decode(tag(span.tag));
    cursor = span.end;
    ++result.report.counts[span.tag];
    if (span.name_end > span.name_start) {
      const std::string name = trimmed_surface(t, span.name_start, span.name_end);
      if (!name.empty()) names.push_back(name);
    }
  }
  out.append(t.orig, cursor, std::u32string::npos);
  result.text = utf8::encode(out);
  const auto mapping = unify_names(names, threshold);
  std::unordered_set<std::string> seen;
  for (const auto& n : names) {
    if (seen.insert(n).second) result.report.replaced_names.emplace_back(n, mapping.at(n));
  }
  return result;
}

}  // namespace lexplain::anon
