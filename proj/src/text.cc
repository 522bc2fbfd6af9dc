#include "lexplain/text.h"

#include "lexplain/error.h"
#include "lexplain/io.h"
#include "lexplain/utf8.h"

namespace lexplain::text {

namespace {

bool starts_with_ci(std::u32string_view s, std::size_t pos,
                    std::u32string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    if (utf8::to_lower(s[pos + k]) != prefix[k]) return false;
  }
  return true;
}

// Marks every code point that belongs to a URL: from a scheme or "www."
// prefix to the end of its non-space run.
std::vector<bool> url_mask(std::u32string_view s) {
  std::vector<bool> mask(s.size(), false);
  std::size_t i = 0;
  while (i < s.size()) {
    if (starts_with_ci(s, i, U"http://") || starts_with_ci(s, i, U"https://") ||
        starts_with_ci(s, i, U"www.")) {
      std::size_t j = i;
      while (j < s.size() && !utf8::is_space(s[j]) && !utf8::is_control(s[j])) {
        mask[j++] = true;
      }
      i = j;
    } else {
      ++i;
    }
  }
  return mask;
}

}  // namespace

std::string clean(std::string_view text) {
  const std::u32string s = utf8::nfc(utf8::decode(text));
  const std::vector<bool> is_url = url_mask(s);
  std::u32string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char32_t c = s[i];
    if (is_url[i] || utf8::is_control(c) || utf8::is_space(c) ||
        utf8::is_punctuation(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(utf8::to_lower(c));
  }
  return utf8::encode(out);
}

std::vector<std::string> tokenize(std::string_view cleaned) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < cleaned.size()) {
    while (i < cleaned.size() && (cleaned[i] == ' ' || cleaned[i] == '\t' ||
                                  cleaned[i] == '\n' || cleaned[i] == '\r')) {
      ++i;
    }
    std::size_t j = i;
    while (j < cleaned.size() && cleaned[j] != ' ' && cleaned[j] != '\t' &&
           cleaned[j] != '\n' && cleaned[j] != '\r') {
      ++j;
    }
    if (j > i) tokens.emplace_back(cleaned.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const StopList& stoplist) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!stoplist.contains(t)) out.push_back(t);
  }
  return out;
}

TokenStream lemmatize(const std::vector<std::string>& tokens,
                      const LemmaLexicon& lexicon) {
  TokenStream stream;
  stream.tokens.reserve(tokens.size());
  for (const auto& t : tokens) {
    const auto it = lexicon.find(t);
    stream.tokens.push_back(it == lexicon.end() ? t : it->second);
  }
  return stream;
}

TokenStream preprocess(std::string_view id, std::string_view raw_text,
                       const StopList& stoplist, const LemmaLexicon& lexicon) {
  TokenStream stream =
      lemmatize(remove_stopwords(tokenize(clean(raw_text)), stoplist), lexicon);
  stream.tokens = remove_stopwords(stream.tokens, stoplist);
  stream.source_id = std::string(id);
  return stream;
}

StopList load_stoplist(const std::filesystem::path& path) {
  StopList stoplist;
  for (const auto& line : io::read_lines(path)) {
    for (auto& token : tokenize(clean(line))) stoplist.insert(std::move(token));
  }
  return stoplist;
}

LemmaLexicon load_lemma_lexicon(const std::filesystem::path& path) {
  LemmaLexicon lexicon;
  std::size_t line_no = 0;
  for (const auto& line : io::read_lines(path)) {
    ++line_no;
    const auto parts = io::split(line, '\t');
    if (parts.size() != 2) {
      throw ConfigError(path.string() + ": entry " + std::to_string(line_no) +
                        " is not form<TAB>lemma");
    }
    const std::string form = clean(parts[0]);
    const std::string lemma = clean(parts[1]);
    if (form.empty() || lemma.empty() || form.find(' ') != std::string::npos ||
        lemma.find(' ') != std::string::npos) {
      throw ConfigError(path.string() + ": entry " + std::to_string(line_no) +
                        " must map one word to one word");
    }
    lexicon.emplace(form, lemma);
  }
  return lexicon;
}

}  // namespace lexplain::text
