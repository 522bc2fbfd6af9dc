#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace lexplain::text {

using StopList = std::unordered_set<std::string>;
using LemmaLexicon = std::unordered_map<std::string, std::string>;

struct TokenStream {
  std::string source_id;
  std::vector<std::string> tokens;
};

// Removes control characters, URLs (http://, https://, www. runs) and
// punctuation, lowercases, and collapses whitespace to single spaces.
// Ordinal indicators (º, ª) are letters and survive.
std::string clean(std::string_view text);

std::vector<std::string> tokenize(std::string_view cleaned);

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const StopList& stoplist);

TokenStream lemmatize(const std::vector<std::string>& tokens,
                      const LemmaLexicon& lexicon);

// clean -> tokenize -> stop-words -> lemmas; lemmas that land on a stop-word
// are dropped as well.
TokenStream preprocess(std::string_view id, std::string_view raw_text,
                       const StopList& stoplist, const LemmaLexicon& lexicon);

// Entries are cleaned the same way document text is.
StopList load_stoplist(const std::filesystem::path& path);
// form<TAB>lemma per line.
LemmaLexicon load_lemma_lexicon(const std::filesystem::path& path);

}  // namespace lexplain::text
