#include "lexplain/lexica.h"

#include <cstdlib>

#include "lexplain/error.h"

#ifndef LEXPLAIN_DATA_DIR
#define LEXPLAIN_DATA_DIR "data/lexica"
#endif

namespace lexplain {

Lexica load_lexica(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw ConfigError("lexica directory '" + dir.string() + "' does not exist");
  }
  Lexica lex;
  lex.stoplist = text::load_stoplist(dir / "stopwords.txt");
  lex.lemmas = text::load_lemma_lexicon(dir / "lemmas.tsv");
  lex.entities = entities::load_entity_lexica(dir);
  lex.anon = anon::load_anon_lexica(dir);
  return lex;
}

std::filesystem::path default_lexica_dir() {
  if (const char* env = std::getenv("LEXPLAIN_LEXICA"); env && *env) return env;
  return LEXPLAIN_DATA_DIR;
}

}  // namespace lexplain
