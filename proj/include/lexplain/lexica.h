#pragma once

#include <filesystem>

#include "lexplain/anonymiser.h"
#include "lexplain/entities.h"
#include "lexplain/text.h"

namespace lexplain {

// Every lexicon the pipeline reads, loaded from one directory:
// stopwords.txt, lemmas.tsv, plus the entity and anonymiser files.
struct Lexica {
  text::StopList stoplist;
  text::LemmaLexicon lemmas;
  entities::EntityLexica entities;
  anon::AnonLexica anon;
};

Lexica load_lexica(const std::filesystem::path& dir);

// $LEXPLAIN_LEXICA if set, else the lexica shipped with the sources.
std::filesystem::path default_lexica_dir();

}  // namespace lexplain
