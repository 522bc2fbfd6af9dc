#pragma once

// Minimal UTF-8 and character-class helpers for Latin-script legal text.
// Case mapping covers Basic Latin, Latin-1 Supplement and Latin Extended-A,
// which is everything Spanish court documents use in practice.

#include <string>
#include <string_view>

namespace lexplain::utf8 {

// Invalid sequences decode to U+FFFD.
std::u32string decode(std::string_view s);
std::string encode(std::u32string_view s);
std::string encode(char32_t c);

char32_t to_lower(char32_t c);
bool is_upper(char32_t c);
bool is_letter(char32_t c);
bool is_digit(char32_t c);
inline bool is_word_char(char32_t c) { return is_letter(c) || is_digit(c); }

// Unicode general categories Pc, Pd, Ps, Pe, Pi, Pf, Po.
bool is_punctuation(char32_t c);
// Cc plus the line/paragraph separators.
bool is_control(char32_t c);
bool is_space(char32_t c);

// Canonical composition of base letters with the combining marks that occur
// in Spanish and Catalan text (acute, grave, diaeresis, tilde, cedilla).
std::u32string nfc(std::u32string_view s);

std::u32string lower(std::u32string_view s);
// NFC + lowercase; preserves code point count of the NFC form.
std::u32string fold(std::u32string_view s);
std::string fold(std::string_view s);

// Fold and drop diacritics ("Pérez" -> "perez").
std::u32string strip_accents(std::u32string_view s);

}  // namespace lexplain::utf8
