#include "lexplain/utf8.h"

#include <array>
#include <utility>

namespace lexplain::utf8 {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

struct Composition {
  char32_t base;
  char32_t mark;
  char32_t composed;
};

// Pairs needed for Spanish/Catalan/Galician text.
constexpr std::array<Composition, 52> kCompositions = {{
    {U'A', 0x0300, 0x00C0}, {U'A', 0x0301, 0x00C1}, {U'A', 0x0303, 0x00C3},
    {U'A', 0x0308, 0x00C4}, {U'E', 0x0300, 0x00C8}, {U'E', 0x0301, 0x00C9},
    {U'E', 0x0308, 0x00CB}, {U'I', 0x0300, 0x00CC}, {U'I', 0x0301, 0x00CD},
    {U'I', 0x0308, 0x00CF}, {U'N', 0x0303, 0x00D1}, {U'O', 0x0300, 0x00D2},
    {U'O', 0x0301, 0x00D3}, {U'O', 0x0303, 0x00D5}, {U'O', 0x0308, 0x00D6},
    {U'U', 0x0300, 0x00D9}, {U'U', 0x0301, 0x00DA}, {U'U', 0x0308, 0x00DC},
    {U'Y', 0x0301, 0x00DD}, {U'C', 0x0327, 0x00C7}, {U'a', 0x0300, 0x00E0},
    {U'a', 0x0301, 0x00E1}, {U'a', 0x0303, 0x00E3}, {U'a', 0x0308, 0x00E4},
    {U'e', 0x0300, 0x00E8}, {U'e', 0x0301, 0x00E9}, {U'e', 0x0308, 0x00EB},
    {U'i', 0x0300, 0x00EC}, {U'i', 0x0301, 0x00ED}, {U'i', 0x0308, 0x00EF},
    {U'n', 0x0303, 0x00F1}, {U'o', 0x0300, 0x00F2}, {U'o', 0x0301, 0x00F3},
    {U'o', 0x0303, 0x00F5}, {U'o', 0x0308, 0x00F6}, {U'u', 0x0300, 0x00F9},
    {U'u', 0x0301, 0x00FA}, {U'u', 0x0308, 0x00FC}, {U'y', 0x0301, 0x00FD},
    {U'y', 0x0308, 0x00FF}, {U'c', 0x0327, 0x00E7}, {U'A', 0x0302, 0x00C2},
    {U'E', 0x0302, 0x00CA}, {U'I', 0x0302, 0x00CE}, {U'O', 0x0302, 0x00D4},
    {U'U', 0x0302, 0x00DB}, {U'a', 0x0302, 0x00E2}, {U'e', 0x0302, 0x00EA},
    {U'i', 0x0302, 0x00EE}, {U'o', 0x0302, 0x00F4}, {U'u', 0x0302, 0x00FB},
    {U'S', 0x030C, 0x0160},
}};

bool is_combining_mark(char32_t c) { return c >= 0x0300 && c <= 0x036F; }

// Base letter for the precomposed Latin-1/Extended-A letters we can decompose.
char32_t base_of(char32_t c) {
  for (const auto& comp : kCompositions) {
    if (comp.composed == c) return comp.base;
  }
  return c;
}

}  // namespace

std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }
    int extra = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
      extra = 1;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      extra = 2;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      extra = 3;
      cp = b0 & 0x07;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    if (i + extra >= s.size()) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::string encode(char32_t c) {
  std::string out;
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
  return out;
}

std::string encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : s) {
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else {
      out += encode(c);
    }
  }
  return out;
}

char32_t to_lower(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 32;
  if (c < 0xC0) return c;
  if (c <= 0xDE) return c == 0xD7 ? c : c + 32;
  if (c >= 0x0100 && c <= 0x0137) return (c % 2 == 0) ? c + 1 : c;
  if (c >= 0x0139 && c <= 0x0148) return (c % 2 == 1) ? c + 1 : c;
  if (c >= 0x014A && c <= 0x0177) return (c % 2 == 0) ? c + 1 : c;
  if (c == 0x0178) return 0x00FF;
  if (c >= 0x0179 && c <= 0x017E) return (c % 2 == 1) ? c + 1 : c;
  return c;
}

bool is_upper(char32_t c) { return is_letter(c) && to_lower(c) != c; }

bool is_letter(char32_t c) {
  if ((c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z')) return true;
  if (c == 0xAA || c == 0xBA || c == 0xB5) return true;  // ª º µ
  if (c >= 0xC0 && c <= 0x024F) return c != 0xD7 && c != 0xF7;
  if (c >= 0x0370 && c <= 0x03FF) return true;  // Greek
  if (c >= 0x0400 && c <= 0x04FF) return true;  // Cyrillic
  return false;
}

bool is_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

bool is_punctuation(char32_t c) {
  if (c < 0x80) {
    switch (c) {
      case '!': case '"': case '#': case '%': case '&': case '\'':
      case '(': case ')': case '*': case ',': case '-': case '.':
      case '/': case ':': case ';': case '?': case '@': case '[':
      case '\\': case ']': case '_': case '{': case '}':
        return true;
      default:
        return false;
    }
  }
  switch (c) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB:
    case 0xBF:
      return true;
    default:
      break;
  }
  if (c >= 0x2010 && c <= 0x2027) return true;
  if (c >= 0x2030 && c <= 0x2043) return true;
  if (c >= 0x2045 && c <= 0x2051) return true;
  if (c >= 0x2053 && c <= 0x205E) return true;
  if (c >= 0x3001 && c <= 0x3003) return true;
  return false;
}

bool is_control(char32_t c) {
  return c < 0x20 || (c >= 0x7F && c <= 0x9F) || c == 0x2028 || c == 0x2029;
}

bool is_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' ||
         c == U'\v' || c == 0xA0 || (c >= 0x2000 && c <= 0x200A) ||
         c == 0x202F || c == 0x205F || c == 0x3000 || c == 0x2028 ||
         c == 0x2029;
}

std::u32string nfc(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (char32_t c : s) {
    if (is_combining_mark(c) && !out.empty()) {
      bool composed = false;
      for (const auto& comp : kCompositions) {
        if (comp.base == out.back() && comp.mark == c) {
          out.back() = comp.composed;
          composed = true;
          break;
        }
      }
      if (composed) continue;
    }
    out.push_back(c);
  }
  return out;
}

std::u32string lower(std::u32string_view s) {
  std::u32string out(s);
  for (auto& c : out) c = to_lower(c);
  return out;
}

std::u32string fold(std::u32string_view s) { return lower(nfc(s)); }

std::string fold(std::string_view s) { return encode(fold(decode(s))); }

std::u32string strip_accents(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (char32_t c : nfc(s)) {
    out.push_back(to_lower(base_of(c)));
  }
  return out;
}

}  // namespace lexplain::utf8
