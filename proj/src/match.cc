#include "match.h"

#include "lexplain/utf8.h"

namespace lexplain::detail {

std::u32string normalise_for_match(std::u32string_view text) {
  const std::u32string folded = utf8::fold(text);
  std::u32string out;
  out.reserve(folded.size());
  bool pending = false;
  for (char32_t c : folded) {
    if (utf8::is_space(c) || utf8::is_control(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(U' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

std::u32string normalise_for_match(std::string_view text) {
  return normalise_for_match(utf8::decode(text));
}

bool is_whole_word(std::u32string_view h, std::size_t pos, std::size_t len) {
  if (len == 0 || pos + len > h.size()) return false;
  if (pos > 0 && utf8::is_word_char(h[pos]) && utf8::is_word_char(h[pos - 1])) {
    return false;
  }
  const std::size_t end = pos + len;
  if (end < h.size() && utf8::is_word_char(h[end - 1]) &&
      utf8::is_word_char(h[end])) {
    return false;
  }
  return true;
}

std::size_t find_word(std::u32string_view haystack, std::u32string_view needle,
                      std::size_t from) {
  if (needle.empty()) return std::u32string::npos;
  std::size_t pos = haystack.find(needle, from);
  while (pos != std::u32string_view::npos) {
    if (is_whole_word(haystack, pos, needle.size())) return pos;
    pos = haystack.find(needle, pos + 1);
  }
  return std::u32string::npos;
}

Hit find_first(std::u32string_view haystack,
               const std::vector<std::u32string>& phrases, std::size_t from) {
  Hit best;
  for (std::size_t i = 0; i < phrases.size(); ++i) {
    const std::size_t pos = find_word(haystack, phrases[i], from);
    if (pos == std::u32string::npos) continue;
    const std::size_t len = phrases[i].size();
    if (!best.found() || pos < best.pos || (pos == best.pos && len > best.len)) {
      best = Hit{pos, len, i};
    }
  }
  return best;
}

}  // namespace lexplain::detail
