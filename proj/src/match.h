#pragma once

// Whole-word phrase search over normalised text, shared by the entity and
// anonymisation rules.

#include <string>
#include <string_view>
#include <vector>

namespace lexplain::detail {

// NFC, lowercase, every whitespace/control run collapsed to one space.
std::u32string normalise_for_match(std::string_view text);
std::u32string normalise_for_match(std::u32string_view text);

struct Hit {
  std::size_t pos = std::u32string::npos;
  std::size_t len = 0;
  std::size_t index = 0;
  bool found() const { return pos != std::u32string::npos; }
};

bool is_whole_word(std::u32string_view haystack, std::size_t pos,
                   std::size_t len);

// Next whole-word occurrence of needle at or after `from`.
std::size_t find_word(std::u32string_view haystack, std::u32string_view needle,
                      std::size_t from = 0);

// Earliest whole-word hit of any phrase; longest wins at equal position, then
// lowest index.
Hit find_first(std::u32string_view haystack,
               const std::vector<std::u32string>& phrases,
               std::size_t from = 0);

}  // namespace lexplain::detail
