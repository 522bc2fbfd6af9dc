#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace lexplain::io {

// Reads a UTF-8 lexicon file: one entry per line, '#' comments and blank
// lines skipped, trailing CR stripped. Missing file -> ConfigError.
std::vector<std::string> read_lines(const std::filesystem::path& path);

std::vector<std::string> split(std::string_view line, char sep);

// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents);

}  // namespace lexplain::io
