#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared by the tokenizers, the corpus reader and the
// perturbation generators. All functions operate on UTF-8 byte strings.
namespace prent::text {

std::string trim(std::string_view s);

/// trims and replaces every run of ASCII whitespace by a single space
std::string collapse_whitespace(std::string_view s);

std::string to_lower_ascii(std::string_view s);

std::vector<std::string> split_whitespace(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);

/// number of non-overlapping occurrences of needle in s
std::size_t count_occurrences(std::string_view s, std::string_view needle);

std::string replace_all(std::string_view s, std::string_view from, std::string_view to);

bool is_ascii_punct(char c);

/// One decoded code point and the byte range it came from.
struct code_point {
  char32_t value;
  std::size_t begin;
  std::size_t end;
};

/// Decodes UTF-8; invalid bytes decode to U+FFFD covering a single byte.
std::vector<code_point> decode_utf8(std::string_view s);

void append_utf8(std::string& out, char32_t cp);

} // namespace prent::text
