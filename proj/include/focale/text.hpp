#ifndef FOCALE_TEXT_HPP
#define FOCALE_TEXT_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace focale::text {

/// One decoded code point and the byte range it occupies in the source.
struct CodePoint {
  char32_t value;
  std::size_t byte_start;
  std::size_t byte_end;
};

/// Decodes UTF-8, mapping invalid bytes to U+FFFD one byte at a time.
/// Character offsets throughout the toolkit are indices into this sequence.
std::vector<CodePoint> decode_utf8(std::string_view s);

void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(char32_t cp);

bool is_space(char32_t cp);
/// Token-splitting punctuation (apostrophes and hyphens excluded; they are
/// word-internal in French).
bool is_punct(char32_t cp);
bool is_upper(char32_t cp);
bool is_apostrophe(char32_t cp);

/// ASCII + Latin-1 lowercasing, enough for French surface forms.
char32_t to_lower(char32_t cp);
char32_t to_upper(char32_t cp);
std::string lowercase(std::string_view s);
/// Uppercases only the first code point.
std::string capitalize(std::string_view s);

/// True if the first code point is an uppercase letter.
bool starts_uppercase(std::string_view s);
/// True if every code point is punctuation.
bool all_punct(std::string_view s);

std::vector<std::string> split_fields(std::string_view line, char sep);
std::string trim(std::string_view s);

}  // namespace focale::text

#endif  // FOCALE_TEXT_HPP
