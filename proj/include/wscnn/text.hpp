#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wscnn {

// Decodes the UTF-8 sequence starting at s[i]. On success advances i past
// the sequence and returns the code point; returns -1 on malformed input
// (i is then advanced by one byte).
std::int32_t utf8_decode(std::string_view s, std::size_t& i);

bool utf8_valid(std::string_view s);

void utf8_append(std::string& out, char32_t cp);

// Splits a UTF-8 string into one std::string per code point.
std::vector<std::string> utf8_chars(std::string_view s);

std::size_t utf8_length(std::string_view s);

// Unicode whitespace (White_Space property members that occur in practice).
bool is_whitespace(char32_t cp);

// Unicode general category P* (all punctuation categories).
bool is_punctuation(char32_t cp);

std::string trim(std::string_view s);

}  // namespace wscnn
