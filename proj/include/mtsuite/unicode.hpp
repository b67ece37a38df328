#pragma once

#include <string>
#include <string_view>

namespace mtsuite::text {

// Ill-formed sequences decode to U+FFFD.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

bool is_word_char(char32_t c);
bool is_space(char32_t c);
bool is_digit(char32_t c);
char32_t fold_case(char32_t c);
char32_t to_upper(char32_t c);
char32_t to_lower(char32_t c);

}  // namespace mtsuite::text
