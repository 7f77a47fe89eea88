#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pausecws {

// A sentence is a sequence of characters; each element holds exactly one
// UTF-8 encoded code point.
using Chars = std::vector<std::string>;

// Splits UTF-8 text into code points. Throws Error(ParseError) on malformed
// input, reporting the byte offset.
Chars split_utf8(std::string_view text);

std::string join_chars(const Chars& chars);

// Decodes the first code point of a single-character string.
char32_t decode_code_point(std::string_view ch);

// Membership in the punctuation set used by strip_punctuation: Unicode
// general category P*, plus the non-alphanumeric code points of
// U+3000..U+303F and U+FF01..U+FF65. The table lives in src/punct_table.inc.
bool is_punctuation(char32_t cp) noexcept;

}  // namespace pausecws
