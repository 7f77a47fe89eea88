#include "pausecws/utf8.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "pausecws/error.hpp"

namespace pausecws {

namespace {

int sequence_length(unsigned char lead) noexcept {
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0) return 2;
  if ((lead & 0xF0) == 0xE0) return 3;
  if ((lead & 0xF8) == 0xF0) return 4;
  return 0;
}

struct CodeRange {
  char32_t lo;
  char32_t hi;
};

constexpr CodeRange kPunctuation[] = {
#include "punct_table.inc"
};

}  // namespace

Chars split_utf8(std::string_view text) {
  Chars out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const int len = sequence_length(static_cast<unsigned char>(text[pos]));
    if (len == 0 || pos + len > text.size()) {
      throw Error(ErrorKind::ParseError, "malformed UTF-8 at byte " + std::to_string(pos));
    }
    for (int k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(text[pos + k]) & 0xC0) != 0x80) {
        throw Error(ErrorKind::ParseError, "malformed UTF-8 at byte " + std::to_string(pos + k));
      }
    }
    out.emplace_back(text.substr(pos, len));
    pos += len;
  }
  return out;
}

std::string join_chars(const Chars& chars) {
  std::string out;
  for (const auto& c : chars) out += c;
  return out;
}

char32_t decode_code_point(std::string_view ch) {
  if (ch.empty()) return 0;
  const auto lead = static_cast<unsigned char>(ch[0]);
  const int len = sequence_length(lead);
  if (len == 0 || static_cast<std::size_t>(len) > ch.size()) {
    throw Error(ErrorKind::ParseError, "malformed UTF-8 character");
  }
  if (len == 1) return lead;
  char32_t cp = lead & (0x7F >> len);
  for (int k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(ch[k]) & 0x3F);
  return cp;
}

bool is_punctuation(char32_t cp) noexcept {
  const auto* it = std::upper_bound(std::begin(kPunctuation), std::end(kPunctuation), cp,
                                    [](char32_t v, const CodeRange& r) { return v < r.lo; });
  if (it == std::begin(kPunctuation)) return false;
  --it;
  return cp >= it->lo && cp <= it->hi;
}

}  // namespace pausecws
