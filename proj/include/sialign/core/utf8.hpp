#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sialign::utf8 {

/// Decodes one code point starting at `pos` and advances `pos`. Invalid
/// sequences decode byte-wise as U+FFFD so that tokenization never fails.
inline char32_t next(std::string_view s, std::size_t& pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  auto cont = [&](std::size_t k) -> int {
    if (pos + k >= s.size()) return -1;
    const auto b = static_cast<unsigned char>(s[pos + k]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++pos;
    return 0xFFFD;
  }
  for (int k = 1; k < len; ++k) {
    const int c = cont(static_cast<std::size_t>(k));
    if (c < 0) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | static_cast<char32_t>(c);
  }
  pos += static_cast<std::size_t>(len);
  return cp;
}

inline std::vector<char32_t> decode(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  for (std::size_t pos = 0; pos < s.size();) out.push_back(next(s, pos));
  return out;
}

inline void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode(const std::u32string_view cps) {
  std::string out;
  for (char32_t c : cps) append(out, c);
  return out;
}

inline std::size_t length(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t pos = 0; pos < s.size(); ++n) next(s, pos);
  return n;
}

inline bool is_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' || c == 0x00A0 ||
         c == 0x2009 || c == 0x202F || c == 0x3000 || (c >= 0x2000 && c <= 0x200B);
}

inline bool is_digit(char32_t c) { return c >= '0' && c <= '9'; }

/// Punctuation and symbols. Every other non-space code point above ASCII is
/// treated as a word character, which covers the Latin-script languages the
/// tokenizer targets.
inline bool is_punct(char32_t c) {
  if (c < 0x80) return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
                       (c >= 0x7B && c <= 0x7E);
  return c == 0x00A1 || c == 0x00A7 || c == 0x00AB || c == 0x00B0 || c == 0x00B6 || c == 0x00B7 ||
         c == 0x00BB || c == 0x00BF || (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) ||
         (c >= 0x3001 && c <= 0x3003) || (c >= 0x3008 && c <= 0x3011) || c == 0x20AC;
}

inline bool is_alnum(char32_t c) { return !is_space(c) && !is_punct(c); }

inline bool is_alpha(char32_t c) { return is_alnum(c) && !is_digit(c); }

/// Lowercase test covering ASCII and the Latin-1/Latin Extended-A letters
/// used by cs, de, es and fr.
inline bool is_lower(char32_t c) {
  if (c >= 'a' && c <= 'z') return true;
  if (c >= 0xDF && c <= 0xFF && c != 0xF7) return true;
  if (c >= 0x0100 && c <= 0x0137) return c % 2 == 1;
  if (c >= 0x0139 && c <= 0x0148) return c % 2 == 0;
  if (c >= 0x014A && c <= 0x0177) return c % 2 == 1;
  if (c >= 0x0179 && c <= 0x017E) return c % 2 == 0;
  return c == 0x0138 || c == 0x0149 || c == 0x017F;
}

inline bool is_upper(char32_t c) {
  if (c >= 'A' && c <= 'Z') return true;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return true;
  if (c >= 0x0100 && c <= 0x017E) return !is_lower(c);
  return false;
}

}  // namespace sialign::utf8
