#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "sialign/core/error.hpp"
#include "sialign/core/utf8.hpp"

namespace sialign {

// Moses-style tokenization. Punctuation is split off words, except periods
// inside abbreviations and numbers, commas between digits, hyphens, and
// apostrophes handled per language.

namespace detail {

inline bool in_list(std::string_view word, std::initializer_list<std::string_view> list) {
  return std::find(list.begin(), list.end(), word) != list.end();
}

/// Words that keep a trailing period.
inline bool is_nonbreaking_prefix(std::string_view prefix, std::string_view lang) {
  const auto cps = utf8::decode(prefix);
  if (cps.size() == 1 && utf8::is_upper(cps[0])) return true;  // initials
  if (in_list(prefix, {"Mr", "Mrs", "Ms", "Dr", "Prof", "Sr", "Jr", "St", "vs", "etc", "Inc", "Ltd", "Co",
                       "Mt", "Jan", "Feb", "Mar", "Apr", "Jun", "Jul", "Aug", "Sep", "Sept", "Oct", "Nov",
                       "Dec", "approx", "cca", "ca"}))
    return true;
  if (lang == "cs")
    return in_list(prefix, {"např", "atd", "tzv", "mj", "resp", "tj", "apod", "str", "tzn", "př", "odd", "ing",
                            "Ing", "Mgr", "Bc", "doc", "PhDr", "MUDr", "JUDr", "RNDr", "sv", "č"});
  if (lang == "de")
    return in_list(prefix, {"usw", "bzw", "Nr", "Hr", "Fr", "ggf", "vgl", "evtl", "inkl", "z", "u", "d"});
  if (lang == "fr") return in_list(prefix, {"M", "Mme", "Mlle", "MM", "av", "env", "cf", "p"});
  if (lang == "es") return in_list(prefix, {"Sra", "Srta", "Dña", "Ud", "Uds", "pág", "núm", "aprox"});
  return false;
}

inline bool all_periods(const std::u32string& w) {
  return w.size() >= 2 && std::all_of(w.begin(), w.end(), [](char32_t c) { return c == '.'; });
}

inline bool is_apostrophe(char32_t c) { return c == '\'' || c == 0x2019; }

/// Splits one whitespace-free chunk into tokens (everything except the
/// final-period rule, which needs the following word).
inline void split_chunk(const std::u32string& w, std::string_view lang, std::vector<std::u32string>& out) {
  if (w == U"…" || all_periods(w)) {
    out.push_back(w);
    return;
  }
  std::u32string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  const bool apostrophe_attaches_next = lang == "en";
  const bool apostrophe_attaches_prev = lang == "fr" || lang == "it";
  for (std::size_t i = 0; i < w.size(); ++i) {
    const char32_t c = w[i];
    const char32_t prev = i > 0 ? w[i - 1] : 0;
    const char32_t next = i + 1 < w.size() ? w[i + 1] : 0;
    if (c == '.') {
      if (next == '.') {
        // run of periods becomes one token
        flush();
        std::size_t j = i;
        while (j < w.size() && w[j] == '.') ++j;
        out.push_back(w.substr(i, j - i));
        i = j - 1;
        continue;
      }
      cur.push_back(c);
      continue;
    }
    if (c == ',') {
      if (utf8::is_digit(prev) && utf8::is_digit(next)) {
        cur.push_back(c);
      } else {
        flush();
        out.push_back(U",");
      }
      continue;
    }
    if (c == '-') {
      cur.push_back(c);
      continue;
    }
    if (is_apostrophe(c)) {
      const bool between_letters = utf8::is_alpha(prev) && utf8::is_alpha(next) && !cur.empty();
      if (between_letters && apostrophe_attaches_next) {
        flush();
        cur.push_back(c);
      } else if (between_letters && apostrophe_attaches_prev) {
        cur.push_back(c);
        flush();
      } else {
        flush();
        out.push_back(std::u32string(1, c));
      }
      continue;
    }
    if (utf8::is_punct(c)) {
      flush();
      out.push_back(std::u32string(1, c));
      continue;
    }
    cur.push_back(c);
  }
  flush();
}

inline std::vector<std::string> tokenize_plain(std::string_view text, std::string_view lang) {
  std::vector<std::u32string> pieces;
  const auto cps = utf8::decode(text);
  std::u32string chunk;
  for (std::size_t i = 0; i <= cps.size(); ++i) {
    if (i == cps.size() || utf8::is_space(cps[i])) {
      if (!chunk.empty()) split_chunk(chunk, lang, pieces);
      chunk.clear();
    } else {
      chunk.push_back(cps[i]);
    }
  }

  std::vector<std::string> out;
  out.reserve(pieces.size() + 4);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    if (p.size() >= 2 && p.back() == '.' && !all_periods(p)) {
      const std::u32string prefix = p.substr(0, p.size() - 1);
      const bool dotted_alpha = prefix.find(U'.') != std::u32string::npos &&
                                std::any_of(prefix.begin(), prefix.end(), utf8::is_alpha);
      const bool next_lower = i + 1 < pieces.size() && utf8::is_lower(pieces[i + 1].front());
      const bool keep = dotted_alpha || is_nonbreaking_prefix(utf8::encode(prefix), lang) || next_lower;
      if (!keep) {
        out.push_back(utf8::encode(prefix));
        out.emplace_back(".");
        continue;
      }
    }
    out.push_back(utf8::encode(p));
  }
  return out;
}

}  // namespace detail

/// A run of raw transcript text, flagged when it was enclosed in
/// `[NAME](...)` anonymization markup.
struct MarkupSegment {
  std::string text;
  bool is_name = false;
};

/// Splits a line into plain and `[NAME](...)` segments. With `strict`, an
/// unclosed name group throws; otherwise the remainder is kept as plain text.
inline std::vector<MarkupSegment> split_name_markup(std::string_view line, bool strict) {
  static constexpr std::string_view kOpen = "[NAME](";
  std::vector<MarkupSegment> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const auto open = line.find(kOpen, pos);
    if (open == std::string_view::npos) {
      out.push_back({std::string(line.substr(pos)), false});
      break;
    }
    if (open > pos) out.push_back({std::string(line.substr(pos, open - pos)), false});
    const auto content = open + kOpen.size();
    const auto close = line.find(')', content);
    if (close == std::string_view::npos) {
      if (strict) throw Error(ErrorCode::ParseError, "unclosed [NAME]( markup");
      out.push_back({std::string(line.substr(open)), false});
      break;
    }
    out.push_back({std::string(line.substr(content, close - content)), true});
    pos = close + 1;
  }
  return out;
}

struct MarkedToken {
  std::string surface;
  bool is_name = false;
};

inline std::vector<MarkedToken> tokenize_marked(std::string_view text, std::string_view lang = "en",
                                                bool strict = false) {
  std::vector<MarkedToken> out;
  for (const auto& seg : split_name_markup(text, strict))
    for (auto& tok : detail::tokenize_plain(seg.text, lang)) out.push_back({std::move(tok), seg.is_name});
  return out;
}

/// Tokenizes UTF-8 text. `lang` selects apostrophe handling and the
/// abbreviation list; name markup is removed and its content tokenized.
inline std::vector<std::string> tokenize(std::string_view text, std::string_view lang = "en") {
  std::vector<std::string> out;
  for (auto& t : tokenize_marked(text, lang)) out.push_back(std::move(t.surface));
  return out;
}

/// True when every code point of the token is punctuation. The hesitation
/// marker is not punctuation.
inline bool is_punctuation_token(std::string_view surface) {
  if (surface.empty() || surface == "@") return false;
  for (std::size_t pos = 0; pos < surface.size();)
    if (!utf8::is_punct(utf8::next(surface, pos))) return false;
  return true;
}

}  // namespace sialign
