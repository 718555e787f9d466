#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sialign/core/error.hpp"
#include "sialign/core/tokenize.hpp"
#include "sialign/core/types.hpp"

namespace sialign {

inline bool is_pause_surface(std::string_view s) {
  if (s == "…") return true;
  return s.size() >= 3 && s.find_first_not_of('.') == std::string_view::npos;
}

/// Parses a one-sentence-per-line transcript. Blank lines are skipped, so
/// line indices count non-empty lines only.
inline TranscriptSide parse_transcript(std::string_view raw, std::string doc_id, std::string lang, Role role) {
  TranscriptSide side;
  side.doc_id = std::move(doc_id);
  side.lang = std::move(lang);
  side.role = role;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= raw.size()) {
    auto eol = raw.find('\n', pos);
    if (eol == std::string_view::npos) eol = raw.size();
    std::string_view line = raw.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;

    std::vector<MarkedToken> toks;
    try {
      toks = tokenize_marked(line, side.lang, /*strict=*/true);
    } catch (const Error&) {
      throw Error(ErrorCode::ParseError, side.doc_id + ":" + std::to_string(line_no) + ": unclosed [NAME]( markup");
    }
    if (!toks.empty()) {
      TokenRange range{side.tokens.size(), side.tokens.size()};
      const std::size_t line_index = side.lines.size();
      for (auto& t : toks) {
        Token tok;
        tok.index = side.tokens.size();
        tok.line_index = line_index;
        tok.is_name = t.is_name;
        tok.is_hesitation = !t.is_name && t.surface == "@";
        tok.is_pause = !t.is_name && is_pause_surface(t.surface);
        tok.surface = std::move(t.surface);
        side.tokens.push_back(std::move(tok));
      }
      range.end = side.tokens.size();
      side.lines.push_back(range);
    }
    if (eol == raw.size()) break;
    pos = eol + 1;
  }
  return side;
}

/// Builds a side from already tokenized lines.
inline TranscriptSide make_side(const std::vector<std::vector<std::string>>& lines, std::string doc_id,
                                std::string lang, Role role) {
  TranscriptSide side;
  side.doc_id = std::move(doc_id);
  side.lang = std::move(lang);
  side.role = role;
  for (const auto& line : lines) {
    TokenRange range{side.tokens.size(), side.tokens.size()};
    for (const auto& s : line) {
      Token tok;
      tok.index = side.tokens.size();
      tok.surface = s;
      tok.line_index = side.lines.size();
      tok.is_hesitation = s == "@";
      tok.is_pause = is_pause_surface(s);
      side.tokens.push_back(std::move(tok));
    }
    range.end = side.tokens.size();
    side.lines.push_back(range);
  }
  return side;
}

/// Text of a token range joined by single spaces.
inline std::string join_tokens(const TranscriptSide& side, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out.push_back(' ');
    out += side.tokens[i].surface;
  }
  return out;
}

inline std::string line_text(const TranscriptSide& side, std::size_t line) {
  return join_tokens(side, side.lines[line].begin, side.lines[line].end);
}

/// Character length (code points) of the side, tokens space-joined per line.
inline std::size_t character_length(const TranscriptSide& side) {
  std::size_t n = 0;
  for (std::size_t l = 0; l < side.lines.size(); ++l) n += utf8::length(line_text(side, l));
  return n;
}

}  // namespace sialign
