#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sialign/core/error.hpp"

namespace sialign {

enum class Role { Source, Target };

inline std::string_view to_string(Role role) { return role == Role::Source ? "source" : "target"; }

inline Role parse_role(std::string_view s) {
  if (s == "source" || s == "src") return Role::Source;
  if (s == "target" || s == "tgt") return Role::Target;
  throw Error(ErrorCode::InvalidArgument, "unknown role '" + std::string(s) + "'");
}

struct Token {
  std::size_t index = 0;
  std::string surface;
  std::size_t line_index = 0;
  bool is_name = false;
  bool is_hesitation = false;
  bool is_pause = false;

  bool operator==(const Token&) const = default;
};

/// Half-open range of token indices.
struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
  bool contains(std::size_t i) const { return i >= begin && i < end; }
  bool operator==(const TokenRange&) const = default;
};

struct TranscriptSide {
  std::string doc_id;
  std::string lang;
  Role role = Role::Source;
  std::vector<Token> tokens;
  std::vector<TokenRange> lines;

  std::size_t size() const { return tokens.size(); }
  bool operator==(const TranscriptSide&) const = default;
};

/// Span labels in the order of the annotation taxonomy.
enum class Label { TRAN, PARA, SUM, GEN, ADDF, ADDU, REPL };

inline constexpr std::array<Label, 7> kAllLabels = {Label::TRAN, Label::PARA, Label::SUM, Label::GEN,
                                                    Label::ADDF, Label::ADDU, Label::REPL};

inline constexpr bool is_addition(Label l) { return l == Label::ADDF || l == Label::ADDU; }

inline std::string_view to_string(Label l) {
  switch (l) {
    case Label::TRAN: return "TRAN";
    case Label::PARA: return "PARA";
    case Label::SUM: return "SUM";
    case Label::GEN: return "GEN";
    case Label::ADDF: return "ADDF";
    case Label::ADDU: return "ADDU";
    case Label::REPL: return "REPL";
  }
  return "?";
}

inline std::optional<Label> try_parse_label(std::string_view s) {
  for (Label l : kAllLabels)
    if (to_string(l) == s) return l;
  return std::nullopt;
}

inline Label parse_label(std::string_view s) {
  if (auto l = try_parse_label(s)) return *l;
  throw Error(ErrorCode::UnknownLabel, "unknown label '" + std::string(s) + "'");
}

inline std::string_view describe(Label l) {
  switch (l) {
    case Label::TRAN: return "Translation: direct translation that holds outside of any additional context";
    case Label::PARA: return "Paraphrase: equivalent meaning in the context, but not a direct translation";
    case Label::SUM: return "Summarization: equivalent meaning expressed in fewer words";
    case Label::GEN: return "Generalization: one side of the pair is less specific";
    case Label::ADDF: return "Factual addition: one-sided span that changes the conveyed information";
    case Label::ADDU: return "Uninformative addition: one-sided span that does not change the meaning";
    case Label::REPL: return "Replacement: obvious error such as a misheard number, place or name";
  }
  return "";
}

struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool contains(std::size_t i) const { return i >= start && i < end; }
  bool overlaps(const Span& o) const { return start < o.end && o.start < end; }
  bool operator==(const Span&) const = default;
};

/// A link between a source span and a target span. One-sided links carry an
/// addition label. Links produced by the automatic pipeline before labeling
/// have no label yet.
struct SpanLink {
  std::string id;
  std::optional<Span> src;
  std::optional<Span> tgt;
  std::optional<Label> label;

  bool two_sided() const { return src.has_value() && tgt.has_value(); }
  const std::optional<Span>& side(Role r) const { return r == Role::Source ? src : tgt; }
  bool operator==(const SpanLink&) const = default;
};

enum class Strength { Sure, Possible };

inline std::string_view to_string(Strength s) { return s == Strength::Sure ? "sure" : "possible"; }

inline Strength parse_strength(std::string_view s) {
  if (s == "sure" || s == "S") return Strength::Sure;
  if (s == "possible" || s == "P") return Strength::Possible;
  throw Error(ErrorCode::UnknownStrength, "unknown word link strength '" + std::string(s) + "'");
}

struct WordLink {
  std::size_t src = 0;
  std::size_t tgt = 0;
  Strength strength = Strength::Sure;
  std::string parent;

  bool operator==(const WordLink&) const = default;
};

struct DocumentMeta {
  std::string interpreter_id;
  std::string annotator_id;
  std::optional<bool> relay;  // absent when unknown
  double duration_seconds = 0.0;
  /// Dataset split ("dev", "test", ...); empty when unknown.
  std::string split;

  bool operator==(const DocumentMeta&) const = default;
};

struct AlignmentDocument {
  std::string pair_id;
  TranscriptSide source;
  TranscriptSide target;
  std::vector<SpanLink> span_links;
  std::vector<WordLink> word_links;
  DocumentMeta meta;

  const TranscriptSide& side(Role r) const { return r == Role::Source ? source : target; }
  TranscriptSide& side(Role r) { return r == Role::Source ? source : target; }

  const SpanLink* find_link(std::string_view id) const {
    for (const auto& l : span_links)
      if (l.id == id) return &l;
    return nullptr;
  }

  bool operator==(const AlignmentDocument&) const = default;
};

}  // namespace sialign
