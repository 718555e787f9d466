#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "sialign/core/error.hpp"
#include "sialign/core/transcript.hpp"
#include "sialign/core/types.hpp"

// Canonical alignment file: one UTF-8 JSON document per recording pair.
//
// {
//   "format": "sialign-alignment", "version": 1,
//   "pair_id": "...",
//   "meta": {"interpreter_id", "annotator_id", "relay", "duration_seconds", "split"},
//   "source": {"doc_id", "lang", "lines": [[tok, ...], ...],
//              "flags": {"name": [i, ...], "hesitation": [...], "pause": [...]}},
//   "target": {...},
//   "span_links": [{"id", "label", "src": [start, end] | null, "tgt": [start, end] | null}],
//   "word_links": [{"src", "tgt", "strength", "parent"}]
// }
//
// Flags are sparse token-index lists. Keys are written in the order above so
// identical documents serialize to identical bytes.

namespace sialign {

using ordered_json = nlohmann::ordered_json;

inline constexpr std::string_view kAlignmentFormat = "sialign-alignment";
inline constexpr int kAlignmentVersion = 1;

namespace detail {

inline ordered_json side_to_json(const TranscriptSide& side) {
  ordered_json j;
  j["doc_id"] = side.doc_id;
  j["lang"] = side.lang;
  ordered_json lines = ordered_json::array();
  for (const auto& r : side.lines) {
    ordered_json line = ordered_json::array();
    for (std::size_t i = r.begin; i < r.end; ++i) line.push_back(side.tokens[i].surface);
    lines.push_back(std::move(line));
  }
  j["lines"] = std::move(lines);
  ordered_json name = ordered_json::array(), hes = ordered_json::array(), pause = ordered_json::array();
  for (const auto& t : side.tokens) {
    if (t.is_name) name.push_back(t.index);
    if (t.is_hesitation) hes.push_back(t.index);
    if (t.is_pause) pause.push_back(t.index);
  }
  j["flags"] = {{"name", std::move(name)}, {"hesitation", std::move(hes)}, {"pause", std::move(pause)}};
  return j;
}

inline ordered_json span_to_json(const std::optional<Span>& s) {
  if (!s) return nullptr;
  return ordered_json::array({s->start, s->end});
}

template <typename Json>
const Json& require(const Json& j, const char* key, std::string_view where) {
  if (!j.is_object() || !j.contains(key))
    throw Error(ErrorCode::MalformedDocument, std::string(where) + ": missing field '" + key + "'");
  return j.at(key);
}

template <typename T, typename Json>
T get_as(const Json& j, const char* key, std::string_view where) {
  try {
    return require(j, key, where).template get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, std::string(where) + "." + key + ": " + e.what());
  }
}

inline std::size_t get_index(const nlohmann::json& j, std::string_view where) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    throw Error(ErrorCode::IndexOutOfRange, std::string(where) + ": expected a non-negative integer index");
  return j.get<std::size_t>();
}

inline TranscriptSide side_from_json(const nlohmann::json& j, Role role) {
  const std::string where(to_string(role));
  TranscriptSide side;
  side.role = role;
  side.doc_id = get_as<std::string>(j, "doc_id", where);
  side.lang = get_as<std::string>(j, "lang", where);
  const auto& lines = require(j, "lines", where);
  if (!lines.is_array()) throw Error(ErrorCode::MalformedDocument, where + ".lines must be an array");
  for (const auto& line : lines) {
    if (!line.is_array()) throw Error(ErrorCode::MalformedDocument, where + ".lines entries must be arrays");
    TokenRange r{side.tokens.size(), side.tokens.size()};
    for (const auto& tok : line) {
      if (!tok.is_string() || tok.get<std::string>().empty())
        throw Error(ErrorCode::MalformedDocument, where + ": tokens must be non-empty strings");
      Token t;
      t.index = side.tokens.size();
      t.surface = tok.get<std::string>();
      t.line_index = side.lines.size();
      side.tokens.push_back(std::move(t));
    }
    r.end = side.tokens.size();
    side.lines.push_back(r);
  }
  if (j.contains("flags")) {
    const auto& flags = j.at("flags");
    auto apply = [&](const char* key, bool Token::*field) {
      if (!flags.contains(key)) return;
      for (const auto& v : flags.at(key)) {
        const auto i = get_index(v, where + ".flags." + key);
        if (i >= side.tokens.size())
          throw Error(ErrorCode::IndexOutOfRange, where + ".flags." + key + ": token " + std::to_string(i) +
                                                      " out of range");
        side.tokens[i].*field = true;
      }
    };
    apply("name", &Token::is_name);
    apply("hesitation", &Token::is_hesitation);
    apply("pause", &Token::is_pause);
  }
  return side;
}

inline std::optional<Span> span_from_json(const nlohmann::json& j, std::size_t side_size, std::string_view where) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_array() || j.size() != 2)
    throw Error(ErrorCode::MalformedDocument, std::string(where) + ": span must be [start, end] or null");
  Span s{get_index(j[0], where), get_index(j[1], where)};
  if (s.start >= s.end || s.end > side_size)
    throw Error(ErrorCode::IndexOutOfRange, std::string(where) + ": span [" + std::to_string(s.start) + "," +
                                                std::to_string(s.end) + ") out of range");
  return s;
}

}  // namespace detail

inline ordered_json to_json(const AlignmentDocument& doc) {
  ordered_json j;
  j["format"] = kAlignmentFormat;
  j["version"] = kAlignmentVersion;
  j["pair_id"] = doc.pair_id;
  j["meta"] = {{"interpreter_id", doc.meta.interpreter_id},
               {"annotator_id", doc.meta.annotator_id},
               {"relay", doc.meta.relay ? ordered_json(*doc.meta.relay) : ordered_json(nullptr)},
               {"duration_seconds", doc.meta.duration_seconds},
               {"split", doc.meta.split}};
  j["source"] = detail::side_to_json(doc.source);
  j["target"] = detail::side_to_json(doc.target);
  ordered_json links = ordered_json::array();
  for (const auto& l : doc.span_links) {
    ordered_json lj;
    lj["id"] = l.id;
    lj["label"] = l.label ? ordered_json(std::string(to_string(*l.label))) : ordered_json(nullptr);
    lj["src"] = detail::span_to_json(l.src);
    lj["tgt"] = detail::span_to_json(l.tgt);
    links.push_back(std::move(lj));
  }
  j["span_links"] = std::move(links);
  ordered_json words = ordered_json::array();
  for (const auto& w : doc.word_links) {
    ordered_json wj;
    wj["src"] = w.src;
    wj["tgt"] = w.tgt;
    wj["strength"] = std::string(to_string(w.strength));
    wj["parent"] = w.parent;
    words.push_back(std::move(wj));
  }
  j["word_links"] = std::move(words);
  return j;
}

/// Rejects unknown labels/strengths, out-of-range indices and duplicate ids.
/// Document-level invariants (overlaps, crossing word links) are left to
/// validate_document so that work in progress can be loaded.
inline AlignmentDocument from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::MalformedDocument, "alignment document must be a JSON object");
  if (j.contains("format") && j.at("format") != kAlignmentFormat)
    throw Error(ErrorCode::MalformedDocument, "unexpected format tag");
  if (j.contains("version") && j.at("version") != kAlignmentVersion)
    throw Error(ErrorCode::MalformedDocument, "unsupported version " + j.at("version").dump());

  AlignmentDocument doc;
  doc.pair_id = detail::get_as<std::string>(j, "pair_id", "document");
  if (j.contains("meta")) {
    const auto& m = j.at("meta");
    auto str = [&](const char* key) {
      if (!m.contains(key) || m.at(key).is_null()) return std::string();
      return detail::get_as<std::string>(m, key, "meta");
    };
    doc.meta.interpreter_id = str("interpreter_id");
    doc.meta.annotator_id = str("annotator_id");
    doc.meta.split = str("split");
    if (m.contains("relay") && !m.at("relay").is_null()) doc.meta.relay = detail::get_as<bool>(m, "relay", "meta");
    if (m.contains("duration_seconds")) doc.meta.duration_seconds = detail::get_as<double>(m, "duration_seconds", "meta");
  }
  doc.source = detail::side_from_json(detail::require(j, "source", "document"), Role::Source);
  doc.target = detail::side_from_json(detail::require(j, "target", "document"), Role::Target);

  std::set<std::string> ids;
  for (const auto& lj : detail::require(j, "span_links", "document")) {
    SpanLink l;
    l.id = detail::get_as<std::string>(lj, "id", "span_link");
    if (!ids.insert(l.id).second) throw Error(ErrorCode::DuplicateId, "duplicate span link id '" + l.id + "'");
    const auto& label = detail::require(lj, "label", "span_link");
    if (!label.is_null()) {
      if (!label.is_string()) throw Error(ErrorCode::UnknownLabel, "label must be a string");
      l.label = parse_label(label.get<std::string>());
    }
    l.src = detail::span_from_json(detail::require(lj, "src", "span_link"), doc.source.size(), "span_link.src");
    l.tgt = detail::span_from_json(detail::require(lj, "tgt", "span_link"), doc.target.size(), "span_link.tgt");
    doc.span_links.push_back(std::move(l));
  }
  if (j.contains("word_links")) {
    for (const auto& wj : j.at("word_links")) {
      WordLink w;
      w.src = detail::get_index(detail::require(wj, "src", "word_link"), "word_link.src");
      w.tgt = detail::get_index(detail::require(wj, "tgt", "word_link"), "word_link.tgt");
      if (w.src >= doc.source.size() || w.tgt >= doc.target.size())
        throw Error(ErrorCode::IndexOutOfRange, "word link (" + std::to_string(w.src) + "," +
                                                    std::to_string(w.tgt) + ") out of range");
      w.strength = parse_strength(detail::get_as<std::string>(wj, "strength", "word_link"));
      w.parent = detail::get_as<std::string>(wj, "parent", "word_link");
      doc.word_links.push_back(std::move(w));
    }
  }
  return doc;
}

inline std::string serialize(const AlignmentDocument& doc) { return to_json(doc).dump(1) + "\n"; }

inline AlignmentDocument deserialize(std::string_view bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedDocument, e.what());
  }
  return from_json(j);
}

}  // namespace sialign
