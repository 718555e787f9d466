#pragma once

// Annotation edits with optimistic concurrency on a per-document revision.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "sialign/core/serialize.hpp"
#include "sialign/core/validate.hpp"

namespace sialign {

enum class EditKind { CreateSpanLink, DeleteSpanLink, RelabelLink, CreateWordLink, DeleteWordLink, SetStrength };

inline std::string_view to_string(EditKind k) {
  switch (k) {
    case EditKind::CreateSpanLink: return "create_span_link";
    case EditKind::DeleteSpanLink: return "delete_span_link";
    case EditKind::RelabelLink: return "relabel_link";
    case EditKind::CreateWordLink: return "create_word_link";
    case EditKind::DeleteWordLink: return "delete_word_link";
    case EditKind::SetStrength: return "set_strength";
  }
  return "?";
}

inline EditKind parse_edit_kind(std::string_view s) {
  for (auto k : {EditKind::CreateSpanLink, EditKind::DeleteSpanLink, EditKind::RelabelLink, EditKind::CreateWordLink,
                 EditKind::DeleteWordLink, EditKind::SetStrength})
    if (to_string(k) == s) return k;
  throw Error(ErrorCode::InvalidArgument, "unknown edit kind '" + std::string(s) + "'");
}

/// Payload fields per kind:
///   create_span_link  {id?, src: [s, e] | null, tgt: [s, e] | null, label}
///   delete_span_link  {id}
///   relabel_link      {id, label}
///   create_word_link  {src, tgt, strength?, parent?}  parent defaults to the
///                     link covering both tokens
///   delete_word_link  {src, tgt}
///   set_strength      {src, tgt, strength}
struct Edit {
  EditKind kind = EditKind::CreateSpanLink;
  nlohmann::json payload = nlohmann::json::object();
  std::uint64_t client_revision = 0;
};

inline Edit edit_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "edit must be a JSON object");
  Edit e;
  try {
    e.kind = parse_edit_kind(j.at("kind").get<std::string>());
    e.client_revision = j.at("client_revision").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::InvalidArgument, std::string("edit: ") + ex.what());
  }
  if (j.contains("payload")) e.payload = j.at("payload");
  if (!e.payload.is_object()) throw Error(ErrorCode::InvalidArgument, "edit payload must be an object");
  return e;
}

inline nlohmann::json to_json(const Edit& e) {
  return {{"kind", to_string(e.kind)}, {"client_revision", e.client_revision}, {"payload", e.payload}};
}

struct StoredDocument {
  AlignmentDocument document;
  std::uint64_t revision = 0;
  std::string updated_at;

  bool operator==(const StoredDocument&) const = default;
};

/// Thrown for edits that would break a document invariant.
class EditRejected : public Error {
 public:
  EditRejected(const std::string& message, ValidationReport report)
      : Error(ErrorCode::Rejected, message), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

inline std::string utc_timestamp(std::chrono::system_clock::time_point t = std::chrono::system_clock::now()) {
  const std::time_t secs = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline nlohmann::json to_json(const ValidationReport& r) {
  nlohmann::json errors = nlohmann::json::array();
  for (const auto& e : r.errors) errors.push_back({{"code", e.code}, {"message", e.message}, {"ids", e.ids}});
  return {{"ok", r.ok()}, {"is_complete", r.is_complete}, {"errors", errors}};
}

namespace detail {

template <typename T>
T payload_get(const nlohmann::json& p, const char* key) {
  if (!p.contains(key)) throw Error(ErrorCode::InvalidArgument, std::string("edit payload: missing '") + key + "'");
  try {
    return p.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("edit payload.") + key + ": " + e.what());
  }
}

[[noreturn]] inline void reject(std::string code, const std::string& message, std::vector<std::string> ids = {}) {
  ValidationReport r;
  r.errors.push_back({std::move(code), message, std::move(ids)});
  throw EditRejected(message, std::move(r));
}

inline SpanLink& find_link(AlignmentDocument& doc, const std::string& id) {
  for (auto& l : doc.span_links)
    if (l.id == id) return l;
  reject("UNKNOWN_LINK", "no span link '" + id + "'", {id});
}

inline std::vector<WordLink>::iterator find_word_link(AlignmentDocument& doc, std::size_t src, std::size_t tgt) {
  auto it = std::find_if(doc.word_links.begin(), doc.word_links.end(),
                         [&](const WordLink& w) { return w.src == src && w.tgt == tgt; });
  if (it == doc.word_links.end())
    reject("UNKNOWN_WORD_LINK", "no word link " + std::to_string(src) + "-" + std::to_string(tgt));
  return it;
}

inline std::optional<Span> payload_span(const nlohmann::json& p, const char* key, std::size_t side_size) {
  if (!p.contains(key)) return std::nullopt;
  try {
    return span_from_json(p.at(key), side_size, std::string("edit payload.") + key);
  } catch (const Error& e) {
    reject("INVALID_SPAN", e.what());
  }
}

inline std::string fresh_link_id(const AlignmentDocument& doc) {
  for (std::size_t n = doc.span_links.size() + 1;; ++n) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "L%04zu", n);
    if (!doc.find_link(buf)) return buf;
  }
}

inline void apply_payload(AlignmentDocument& doc, const Edit& edit) {
  const auto& p = edit.payload;
  switch (edit.kind) {
    case EditKind::CreateSpanLink: {
      SpanLink l;
      l.id = p.contains("id") ? payload_get<std::string>(p, "id") : fresh_link_id(doc);
      if (l.id.empty()) throw Error(ErrorCode::InvalidArgument, "edit payload: empty link id");
      if (doc.find_link(l.id)) reject("DUPLICATE_LINK_ID", "span link '" + l.id + "' already exists", {l.id});
      l.src = payload_span(p, "src", doc.source.size());
      l.tgt = payload_span(p, "tgt", doc.target.size());
      try {
        l.label = parse_label(payload_get<std::string>(p, "label"));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::UnknownLabel) throw;
        reject("UNKNOWN_LABEL", e.what(), {l.id});
      }
      doc.span_links.push_back(std::move(l));
      break;
    }
    case EditKind::DeleteSpanLink: {
      const auto id = payload_get<std::string>(p, "id");
      find_link(doc, id);
      std::erase_if(doc.span_links, [&](const SpanLink& l) { return l.id == id; });
      std::erase_if(doc.word_links, [&](const WordLink& w) { return w.parent == id; });
      break;
    }
    case EditKind::RelabelLink: {
      auto& l = find_link(doc, payload_get<std::string>(p, "id"));
      try {
        l.label = parse_label(payload_get<std::string>(p, "label"));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::UnknownLabel) throw;
        reject("UNKNOWN_LABEL", e.what(), {l.id});
      }
      break;
    }
    case EditKind::CreateWordLink: {
      WordLink w;
      w.src = payload_get<std::size_t>(p, "src");
      w.tgt = payload_get<std::size_t>(p, "tgt");
      if (p.contains("strength")) w.strength = parse_strength(payload_get<std::string>(p, "strength"));
      if (p.contains("parent")) {
        w.parent = payload_get<std::string>(p, "parent");
        find_link(doc, w.parent);
      } else {
        for (const auto& l : doc.span_links)
          if (l.two_sided() && l.src->contains(w.src) && l.tgt->contains(w.tgt)) w.parent = l.id;
        if (w.parent.empty())
          reject("WORD_LINK_CROSSES_SPANS", "tokens " + std::to_string(w.src) + " and " + std::to_string(w.tgt) +
                                                " are not inside one span link");
      }
      doc.word_links.push_back(std::move(w));
      break;
    }
    case EditKind::DeleteWordLink:
      doc.word_links.erase(find_word_link(doc, payload_get<std::size_t>(p, "src"), payload_get<std::size_t>(p, "tgt")));
      break;
    case EditKind::SetStrength: {
      auto it = find_word_link(doc, payload_get<std::size_t>(p, "src"), payload_get<std::size_t>(p, "tgt"));
      it->strength = parse_strength(payload_get<std::string>(p, "strength"));
      break;
    }
  }
}

}  // namespace detail

/// Applies `edit` to a copy of `doc`. Throws CONFLICT on a stale revision and
/// EditRejected when the edit introduces a validation error. Incomplete
/// coverage is allowed, and errors already present in `doc` do not block
/// unrelated edits.
inline StoredDocument apply_edit(const StoredDocument& doc, const Edit& edit, std::string timestamp = utc_timestamp()) {
  if (edit.client_revision != doc.revision)
    throw Error(ErrorCode::Conflict, "document '" + doc.document.pair_id + "' is at revision " +
                                         std::to_string(doc.revision) + ", edit was made against " +
                                         std::to_string(edit.client_revision));
  StoredDocument out{doc.document, doc.revision + 1, std::move(timestamp)};
  try {
    detail::apply_payload(out.document, edit);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UnknownStrength) detail::reject("UNKNOWN_STRENGTH", e.what());
    throw;
  }
  const auto before = validate_document(doc.document);
  auto after = validate_document(out.document);
  std::vector<ValidationIssue> introduced;
  for (const auto& e : after.errors)
    if (std::find(before.errors.begin(), before.errors.end(), e) == before.errors.end()) introduced.push_back(e);
  if (!introduced.empty()) {
    std::string msg = std::string(to_string(edit.kind)) + " rejected";
    for (const auto& e : introduced) msg += "; " + e.code + ": " + e.message;
    after.errors = std::move(introduced);
    throw EditRejected(msg, std::move(after));
  }
  return out;
}

}  // namespace sialign
