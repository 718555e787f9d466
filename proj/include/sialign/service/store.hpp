#pragma once

// On-disk document store:
//   <root>/documents/<id>.json   {"revision", "updated_at", "document"}
//   <root>/manifest.json         id, revision and sides of every document
// Document files are the source of truth; the manifest is rewritten after
// every change. All writes go through write_file_atomic.

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "sialign/core/io.hpp"
#include "sialign/core/log.hpp"
#include "sialign/service/edit.hpp"

namespace sialign {

inline bool is_valid_document_id(std::string_view id) {
  if (id.empty() || id.size() > 200 || id.front() == '.') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
           c == '.';
  });
}

inline std::string encode_envelope(const StoredDocument& d) {
  ordered_json j;
  j["revision"] = d.revision;
  j["updated_at"] = d.updated_at;
  j["document"] = to_json(d.document);
  return j.dump(1) + "\n";
}

inline StoredDocument decode_envelope(std::string_view bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedDocument, e.what());
  }
  StoredDocument d;
  d.revision = detail::get_as<std::uint64_t>(j, "revision", "stored document");
  d.updated_at = detail::get_as<std::string>(j, "updated_at", "stored document");
  d.document = from_json(detail::require(j, "document", "stored document"));
  return d;
}

class DocumentStore {
 public:
  explicit DocumentStore(std::filesystem::path root) : root_(std::move(root)) {
    std::error_code ec;
    std::filesystem::create_directories(docs_dir(), ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create '" + docs_dir().string() + "': " + ec.message());
    for (const auto& entry : std::filesystem::directory_iterator(docs_dir())) {
      const auto& path = entry.path();
      if (path.extension() != ".json") continue;
      try {
        auto doc = decode_envelope(read_file(path));
        const auto id = path.stem().string();
        if (doc.document.pair_id != id) throw Error(ErrorCode::MalformedDocument, "pair_id does not match file name");
        entries_[id] = std::make_shared<Entry>(std::move(doc));
      } catch (const Error& e) {
        warn("skipping stored document '" + path.string() + "': " + e.what());
      }
    }
    write_manifest();
  }

  const std::filesystem::path& root() const { return root_; }

  std::vector<std::string> ids() const {
    std::shared_lock lock(map_mutex_);
    std::vector<std::string> out;
    for (const auto& [id, e] : entries_) out.push_back(id);
    return out;
  }

  bool contains(const std::string& id) const {
    std::shared_lock lock(map_mutex_);
    return entries_.count(id) > 0;
  }

  /// Snapshot of the current state; later edits do not affect it.
  std::shared_ptr<const StoredDocument> get(const std::string& id) const { return entry(id)->snapshot(); }

  /// Registers a new document at revision 0.
  std::shared_ptr<const StoredDocument> add(AlignmentDocument doc) {
    const auto id = doc.pair_id;
    if (!is_valid_document_id(id))
      throw Error(ErrorCode::InvalidArgument, "'" + id + "' is not usable as a document id");
    auto stored = std::make_shared<const StoredDocument>(StoredDocument{std::move(doc), 0, utc_timestamp()});
    {
      std::unique_lock lock(map_mutex_);
      if (entries_.count(id)) throw Error(ErrorCode::DuplicateId, "document '" + id + "' already exists");
      write_file_atomic(doc_path(id), encode_envelope(*stored));
      entries_[id] = std::make_shared<Entry>(*stored);
    }
    write_manifest();
    return stored;
  }

  /// Applies an edit under the document's write lock and persists it before
  /// publishing the new snapshot.
  std::shared_ptr<const StoredDocument> apply(const std::string& id, const Edit& edit) {
    auto e = entry(id);
    std::shared_ptr<const StoredDocument> next;
    {
      std::lock_guard write(e->write_mutex);
      next = std::make_shared<const StoredDocument>(apply_edit(*e->snapshot(), edit));
      write_file_atomic(doc_path(id), encode_envelope(*next));
      e->publish(next);
    }
    write_manifest();
    return next;
  }

 private:
  struct Entry {
    explicit Entry(StoredDocument d) : current(std::make_shared<const StoredDocument>(std::move(d))) {}
    std::shared_ptr<const StoredDocument> snapshot() const {
      std::lock_guard lock(read_mutex);
      return current;
    }
    void publish(std::shared_ptr<const StoredDocument> d) {
      std::lock_guard lock(read_mutex);
      current = std::move(d);
    }
    std::mutex write_mutex;
    mutable std::mutex read_mutex;  // guards the pointer swap only
    std::shared_ptr<const StoredDocument> current;
  };

  std::filesystem::path docs_dir() const { return root_ / "documents"; }
  std::filesystem::path doc_path(const std::string& id) const { return docs_dir() / (id + ".json"); }

  std::shared_ptr<Entry> entry(const std::string& id) const {
    std::shared_lock lock(map_mutex_);
    const auto it = entries_.find(id);
    if (it == entries_.end()) throw Error(ErrorCode::NotFound, "no document '" + id + "'");
    return it->second;
  }

  void write_manifest() {
    std::lock_guard lock(manifest_mutex_);
    ordered_json docs = ordered_json::array();
    std::shared_lock map_lock(map_mutex_);
    for (const auto& [id, e] : entries_) {
      const auto s = e->snapshot();
      docs.push_back({{"id", id},
                      {"revision", s->revision},
                      {"updated_at", s->updated_at},
                      {"source", s->document.source.doc_id},
                      {"target", s->document.target.doc_id}});
    }
    map_lock.unlock();
    ordered_json j;
    j["format"] = "sialign-store";
    j["version"] = 1;
    j["documents"] = std::move(docs);
    write_file_atomic(root_ / "manifest.json", j.dump(1) + "\n");
  }

  std::filesystem::path root_;
  mutable std::shared_mutex map_mutex_;
  std::mutex manifest_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> entries_;
};

}  // namespace sialign
