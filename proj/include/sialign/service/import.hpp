#pragma once

// Dataset import. A directory (searched recursively) may hold canonical
// alignment files (*.json) and plain transcript pairs named
// <pair>.source.<lang>.txt / <pair>.target.<lang>.txt. Transcript pairs become
// documents without links.

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sialign/core/io.hpp"
#include "sialign/core/transcript.hpp"
#include "sialign/core/validate.hpp"
#include "sialign/service/edit.hpp"

namespace sialign {

struct ImportFailure {
  std::string file;
  std::string message;
};

struct ImportSummaryRow {
  std::string source_lang;
  std::string target_lang;
  std::size_t recordings = 0;
  double duration_seconds = 0;
  std::size_t source_tokens = 0;
  std::size_t target_tokens = 0;
};

struct ImportResult {
  std::vector<StoredDocument> documents;  // sorted by id, revision 0
  std::vector<ImportFailure> failures;
  std::vector<ImportSummaryRow> summary;  // one row per (source, target) language pair, plus a total
};

inline std::string format_duration(double seconds) {
  const auto total = static_cast<long long>(std::llround(seconds));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld", total / 3600, total / 60 % 60, total % 60);
  return buf;
}

namespace detail {

struct TranscriptFile {
  std::string pair;
  Role role;
  std::string lang;
};

/// Splits "<pair>.<source|target>.<lang>.txt".
inline std::optional<TranscriptFile> transcript_file_name(const std::string& name) {
  if (name.size() < 4 || name.compare(name.size() - 4, 4, ".txt") != 0) return std::nullopt;
  const auto stem = name.substr(0, name.size() - 4);
  const auto dot_lang = stem.rfind('.');
  if (dot_lang == std::string::npos || dot_lang == 0) return std::nullopt;
  const auto dot_role = stem.rfind('.', dot_lang - 1);
  if (dot_role == std::string::npos || dot_role == 0) return std::nullopt;
  const auto role = stem.substr(dot_role + 1, dot_lang - dot_role - 1);
  if (role != "source" && role != "target") return std::nullopt;
  return TranscriptFile{stem.substr(0, dot_role), role == "source" ? Role::Source : Role::Target,
                        stem.substr(dot_lang + 1)};
}

}  // namespace detail

inline ImportResult import_dataset(const std::filesystem::path& dir, const std::string& timestamp = utc_timestamp()) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::Io, "'" + dir.string() + "' is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());

  ImportResult out;
  std::map<std::string, std::pair<std::string, AlignmentDocument>> docs;  // id -> (file, doc)
  auto accept = [&](const std::string& file, AlignmentDocument doc) {
    const auto report = validate_document(doc);
    if (!report.ok()) {
      std::string msg = "invalid document";
      for (const auto& e : report.errors) msg += "; " + e.code + ": " + e.message;
      out.failures.push_back({file, msg});
    } else if (docs.count(doc.pair_id)) {
      out.failures.push_back({file, "duplicate pair id '" + doc.pair_id + "' (first in " + docs[doc.pair_id].first + ")"});
    } else {
      auto id = doc.pair_id;
      docs.emplace(std::move(id), std::make_pair(file, std::move(doc)));
    }
  };

  std::map<std::string, std::map<Role, std::filesystem::path>> transcripts;
  for (const auto& path : files) {
    const auto name = path.filename().string();
    if (path.extension() == ".json") {
      try {
        accept(path.string(), load_document(path));
      } catch (const Error& e) {
        out.failures.push_back({path.string(), e.what()});
      }
    } else if (const auto t = detail::transcript_file_name(name)) {
      auto& slot = transcripts[(path.parent_path() / t->pair).string()];
      if (slot.count(t->role))
        out.failures.push_back({path.string(), "second " + std::string(to_string(t->role)) + " transcript for '" + t->pair + "'"});
      else
        slot[t->role] = path;
    }
  }
  for (const auto& [key, sides] : transcripts) {
    const auto pair = std::filesystem::path(key).filename().string();
    if (sides.size() != 2) {
      const auto& [role, path] = *sides.begin();
      out.failures.push_back({path.string(), "no matching " + std::string(role == Role::Source ? "target" : "source") +
                                                 " transcript for '" + pair + "'"});
      continue;
    }
    try {
      AlignmentDocument doc;
      doc.pair_id = pair;
      for (const auto& [role, path] : sides) {
        const auto t = *detail::transcript_file_name(path.filename().string());
        doc.side(role) = parse_transcript(read_file(path), pair + "." + std::string(to_string(role)), t.lang, role);
      }
      accept(sides.at(Role::Source).string(), std::move(doc));
    } catch (const Error& e) {
      out.failures.push_back({sides.at(Role::Source).string(), e.what()});
    }
  }

  std::map<std::pair<std::string, std::string>, ImportSummaryRow> rows;
  ImportSummaryRow total{"all", "all"};
  for (auto& [id, entry] : docs) {
    auto& doc = entry.second;
    auto& row = rows[{doc.source.lang, doc.target.lang}];
    row.source_lang = doc.source.lang;
    row.target_lang = doc.target.lang;
    for (auto* r : {&row, &total}) {
      ++r->recordings;
      r->duration_seconds += doc.meta.duration_seconds;
      r->source_tokens += doc.source.size();
      r->target_tokens += doc.target.size();
    }
    out.documents.push_back({std::move(doc), 0, timestamp});
  }
  for (auto& [key, row] : rows) out.summary.push_back(row);
  out.summary.push_back(total);
  return out;
}

inline void write_import_summary(std::ostream& out, const ImportResult& r) {
  out << "src\ttgt\trecordings\tduration\tsrc_tokens\ttgt_tokens\n";
  for (const auto& row : r.summary)
    out << row.source_lang << '\t' << row.target_lang << '\t' << row.recordings << '\t'
        << format_duration(row.duration_seconds) << '\t' << row.source_tokens << '\t' << row.target_tokens << '\n';
  for (const auto& f : r.failures) out << "skipped\t" << f.file << '\t' << f.message << '\n';
}

}  // namespace sialign
