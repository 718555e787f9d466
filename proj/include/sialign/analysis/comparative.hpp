#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sialign/analysis/corpus.hpp"
#include "sialign/core/log.hpp"
#include "sialign/core/transcript.hpp"
#include "sialign/metrics/labels.hpp"
#include "sialign/metrics/span_alignment.hpp"

namespace sialign {

struct RelayGroup {
  std::size_t documents = 0;
  double mean_char_ratio = 0;            // interpretation / source, characters
  std::map<Label, double> label_share;   // percent of labeled links
};

struct RelayReport {
  RelayGroup direct;
  RelayGroup relay;
};

struct MultiTrackRow {
  std::string source_doc;
  std::string lang;
  std::string first;   // target doc ids, lexicographic order
  std::string second;
  double char_ratio = 0;   // first / second
  double token_ratio = 0;
};

struct AgreementRow {
  std::string source_doc;
  std::string target_doc;
  std::string annotator_a;
  std::string annotator_b;
  KappaScore segmentation[2];  // source, target
  KappaScore labels[2];
  SpanAlignScore a_as_reference;
  SpanAlignScore b_as_reference;
};

struct ComparativeReport {
  std::optional<RelayReport> relay;  // absent without relay metadata
  std::vector<MultiTrackRow> multi_track;
};

inline double char_ratio(const AlignmentDocument& d) {
  const auto src = character_length(d.source);
  if (src == 0) throw Error(ErrorCode::InvalidArgument, "document '" + d.pair_id + "' has an empty source");
  return static_cast<double>(character_length(d.target)) / static_cast<double>(src);
}

/// Direct vs relay interpreting. Documents without the relay flag are left
/// out with a warning; without any flagged document there is no report.
inline std::optional<RelayReport> relay_report(const std::vector<AlignmentDocument>& docs) {
  std::size_t missing = 0;
  double ratio_sum[2] = {0, 0};
  std::map<Label, std::size_t> label_counts[2];
  std::size_t link_totals[2] = {0, 0};
  RelayReport r;
  for (const auto* d : canonical_order(docs)) {
    if (!d->meta.relay) {
      ++missing;
      continue;
    }
    const int g = *d->meta.relay ? 1 : 0;
    auto& group = g ? r.relay : r.direct;
    ++group.documents;
    ratio_sum[g] += char_ratio(*d);
    for (const auto& l : d->span_links)
      if (l.label) {
        ++label_counts[g][*l.label];
        ++link_totals[g];
      }
  }
  if (missing == docs.size()) {
    warn("no relay metadata, skipping the direct/relay report");
    return std::nullopt;
  }
  if (missing) warn(std::to_string(missing) + " document(s) without relay metadata left out of the direct/relay report");
  for (int g = 0; g < 2; ++g) {
    auto& group = g ? r.relay : r.direct;
    if (group.documents) group.mean_char_ratio = ratio_sum[g] / static_cast<double>(group.documents);
    for (Label l : kAllLabels)
      group.label_share[l] = link_totals[g] ? 100.0 * static_cast<double>(label_counts[g][l]) /
                                                  static_cast<double>(link_totals[g])
                                            : 0.0;
  }
  return r;
}

/// Interpretations of the same source into the same language by different
/// interpreters. Every pair of distinct target documents gives one row.
inline std::vector<MultiTrackRow> multi_track_report(const std::vector<AlignmentDocument>& docs) {
  std::map<std::pair<std::string, std::string>, std::map<std::string, const AlignmentDocument*>> tracks;
  for (const auto* d : canonical_order(docs)) tracks[{d->source.doc_id, d->target.lang}].emplace(d->target.doc_id, d);
  std::vector<MultiTrackRow> out;
  for (const auto& [key, targets] : tracks)
    for (auto a = targets.begin(); a != targets.end(); ++a)
      for (auto b = std::next(a); b != targets.end(); ++b) {
        const auto& x = a->second->target;
        const auto& y = b->second->target;
        if (character_length(y) == 0 || y.size() == 0) continue;
        out.push_back({key.first, key.second, a->first, b->first,
                       static_cast<double>(character_length(x)) / static_cast<double>(character_length(y)),
                       static_cast<double>(x.size()) / static_cast<double>(y.size())});
      }
  return out;
}

/// Agreement between annotators of the same recording (same source and
/// target document ids).
inline std::vector<AgreementRow> agreement_report(const std::vector<AlignmentDocument>& docs) {
  std::map<std::pair<std::string, std::string>, std::map<std::string, const AlignmentDocument*>> by_recording;
  for (const auto* d : canonical_order(docs))
    if (!d->meta.annotator_id.empty())
      by_recording[{d->source.doc_id, d->target.doc_id}].emplace(d->meta.annotator_id, d);
  std::vector<AgreementRow> out;
  for (const auto& [key, annotations] : by_recording)
    for (auto a = annotations.begin(); a != annotations.end(); ++a)
      for (auto b = std::next(a); b != annotations.end(); ++b) {
        const auto& x = *a->second;
        const auto& y = *b->second;
        if (x.source.size() != y.source.size() || x.target.size() != y.target.size()) {
          warn("annotations '" + x.pair_id + "' and '" + y.pair_id + "' tokenize differently, no agreement computed");
          continue;
        }
        AgreementRow row{key.first, key.second, a->first, b->first, {}, {}, {}, {}};
        for (int s = 0; s < 2; ++s) {
          const Role role = s == 0 ? Role::Source : Role::Target;
          row.segmentation[s] = segmentation_kappa(x, y, role);
          row.labels[s] = label_kappa(x, y, role);
        }
        if (!x.span_links.empty()) row.a_as_reference = evaluate_span_alignment(x.span_links, y.span_links);
        if (!y.span_links.empty()) row.b_as_reference = evaluate_span_alignment(y.span_links, x.span_links);
        out.push_back(row);
      }
  return out;
}

inline ComparativeReport comparative_reports(const std::vector<AlignmentDocument>& docs) {
  return {relay_report(docs), multi_track_report(docs)};
}

}  // namespace sialign
