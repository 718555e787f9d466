#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sialign/analysis/corpus.hpp"

namespace sialign {

enum class LengthGrouping { Label, Annotator };

inline LengthGrouping parse_grouping(std::string_view s) {
  if (s == "label") return LengthGrouping::Label;
  if (s == "annotator") return LengthGrouping::Annotator;
  throw Error(ErrorCode::InvalidArgument, "unknown group key '" + std::string(s) + "' (expected label or annotator)");
}

struct SpanLengthGroup {
  std::string group;
  Role role = Role::Source;
  std::vector<double> lengths;  // sorted, in tokens
  Summary summary;
};

/// Span lengths in tokens, one sample per (group, side). Unlabeled links are
/// skipped when grouping by label.
inline std::vector<SpanLengthGroup> span_length_distribution(const std::vector<AlignmentDocument>& docs,
                                                             LengthGrouping by) {
  std::map<std::pair<std::string, int>, std::vector<double>> samples;
  for (const auto* d : canonical_order(docs)) {
    if (by == LengthGrouping::Annotator && d->meta.annotator_id.empty())
      throw Error(ErrorCode::InvalidArgument, "document '" + d->pair_id + "' has no annotator id");
    for (const auto& l : d->span_links) {
      std::string key;
      if (by == LengthGrouping::Annotator)
        key = d->meta.annotator_id;
      else if (l.label)
        key = std::string(to_string(*l.label));
      else
        continue;
      if (l.src) samples[{key, 0}].push_back(static_cast<double>(l.src->size()));
      if (l.tgt) samples[{key, 1}].push_back(static_cast<double>(l.tgt->size()));
    }
  }
  std::vector<SpanLengthGroup> out;
  for (auto& [key, v] : samples) {
    std::sort(v.begin(), v.end());
    out.push_back({key.first, key.second == 0 ? Role::Source : Role::Target, v, summarize(v)});
  }
  return out;
}

inline std::vector<SpanLengthGroup> span_length_distribution(const std::vector<AlignmentDocument>& docs,
                                                             std::string_view group_by) {
  return span_length_distribution(docs, parse_grouping(group_by));
}

}  // namespace sialign
