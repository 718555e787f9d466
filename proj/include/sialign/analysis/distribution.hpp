#pragma once

#include <map>
#include <string>
#include <vector>

#include "sialign/analysis/corpus.hpp"
#include "sialign/core/validate.hpp"
#include "sialign/metrics/labels.hpp"

namespace sialign {

struct LabelDistribution {
  std::map<Label, double> source;  // percent of tokens, every label present
  std::map<Label, double> target;
  std::size_t source_tokens = 0;
  std::size_t target_tokens = 0;

  const std::map<Label, double>& side(Role r) const { return r == Role::Source ? source : target; }
};

/// Share of tokens under each label, per side. Every document must be
/// complete.
inline LabelDistribution token_label_distribution(const std::vector<AlignmentDocument>& docs) {
  std::map<Label, std::size_t> counts[2];
  std::size_t totals[2] = {0, 0};
  for (const auto* d : canonical_order(docs)) {
    if (!validate_document(*d).is_complete)
      throw Error(ErrorCode::IncompleteAnnotation, "document '" + d->pair_id + "' is not fully annotated");
    for (int s = 0; s < 2; ++s)
      for (const auto& l : token_labels(*d, s == 0 ? Role::Source : Role::Target)) {
        if (!l) throw Error(ErrorCode::IncompleteAnnotation, "document '" + d->pair_id + "' has unlabeled spans");
        ++counts[s][*l];
        ++totals[s];
      }
  }
  LabelDistribution out;
  out.source_tokens = totals[0];
  out.target_tokens = totals[1];
  for (int s = 0; s < 2; ++s) {
    auto& dst = s == 0 ? out.source : out.target;
    for (Label l : kAllLabels)
      dst[l] = totals[s] ? 100.0 * static_cast<double>(counts[s][l]) / static_cast<double>(totals[s]) : 0.0;
  }
  return out;
}

struct LengthRatio {
  double ratio = 0;
  std::size_t links = 0;
  std::size_t source_tokens = 0;
  std::size_t target_tokens = 0;
};

/// Per label, the source-length weighted mean of tgt/src span lengths, which
/// reduces to sum(tgt) / sum(src). One-sided and unlabeled links are ignored;
/// labels without links are left out.
inline std::map<Label, LengthRatio> weighted_length_ratio(const std::vector<AlignmentDocument>& docs) {
  std::map<Label, LengthRatio> out;
  for (const auto* d : canonical_order(docs))
    for (const auto& l : d->span_links) {
      if (!l.two_sided() || !l.label || l.src->size() == 0) continue;
      auto& r = out[*l.label];
      ++r.links;
      r.source_tokens += l.src->size();
      r.target_tokens += l.tgt->size();
    }
  for (auto& [label, r] : out) r.ratio = static_cast<double>(r.target_tokens) / static_cast<double>(r.source_tokens);
  return out;
}

}  // namespace sialign
