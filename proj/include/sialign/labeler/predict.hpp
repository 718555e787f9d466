#pragma once

#include <map>
#include <string>
#include <vector>

#include "sialign/labeler/mlp.hpp"
#include "sialign/labeler/train.hpp"

namespace sialign {

/// Span-pair similarity keyed by link id.
using SpanSimilarities = std::map<std::string, double>;

inline double similarity_of(const SpanSimilarities& sims, const SpanLink& l) {
  const auto it = sims.find(l.id);
  if (it == sims.end()) throw Error(ErrorCode::InvalidArgument, "no span similarity for link '" + l.id + "'");
  return it->second;
}

/// One-sided links become ADDU. Two-sided links become TRAN, or the
/// classifier's argmax when `classifier` is given.
inline AlignmentDocument predict_labels(AlignmentDocument doc, const MLPParams* classifier,
                                        const SpanSimilarities& sims) {
  if (classifier) classifier->check();
  Activations a;
  for (auto& l : doc.span_links) {
    if (l.label) throw Error(ErrorCode::InvalidArgument, "link '" + l.id + "' is already labeled");
    if (!l.two_sided()) {
      l.label = Label::ADDU;
    } else if (!classifier) {
      l.label = Label::TRAN;
    } else {
      forward_into(*classifier, extract_features(l, similarity_of(sims, l)), a);
      l.label = predict_class(a.probs);
    }
  }
  return doc;
}

/// Classifier examples from an annotated document: every two-sided link with
/// one of the five classifier labels.
inline std::vector<TrainingExample> training_examples(const AlignmentDocument& doc, const SpanSimilarities& sims) {
  std::vector<TrainingExample> out;
  for (const auto& l : doc.span_links) {
    if (!l.two_sided() || !l.label || !class_index(*l.label)) continue;
    out.push_back({extract_features(l, similarity_of(sims, l)), *l.label});
  }
  return out;
}

}  // namespace sialign
