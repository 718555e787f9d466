#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "sialign/core/error.hpp"
#include "sialign/core/types.hpp"
#include "sialign/core/validate.hpp"
#include "sialign/metrics/segmentation.hpp"

namespace sialign {

struct LabelScore {
  double accuracy = 0;
  double macro_f1 = 0;
  std::map<Label, double> per_label_f1;
};

struct KappaScore {
  double kappa = 0;
  double observed_agreement = 0;
  double expected_agreement = 0;
};

/// Label of the span covering each token of one side; empty where no
/// labeled span covers the token.
inline std::vector<std::optional<Label>> token_labels(const AlignmentDocument& doc, Role role) {
  std::vector<std::optional<Label>> out(doc.side(role).size());
  for (const auto& l : doc.span_links) {
    const auto& s = l.side(role);
    if (!s) continue;
    for (std::size_t i = s->start; i < std::min(s->end, out.size()); ++i) out[i] = l.label;
  }
  return out;
}

/// Labels for source tokens followed by target tokens. Throws
/// IncompleteAnnotation unless every token carries a label.
inline std::vector<Label> complete_token_labels(const AlignmentDocument& doc) {
  if (!validate_document(doc).is_complete)
    throw Error(ErrorCode::IncompleteAnnotation, "document '" + doc.pair_id + "' is not fully annotated");
  std::vector<Label> out;
  for (Role r : {Role::Source, Role::Target})
    for (const auto& l : token_labels(doc, r)) {
      if (!l) throw Error(ErrorCode::IncompleteAnnotation, "document '" + doc.pair_id + "' has unlabeled spans");
      out.push_back(*l);
    }
  return out;
}

inline LabelScore evaluate_label_sequences(std::span<const Label> ref, std::span<const Label> hyp) {
  if (ref.size() != hyp.size()) throw Error(ErrorCode::SizeMismatch, "label sequences differ in length");
  LabelScore s;
  if (ref.empty()) return s;
  std::map<Label, std::size_t> tp, ref_count, hyp_count;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    ++ref_count[ref[i]];
    ++hyp_count[hyp[i]];
    if (ref[i] == hyp[i]) {
      ++tp[ref[i]];
      ++correct;
    }
  }
  s.accuracy = static_cast<double>(correct) / static_cast<double>(ref.size());
  double sum = 0;
  for (const auto& [label, rc] : ref_count) {
    const double t = static_cast<double>(tp[label]);
    const double p = hyp_count[label] ? t / static_cast<double>(hyp_count[label]) : 0.0;
    const double r = t / static_cast<double>(rc);
    s.per_label_f1[label] = harmonic_mean(p, r);
    sum += s.per_label_f1[label];
  }
  s.macro_f1 = sum / static_cast<double>(ref_count.size());
  return s;
}

/// Token-level label agreement; macro F1 averages the labels present in the
/// reference.
inline LabelScore evaluate_labels(const AlignmentDocument& ref, const AlignmentDocument& hyp) {
  if (ref.source.size() != hyp.source.size() || ref.target.size() != hyp.target.size())
    throw Error(ErrorCode::SizeMismatch, "documents cover different token counts");
  const auto r = complete_token_labels(ref);
  const auto h = complete_token_labels(hyp);
  return evaluate_label_sequences(r, h);
}

/// Cohen's kappa between two categorical sequences.
template <typename T>
KappaScore cohen_kappa(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::SizeMismatch, "kappa sequences differ in length");
  if (a.empty()) throw Error(ErrorCode::InvalidArgument, "kappa needs at least one item");
  std::map<T, std::size_t> ca, cb;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++ca[a[i]];
    ++cb[b[i]];
    if (a[i] == b[i]) ++agree;
  }
  const double n = static_cast<double>(a.size());
  KappaScore k;
  k.observed_agreement = static_cast<double>(agree) / n;
  for (const auto& [cat, count] : ca) {
    const auto it = cb.find(cat);
    if (it != cb.end()) k.expected_agreement += (static_cast<double>(count) / n) * (static_cast<double>(it->second) / n);
  }
  if (k.expected_agreement >= 1.0)
    k.kappa = k.observed_agreement >= 1.0 ? 1.0 : 0.0;
  else
    k.kappa = (k.observed_agreement - k.expected_agreement) / (1.0 - k.expected_agreement);
  return k;
}

template <typename T>
KappaScore cohen_kappa(const std::vector<T>& a, const std::vector<T>& b) {
  return cohen_kappa(std::span<const T>(a), std::span<const T>(b));
}

/// Segmentation agreement on one side: each gap is a binary boundary decision.
inline KappaScore segmentation_kappa(const AlignmentDocument& a, const AlignmentDocument& b, Role role) {
  if (a.side(role).size() != b.side(role).size())
    throw Error(ErrorCode::SizeMismatch, "documents cover different token counts");
  const auto n = a.side(role).size();
  return cohen_kappa(boundary_string(side_spans(a, role), n), boundary_string(side_spans(b, role), n));
}

/// Label agreement on one side, token by token. Uncovered or unlabeled
/// tokens form their own category.
inline KappaScore label_kappa(const AlignmentDocument& a, const AlignmentDocument& b, Role role) {
  if (a.side(role).size() != b.side(role).size())
    throw Error(ErrorCode::SizeMismatch, "documents cover different token counts");
  auto codes = [&](const AlignmentDocument& d) {
    std::vector<int> out;
    for (const auto& l : token_labels(d, role)) out.push_back(l ? static_cast<int>(*l) : -1);
    return out;
  };
  return cohen_kappa(codes(a), codes(b));
}

}  // namespace sialign
