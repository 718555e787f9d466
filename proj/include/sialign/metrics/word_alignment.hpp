#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "sialign/core/log.hpp"
#include "sialign/core/types.hpp"
#include "sialign/metrics/segmentation.hpp"

namespace sialign {

using TokenPair = std::pair<std::size_t, std::size_t>;
using PairSet = std::set<TokenPair>;

/// `recall` and `f1` are empty when the sure set is empty but predictions
/// exist; such recordings are left out of macro averages.
struct WordAlignScore {
  double aer = 0;
  double precision = 0;
  std::optional<double> recall;
  std::optional<double> f1;
};

struct ReferenceWordLinks {
  PairSet sure;
  PairSet possible;  // always a superset of `sure`
};

inline ReferenceWordLinks reference_word_links(const AlignmentDocument& doc) {
  ReferenceWordLinks ref;
  for (const auto& w : doc.word_links) {
    ref.possible.insert({w.src, w.tgt});
    if (w.strength == Strength::Sure) ref.sure.insert({w.src, w.tgt});
  }
  return ref;
}

inline PairSet predicted_word_links(const AlignmentDocument& doc) {
  PairSet out;
  for (const auto& w : doc.word_links) out.insert({w.src, w.tgt});
  return out;
}

inline std::size_t intersection_size(const PairSet& a, const PairSet& b) {
  const PairSet& small = a.size() <= b.size() ? a : b;
  const PairSet& large = a.size() <= b.size() ? b : a;
  return static_cast<std::size_t>(
      std::count_if(small.begin(), small.end(), [&](const TokenPair& p) { return large.count(p) > 0; }));
}

/// Predicted links are untyped and scored as sure links. `possible` is
/// widened to include `sure` if the caller did not.
inline WordAlignScore evaluate_word_alignment(const PairSet& pred, const PairSet& sure, PairSet possible) {
  possible.insert(sure.begin(), sure.end());
  WordAlignScore s;
  if (pred.empty() && sure.empty()) {
    s.aer = 0.0;
    s.precision = 1.0;
    s.recall = 1.0;
    s.f1 = 1.0;
    return s;
  }
  const double a_s = static_cast<double>(intersection_size(pred, sure));
  const double a_p = static_cast<double>(intersection_size(pred, possible));
  s.aer = 1.0 - (a_s + a_p) / static_cast<double>(pred.size() + sure.size());
  s.precision = pred.empty() ? 0.0 : a_p / static_cast<double>(pred.size());
  if (!sure.empty()) {
    s.recall = a_s / static_cast<double>(sure.size());
    s.f1 = harmonic_mean(s.precision, *s.recall);
  }
  return s;
}

inline WordAlignScore evaluate_word_alignment(const PairSet& pred, const ReferenceWordLinks& ref) {
  return evaluate_word_alignment(pred, ref.sure, ref.possible);
}

/// Unweighted mean over recordings. Recordings without sure links are
/// excluded from the recall/F1 means, with a warning.
inline WordAlignScore macro_average(const std::vector<WordAlignScore>& scores) {
  WordAlignScore out;
  if (scores.empty()) return out;
  double aer = 0, prec = 0, rec = 0, f1 = 0;
  std::size_t defined = 0;
  for (const auto& s : scores) {
    aer += s.aer;
    prec += s.precision;
    if (s.recall && s.f1) {
      rec += *s.recall;
      f1 += *s.f1;
      ++defined;
    }
  }
  const auto n = static_cast<double>(scores.size());
  out.aer = aer / n;
  out.precision = prec / n;
  if (defined < scores.size())
    warn(std::to_string(scores.size() - defined) + " recording(s) without sure links excluded from word recall/F1");
  if (defined > 0) {
    out.recall = rec / static_cast<double>(defined);
    out.f1 = f1 / static_cast<double>(defined);
  }
  return out;
}

}  // namespace sialign
