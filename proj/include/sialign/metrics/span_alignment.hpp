#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "sialign/core/error.hpp"
#include "sialign/core/types.hpp"
#include "sialign/metrics/segmentation.hpp"

namespace sialign {

struct SpanAlignScore {
  double exact_with_labels = 0;     // percentage
  double exact_without_labels = 0;  // percentage
  double relaxed_precision = 0;
  double relaxed_recall = 0;
  double relaxed_f1 = 0;
};

struct RelaxedCounts {
  std::size_t ref_pairs = 0;
  std::size_t hyp_pairs = 0;
  std::size_t common = 0;
};

namespace detail {

inline std::size_t overlap(const Span& a, const Span& b) {
  const auto lo = std::max(a.start, b.start);
  const auto hi = std::min(a.end, b.end);
  return hi > lo ? hi - lo : 0;
}

inline std::vector<const SpanLink*> two_sided(const std::vector<SpanLink>& links) {
  std::vector<const SpanLink*> out;
  for (const auto& l : links)
    if (l.two_sided()) out.push_back(&l);
  return out;
}

inline bool disjoint_sources(std::vector<const SpanLink*> links) {
  std::sort(links.begin(), links.end(), [](auto* a, auto* b) { return a->src->start < b->src->start; });
  for (std::size_t i = 1; i < links.size(); ++i)
    if (links[i]->src->start < links[i - 1]->src->end) return false;
  return true;
}

inline std::vector<std::uint64_t> expand_pairs(const std::vector<const SpanLink*>& links) {
  std::vector<std::uint64_t> pairs;
  for (auto* l : links)
    for (std::size_t u = l->src->start; u < l->src->end; ++u)
      for (std::size_t v = l->tgt->start; v < l->tgt->end; ++v)
        pairs.push_back((static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint64_t>(v));
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

}  // namespace detail

/// Sizes of the within-link token-pair sets of both link lists and of their
/// intersection. One-sided links contribute no pairs. When the source spans
/// of each list are disjoint every link is a disjoint rectangle and the sizes
/// are computed from areas; otherwise the pairs are enumerated.
inline RelaxedCounts relaxed_counts(const std::vector<SpanLink>& ref, const std::vector<SpanLink>& hyp) {
  const auto r = detail::two_sided(ref);
  const auto h = detail::two_sided(hyp);
  RelaxedCounts c;
  if (detail::disjoint_sources(r) && detail::disjoint_sources(h)) {
    for (auto* l : r) c.ref_pairs += l->src->size() * l->tgt->size();
    for (auto* l : h) c.hyp_pairs += l->src->size() * l->tgt->size();
    for (auto* a : r)
      for (auto* b : h) c.common += detail::overlap(*a->src, *b->src) * detail::overlap(*a->tgt, *b->tgt);
    return c;
  }
  const auto rp = detail::expand_pairs(r);
  const auto hp = detail::expand_pairs(h);
  std::vector<std::uint64_t> both;
  std::set_intersection(rp.begin(), rp.end(), hp.begin(), hp.end(), std::back_inserter(both));
  return {rp.size(), hp.size(), both.size()};
}

/// Exact match is the share of reference links reproduced by some hypothesis
/// link (denominator: reference link count, one-sided links included).
inline SpanAlignScore evaluate_span_alignment(const std::vector<SpanLink>& ref, const std::vector<SpanLink>& hyp) {
  if (ref.empty()) throw Error(ErrorCode::InvalidArgument, "exact match is undefined for an empty reference");
  SpanAlignScore s;
  std::size_t with = 0, without = 0;
  for (const auto& r : ref) {
    bool matched = false, matched_label = false;
    for (const auto& h : hyp) {
      if (h.src == r.src && h.tgt == r.tgt) {
        matched = true;
        if (h.label == r.label) matched_label = true;
      }
    }
    without += matched;
    with += matched_label;
  }
  s.exact_with_labels = 100.0 * static_cast<double>(with) / static_cast<double>(ref.size());
  s.exact_without_labels = 100.0 * static_cast<double>(without) / static_cast<double>(ref.size());

  const auto c = relaxed_counts(ref, hyp);
  if (c.ref_pairs == 0 && c.hyp_pairs == 0) {
    s.relaxed_precision = s.relaxed_recall = 1.0;
  } else {
    s.relaxed_precision = c.hyp_pairs ? static_cast<double>(c.common) / static_cast<double>(c.hyp_pairs) : 0.0;
    s.relaxed_recall = c.ref_pairs ? static_cast<double>(c.common) / static_cast<double>(c.ref_pairs) : 0.0;
  }
  s.relaxed_f1 = harmonic_mean(s.relaxed_precision, s.relaxed_recall);
  return s;
}

}  // namespace sialign
