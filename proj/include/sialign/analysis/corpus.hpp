#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include "sialign/core/error.hpp"
#include "sialign/core/types.hpp"

namespace sialign {

/// Documents sorted by (pair id, annotator, source id, target id) so that
/// every report is independent of input order.
inline std::vector<const AlignmentDocument*> canonical_order(const std::vector<AlignmentDocument>& docs) {
  std::vector<const AlignmentDocument*> out;
  for (const auto& d : docs) out.push_back(&d);
  std::stable_sort(out.begin(), out.end(), [](const AlignmentDocument* a, const AlignmentDocument* b) {
    return std::tie(a->pair_id, a->meta.annotator_id, a->source.doc_id, a->target.doc_id) <
           std::tie(b->pair_id, b->meta.annotator_id, b->source.doc_id, b->target.doc_id);
  });
  return out;
}

/// Linear-interpolation quantile (type 7) of a sorted sample.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::InvalidArgument, "quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "quantile level must be in [0, 1]");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

struct Summary {
  std::size_t count = 0;
  double mean = 0, min = 0, q1 = 0, median = 0, q3 = 0, max = 0;

  double iqr() const { return q3 - q1; }
};

inline Summary summarize(std::vector<double> sample) {
  if (sample.empty()) throw Error(ErrorCode::InvalidArgument, "summary of an empty sample");
  std::sort(sample.begin(), sample.end());
  Summary s;
  s.count = sample.size();
  double sum = 0;
  for (double v : sample) sum += v;
  s.mean = sum / static_cast<double>(sample.size());
  s.min = sample.front();
  s.max = sample.back();
  s.q1 = quantile_sorted(sample, 0.25);
  s.median = quantile_sorted(sample, 0.5);
  s.q3 = quantile_sorted(sample, 0.75);
  return s;
}

}  // namespace sialign
