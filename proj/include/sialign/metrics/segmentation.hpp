#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "sialign/core/error.hpp"
#include "sialign/core/types.hpp"

namespace sialign {

/// Bit g is 1 iff a segment boundary follows token g; length n - 1.
using BoundaryString = std::vector<std::uint8_t>;

struct SegmentationScore {
  double accuracy = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double pk = 0;
  double window_diff = 0;
  std::size_t k = 0;
};

inline double harmonic_mean(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

/// Spans of one side, in link order.
inline std::vector<Span> side_spans(const AlignmentDocument& doc, Role role) {
  std::vector<Span> out;
  for (const auto& l : doc.span_links)
    if (const auto& s = l.side(role)) out.push_back(*s);
  return out;
}

/// Boundary string of a side segmentation. Tokens not covered by any span
/// form their own segments (one per maximal uncovered run), so a partial
/// annotation still yields a well-defined segmentation.
inline BoundaryString boundary_string(const std::vector<Span>& spans, std::size_t n) {
  std::vector<long> segment(n, -1);
  for (std::size_t k = 0; k < spans.size(); ++k)
    for (std::size_t i = spans[k].start; i < std::min(spans[k].end, n); ++i) segment[i] = static_cast<long>(k);
  BoundaryString bits(n > 0 ? n - 1 : 0, 0);
  for (std::size_t g = 0; g + 1 < n; ++g) bits[g] = segment[g] != segment[g + 1] ? 1 : 0;
  return bits;
}

inline std::size_t count_boundaries(const BoundaryString& b) {
  return static_cast<std::size_t>(std::count(b.begin(), b.end(), std::uint8_t{1}));
}

/// Half the mean reference segment length, at least 2. Two-token inputs
/// have only one valid window size and get k = 1.
inline std::size_t default_window(const BoundaryString& ref) {
  const double n = static_cast<double>(ref.size() + 1);
  if (ref.size() + 1 <= 2) return 1;
  const double segments = static_cast<double>(count_boundaries(ref) + 1);
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(n / (2.0 * segments))));
}

/// Sliding-window segmentation error. `ref`/`hyp` have n - 1 gap bits; each
/// of the n - k windows covers gaps [i, i + k). Pk compares "any boundary
/// inside", WindowDiff compares the boundary counts. Counts are kept as
/// running sums so both metrics run in O(n).
inline std::pair<double, double> pk_and_window_diff(const BoundaryString& ref, const BoundaryString& hyp,
                                                    std::size_t k) {
  const std::size_t n = ref.size() + 1;
  if (hyp.size() != ref.size()) throw Error(ErrorCode::SizeMismatch, "boundary strings differ in length");
  if (k == 0 || k >= n) throw Error(ErrorCode::InvalidArgument, "window size must satisfy 1 <= k < n");
  long r = 0, h = 0;
  for (std::size_t g = 0; g < k; ++g) {
    r += ref[g];
    h += hyp[g];
  }
  std::size_t pk_err = 0, wd_err = 0;
  const std::size_t windows = n - k;
  for (std::size_t i = 0; i < windows; ++i) {
    if (i > 0) {
      r += ref[i + k - 1] - ref[i - 1];
      h += hyp[i + k - 1] - hyp[i - 1];
    }
    if ((r > 0) != (h > 0)) ++pk_err;
    if (r != h) ++wd_err;
  }
  return {static_cast<double>(pk_err) / static_cast<double>(windows),
          static_cast<double>(wd_err) / static_cast<double>(windows)};
}

inline double pk(const BoundaryString& ref, const BoundaryString& hyp, std::size_t k) {
  return pk_and_window_diff(ref, hyp, k).first;
}

inline double window_diff(const BoundaryString& ref, const BoundaryString& hyp, std::size_t k) {
  return pk_and_window_diff(ref, hyp, k).second;
}

/// Boundary classification over gap positions plus Pk/WindowDiff. With no
/// boundary on either side precision and recall are 1 (nothing to find,
/// nothing wrongly proposed); a zero denominator otherwise gives 0.
inline SegmentationScore evaluate_boundaries(const BoundaryString& ref, const BoundaryString& hyp,
                                             std::optional<std::size_t> k = std::nullopt) {
  if (ref.size() != hyp.size()) throw Error(ErrorCode::SizeMismatch, "reference and hypothesis token counts differ");
  if (ref.size() + 1 < 2) throw Error(ErrorCode::InvalidArgument, "segmentation needs at least 2 tokens");
  SegmentationScore s;
  std::size_t tp = 0, fp = 0, fn = 0, agree = 0;
  for (std::size_t g = 0; g < ref.size(); ++g) {
    if (ref[g] && hyp[g]) ++tp;
    if (!ref[g] && hyp[g]) ++fp;
    if (ref[g] && !hyp[g]) ++fn;
    if (ref[g] == hyp[g]) ++agree;
  }
  s.accuracy = ref.empty() ? 1.0 : static_cast<double>(agree) / static_cast<double>(ref.size());
  if (tp + fp + fn == 0) {
    s.precision = s.recall = 1.0;
  } else {
    s.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    s.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  }
  s.f1 = harmonic_mean(s.precision, s.recall);
  s.k = k.value_or(default_window(ref));
  std::tie(s.pk, s.window_diff) = pk_and_window_diff(ref, hyp, s.k);
  return s;
}

inline SegmentationScore evaluate_segmentation(const std::vector<Span>& ref, const std::vector<Span>& hyp,
                                               std::size_t token_count, std::optional<std::size_t> k = std::nullopt) {
  return evaluate_boundaries(boundary_string(ref, token_count), boundary_string(hyp, token_count), k);
}

/// Evaluates one side of two documents over the same transcript.
inline SegmentationScore evaluate_segmentation(const AlignmentDocument& ref, const AlignmentDocument& hyp, Role role,
                                               std::optional<std::size_t> k = std::nullopt) {
  if (ref.side(role).size() != hyp.side(role).size())
    throw Error(ErrorCode::SizeMismatch, "reference and hypothesis token counts differ");
  return evaluate_segmentation(side_spans(ref, role), side_spans(hyp, role), ref.side(role).size(), k);
}

}  // namespace sialign
