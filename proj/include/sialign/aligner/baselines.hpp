#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "sialign/aligner/itermax.hpp"
#include "sialign/aligner/params.hpp"
#include "sialign/aligner/pipeline.hpp"
#include "sialign/core/log.hpp"
#include "sialign/core/random.hpp"
#include "sialign/metrics/segmentation.hpp"

namespace sialign {

/// Drops pairs whose token positions are more than `max_distance` apart.
inline PairSet filter_distance(const PairSet& pairs, std::size_t max_distance) {
  PairSet out;
  for (const auto& [i, j] : pairs)
    if ((i > j ? i - j : j - i) <= max_distance) out.insert({i, j});
  return out;
}

/// Word-alignment baseline: itermax over the full token similarity matrix of
/// two windowed token embeddings, then the distance filter.
inline PairSet baseline_word_align(const EmbeddingMatrix& src_tokens, const EmbeddingMatrix& tgt_tokens,
                                   const AlignerParams& p) {
  p.check();
  auto pairs = itermax_word_align(cosine_matrix(src_tokens, tgt_tokens), p.itermax_iters, p.itermax_decay);
  return p.baseline_max_distance ? filter_distance(pairs, *p.baseline_max_distance) : pairs;
}

namespace detail {

/// Splits [0, n) at `boundaries` randomly chosen gaps.
inline std::vector<Span> random_segments(Rng& rng, std::size_t n, std::size_t boundaries) {
  std::vector<Span> out;
  if (n == 0) return out;
  std::size_t start = 0;
  for (std::size_t gap : sample_without_replacement(rng, n - 1, boundaries)) {
    out.push_back({start, gap + 1});
    start = gap + 1;
  }
  out.push_back({start, n});
  return out;
}

}  // namespace detail

/// Random segmentation and labeling with the reference's boundary counts and
/// label multiset. Segments on both sides are consumed left to right while
/// walking a shuffled pool of the reference labels. An addition goes to one
/// side, alternating between source and target starting with source, but
/// only to a side that has more segments left than two-sided labels remain
/// in the pool; otherwise the other side takes it.
inline AlignmentDocument random_baseline(const AlignmentDocument& ref, std::uint64_t seed) {
  const auto report = validate_document(ref);
  if (!report.is_complete)
    throw Error(ErrorCode::IncompleteAnnotation, "random baseline needs a complete reference ('" + ref.pair_id + "')");
  std::vector<Label> pool;
  for (const auto& l : ref.span_links) {
    if (!l.label) throw Error(ErrorCode::IncompleteAnnotation, "reference link '" + l.id + "' has no label");
    pool.push_back(*l.label);
  }

  Rng rng(seed);
  AlignmentDocument out;
  out.pair_id = ref.pair_id;
  out.source = ref.source;
  out.target = ref.target;
  out.meta = ref.meta;
  std::vector<Span> segs[2];
  for (int s = 0; s < 2; ++s) {
    const Role role = s == 0 ? Role::Source : Role::Target;
    const auto n = ref.side(role).size();
    const auto b = n ? count_boundaries(boundary_string(side_spans(ref, role), n)) : 0;
    segs[s] = detail::random_segments(rng, n, b);
  }
  shuffle(pool, rng);

  std::size_t two_sided_left = 0;
  for (Label l : pool) two_sided_left += !is_addition(l);
  std::size_t next[2] = {0, 0};
  int prefer = 0;
  auto left = [&](int s) { return segs[s].size() - next[s]; };
  auto emit = [&](std::optional<Span> a, std::optional<Span> b, Label label) {
    out.span_links.push_back({link_id(out.span_links.size() + 1), a, b, label});
  };
  for (Label label : pool) {
    if (!is_addition(label)) {
      if (!left(0) || !left(1)) throw Error(ErrorCode::Internal, "random baseline ran out of segments");
      emit(segs[0][next[0]++], segs[1][next[1]++], label);
      --two_sided_left;
      continue;
    }
    int side = left(prefer) > two_sided_left ? prefer : 1 - prefer;
    prefer = 1 - prefer;
    if (left(side) == 0) throw Error(ErrorCode::Internal, "random baseline ran out of segments");
    if (side == 0)
      emit(segs[0][next[0]++], std::nullopt, label);
    else
      emit(std::nullopt, segs[1][next[1]++], label);
  }
  // pool exhausted with segments left: re-draw addition labels
  if (left(0) || left(1)) {
    warn("random baseline: label pool exhausted with segments left, re-drawing labels");
    std::vector<Label> additions;
    for (const auto& l : ref.span_links)
      if (is_addition(*l.label)) additions.push_back(*l.label);
    if (additions.empty()) additions.push_back(Label::ADDU);
    for (int s = 0; s < 2; ++s)
      while (left(s)) {
        const Label label = additions[uniform_below(rng, additions.size())];
        if (s == 0)
          emit(segs[0][next[0]++], std::nullopt, label);
        else
          emit(std::nullopt, segs[1][next[1]++], label);
      }
  }
  return out;
}

}  // namespace sialign
