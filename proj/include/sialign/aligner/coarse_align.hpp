#pragma once

// Monotonic n-m line alignment in two passes: a 1-1 anchor chain restricted
// to each source line's top_k targets, then a bead DP inside a corridor
// around that chain.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "sialign/aligner/embedding.hpp"
#include "sialign/aligner/params.hpp"
#include "sialign/aligner/similarity.hpp"
#include "sialign/core/transcript.hpp"

namespace sialign {

/// Lines [src_begin, src_end) aligned to lines [tgt_begin, tgt_end). One of
/// the ranges may be empty.
struct Bead {
  std::size_t src_begin = 0, src_end = 0;
  std::size_t tgt_begin = 0, tgt_end = 0;
  double score = 0;

  std::size_t src_size() const { return src_end - src_begin; }
  std::size_t tgt_size() const { return tgt_end - tgt_begin; }
  bool operator==(const Bead&) const = default;
};

inline std::vector<std::size_t> line_char_lengths(const TranscriptSide& side) {
  std::vector<std::size_t> out;
  for (std::size_t l = 0; l < side.lines.size(); ++l) out.push_back(utf8::length(line_text(side, l)));
  return out;
}

/// Scores a bead from precomputed line similarities: the cosine of the two
/// summed line vectors, times min/max of their character lengths when the
/// length penalty is on. Beads with an empty side score `skip`.
class BeadScorer {
 public:
  BeadScorer(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt, std::vector<std::size_t> src_chars,
             std::vector<std::size_t> tgt_chars, const AlignerParams& p)
      : n_(src.rows()), m_(tgt.rows()), max_align_(p.max_align), skip_(p.skip), len_penalty_(p.len_penalty),
        sim_(cosine_matrix(src, tgt)), src_chars_(prefix(src_chars)), tgt_chars_(prefix(tgt_chars)),
        src_norm2_(run_norms(src)), tgt_norm2_(run_norms(tgt)), row_prefix_(n_ * (m_ + 1), 0.0) {
    if (src_chars.size() != n_ || tgt_chars.size() != m_)
      throw Error(ErrorCode::SizeMismatch, "character lengths do not match the embedding rows");
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < m_; ++j) row_prefix_[i * (m_ + 1) + j + 1] = row_prefix_[i * (m_ + 1) + j] + sim_.at(i, j);
  }

  const SimilarityMatrix& similarities() const { return sim_; }
  double skip() const { return skip_; }

  double operator()(std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) const {
    if (i0 == i1 || j0 == j1) return skip_;
    double d = 0;
    for (std::size_t i = i0; i < i1; ++i) d += row_prefix_[i * (m_ + 1) + j1] - row_prefix_[i * (m_ + 1) + j0];
    const double na = src_norm2_[i0 * max_align_ + (i1 - i0 - 1)];
    const double nb = tgt_norm2_[j0 * max_align_ + (j1 - j0 - 1)];
    double cos = na > 0 && nb > 0 ? std::clamp(d / std::sqrt(na * nb), -1.0, 1.0) : 0.0;
    if (len_penalty_) {
      const double cs = static_cast<double>(src_chars_[i1] - src_chars_[i0]);
      const double ct = static_cast<double>(tgt_chars_[j1] - tgt_chars_[j0]);
      cos *= std::max(cs, ct) > 0 ? std::min(cs, ct) / std::max(cs, ct) : 1.0;
    }
    return cos;
  }

 private:
  static std::vector<std::size_t> prefix(const std::vector<std::size_t>& v) {
    std::vector<std::size_t> out(v.size() + 1, 0);
    std::partial_sum(v.begin(), v.end(), out.begin() + 1);
    return out;
  }

  // squared norm of the sum of rows [i, i + a) for a = 1..max_align
  std::vector<double> run_norms(const EmbeddingMatrix& e) const {
    const std::size_t rows = e.rows();
    std::vector<double> out(rows * max_align_, 0.0);
    std::vector<double> acc(e.dim);
    for (std::size_t i = 0; i < rows; ++i) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t a = 0; a < max_align_ && i + a < rows; ++a) {
        const auto r = e.row(i + a);
        for (std::size_t c = 0; c < e.dim; ++c) acc[c] += r[c];
        out[i * max_align_ + a] = dot(acc, acc);
      }
    }
    return out;
  }

  std::size_t n_, m_, max_align_;
  double skip_;
  bool len_penalty_;
  SimilarityMatrix sim_;
  std::vector<std::size_t> src_chars_, tgt_chars_;
  std::vector<double> src_norm2_, tgt_norm2_;
  std::vector<double> row_prefix_;
};

namespace detail {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Pass 1. Returns, for every source position i in [0, n], the lowest and
/// highest target position the anchor path visits.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> anchor_path(const SimilarityMatrix& sim,
                                                                                 const AlignerParams& p) {
  const std::size_t n = sim.rows, m = sim.cols, W = m + 1;
  std::vector<char> allowed(n * m, 0);
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), 0);
    const std::size_t k = std::min(p.top_k, m);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        return sim.at(i, a) != sim.at(i, b) ? sim.at(i, a) > sim.at(i, b) : a < b;
                      });
    for (std::size_t t = 0; t < k; ++t) allowed[i * m + order[t]] = 1;
  }
  // move: 0 = match, 1 = skip source, 2 = skip target
  std::vector<double> best((n + 1) * W, kNegInf);
  std::vector<unsigned char> move((n + 1) * W, 0);
  best[0] = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      if (i == 0 && j == 0) continue;
      double b = kNegInf;
      unsigned char mv = 0;
      if (i > 0 && j > 0 && allowed[(i - 1) * m + j - 1] && best[(i - 1) * W + j - 1] > kNegInf) {
        b = best[(i - 1) * W + j - 1] + sim.at(i - 1, j - 1);
        mv = 0;
      }
      if (i > 0 && best[(i - 1) * W + j] + p.skip > b) {
        b = best[(i - 1) * W + j] + p.skip;
        mv = 1;
      }
      if (j > 0 && best[i * W + j - 1] + p.skip > b) {
        b = best[i * W + j - 1] + p.skip;
        mv = 2;
      }
      best[i * W + j] = b;
      move[i * W + j] = mv;
    }
  }
  std::vector<std::size_t> lo(n + 1, m), hi(n + 1, 0);
  std::size_t i = n, j = m;
  while (true) {
    lo[i] = std::min(lo[i], j);
    hi[i] = std::max(hi[i], j);
    if (i == 0 && j == 0) break;
    switch (move[i * W + j]) {
      case 0: --i, --j; break;
      case 1: --i; break;
      default: --j;
    }
  }
  return {lo, hi};
}

}  // namespace detail

/// Score-maximal monotonic bead partition inside the corridor. Among equal
/// scores the partition with more beads wins, then the one found first with
/// the smallest bead sizes.
inline std::vector<Bead> coarse_align(const BeadScorer& score, const AlignerParams& p) {
  p.check();
  const auto& sim = score.similarities();
  const std::size_t n = sim.rows, m = sim.cols, W = m + 1;
  std::vector<Bead> out;
  if (n == 0 || m == 0) {
    for (std::size_t i = 0; i < n; ++i) out.push_back({i, i + 1, 0, 0, score.skip()});
    for (std::size_t j = 0; j < m; ++j) out.push_back({0, 0, j, j + 1, score.skip()});
    return out;
  }
  const auto [lo, hi] = detail::anchor_path(sim, p);
  auto j_min = [&](std::size_t i) { return lo[i] > p.window ? lo[i] - p.window : 0; };
  auto j_max = [&](std::size_t i) { return std::min(m, hi[i] + p.window); };
  auto inside = [&](std::size_t i, std::size_t j) { return j >= j_min(i) && j <= j_max(i); };

  std::vector<double> best((n + 1) * W, detail::kNegInf);
  std::vector<std::size_t> beads((n + 1) * W, 0);
  std::vector<std::pair<unsigned short, unsigned short>> back((n + 1) * W, {0, 0});
  best[0] = 0;
  constexpr double eps = 1e-12;
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = j_min(i); j <= j_max(i); ++j) {
      if (i == 0 && j == 0) continue;
      double b = detail::kNegInf;
      std::size_t cnt = 0;
      std::pair<unsigned short, unsigned short> from{0, 0};
      for (std::size_t a = 0; a <= std::min(p.max_align, i); ++a) {
        for (std::size_t c = 0; c <= std::min(p.max_align, j); ++c) {
          if (a + c == 0 || !inside(i - a, j - c)) continue;
          const double prev = best[(i - a) * W + j - c];
          if (prev == detail::kNegInf) continue;
          const double cand = prev + score(i - a, i, j - c, j);
          const std::size_t cand_cnt = beads[(i - a) * W + j - c] + 1;
          if (cand > b + eps || (cand >= b - eps && cand_cnt > cnt)) {
            b = cand;
            cnt = cand_cnt;
            from = {static_cast<unsigned short>(a), static_cast<unsigned short>(c)};
          }
        }
      }
      best[i * W + j] = b;
      beads[i * W + j] = cnt;
      back[i * W + j] = from;
    }
  }
  if (best[n * W + m] == detail::kNegInf) throw Error(ErrorCode::Internal, "coarse alignment corridor is disconnected");
  for (std::size_t i = n, j = m; i > 0 || j > 0;) {
    const auto [a, c] = back[i * W + j];
    out.push_back({i - a, i, j - c, j, score(i - a, i, j - c, j)});
    i -= a;
    j -= c;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

inline std::vector<Bead> coarse_align(const EmbeddingMatrix& src_emb, const EmbeddingMatrix& tgt_emb,
                                      const std::vector<std::size_t>& src_chars,
                                      const std::vector<std::size_t>& tgt_chars, const AlignerParams& p) {
  return coarse_align(BeadScorer(src_emb, tgt_emb, src_chars, tgt_chars, p), p);
}

inline std::vector<Bead> coarse_align(const EmbeddingMatrix& src_emb, const EmbeddingMatrix& tgt_emb,
                                      const TranscriptSide& src, const TranscriptSide& tgt, const AlignerParams& p) {
  if (src_emb.rows() != src.lines.size() || tgt_emb.rows() != tgt.lines.size())
    throw Error(ErrorCode::SizeMismatch, "line embeddings do not match the transcript line counts");
  return coarse_align(src_emb, tgt_emb, line_char_lengths(src), line_char_lengths(tgt), p);
}

inline double total_score(const std::vector<Bead>& beads) {
  double s = 0;
  for (const auto& b : beads) s += b.score;
  return s;
}

}  // namespace sialign
