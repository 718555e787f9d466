#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "sialign/aligner/similarity.hpp"
#include "sialign/core/error.hpp"
#include "sialign/metrics/word_alignment.hpp"

namespace sialign {

/// Pairs (i, j) where j is the first maximum of row i and i the first
/// maximum of column j. Rows or columns that are entirely -inf take no part.
inline PairSet mutual_argmax(const SimilarityMatrix& s) {
  PairSet out;
  if (s.empty()) return out;
  constexpr double ninf = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> row_arg(s.rows, 0), col_arg(s.cols, 0);
  for (std::size_t i = 0; i < s.rows; ++i)
    for (std::size_t j = 1; j < s.cols; ++j)
      if (s.at(i, j) > s.at(i, row_arg[i])) row_arg[i] = j;
  for (std::size_t j = 0; j < s.cols; ++j)
    for (std::size_t i = 1; i < s.rows; ++i)
      if (s.at(i, j) > s.at(col_arg[j], j)) col_arg[j] = i;
  for (std::size_t i = 0; i < s.rows; ++i) {
    const std::size_t j = row_arg[i];
    if (col_arg[j] == i && s.at(i, j) > ninf) out.insert({i, j});
  }
  return out;
}

/// Iterative mutual argmax without a distortion prior. After the first
/// round, cells whose row and column are both aligned drop out and cells
/// with one aligned endpoint are scaled by `decay`. Stops after `iters`
/// rounds, when a round adds nothing, or once every row or every column is
/// aligned.
inline PairSet itermax_word_align(const SimilarityMatrix& sim, std::size_t iters = 2, double decay = 0.9) {
  if (iters < 1) throw Error(ErrorCode::InvalidArgument, "itermax needs at least one iteration");
  if (!(decay > 0 && decay <= 1)) throw Error(ErrorCode::InvalidArgument, "itermax decay must be in (0, 1]");
  for (double v : sim.values)
    if (std::isnan(v)) throw Error(ErrorCode::NonFinite, "similarity matrix contains NaN");
  PairSet aligned = mutual_argmax(sim);
  std::vector<char> row_done(sim.rows, 0), col_done(sim.cols, 0);
  for (std::size_t it = 1; it < iters; ++it) {
    for (const auto& [i, j] : aligned) row_done[i] = col_done[j] = 1;
    const bool all_rows = std::all_of(row_done.begin(), row_done.end(), [](char c) { return c != 0; });
    const bool all_cols = std::all_of(col_done.begin(), col_done.end(), [](char c) { return c != 0; });
    if (all_rows || all_cols) break;
    SimilarityMatrix m = sim;
    for (std::size_t i = 0; i < m.rows; ++i)
      for (std::size_t j = 0; j < m.cols; ++j) {
        if (row_done[i] && col_done[j])
          m.at(i, j) = -std::numeric_limits<double>::infinity();
        else if (row_done[i] || col_done[j])
          m.at(i, j) *= decay;
      }
    std::size_t added = 0;
    for (const auto& p : mutual_argmax(m)) added += aligned.insert(p).second;
    if (added == 0) break;
  }
  return aligned;
}

}  // namespace sialign
