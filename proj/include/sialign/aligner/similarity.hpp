#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sialign/aligner/embedding.hpp"
#include "sialign/core/error.hpp"

namespace sialign {

/// Dense rows x cols matrix of cosine similarities.
struct SimilarityMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  SimilarityMatrix() = default;
  SimilarityMatrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), values(r * c, fill) {}
  static SimilarityMatrix from_rows(const std::vector<std::vector<double>>& m) {
    SimilarityMatrix s(m.size(), m.empty() ? 0 : m[0].size());
    for (std::size_t i = 0; i < s.rows; ++i) {
      if (m[i].size() != s.cols) throw Error(ErrorCode::SizeMismatch, "ragged similarity matrix");
      std::copy(m[i].begin(), m[i].end(), s.values.begin() + static_cast<std::ptrdiff_t>(i * s.cols));
    }
    return s;
  }

  double& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
  bool empty() const { return rows == 0 || cols == 0; }
};

inline void check_dims(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
  if (a.dim != b.dim && a.rows() && b.rows())
    throw Error(ErrorCode::SizeMismatch, "embedding dimensions differ (" + std::to_string(a.dim) + " vs " +
                                             std::to_string(b.dim) + ")");
}

/// Cosine similarity of rows [a0, a1) of `a` against rows [b0, b1) of `b`.
/// Rows are unit length, so this is the dot product.
inline SimilarityMatrix cosine_matrix(const EmbeddingMatrix& a, std::size_t a0, std::size_t a1,
                                      const EmbeddingMatrix& b, std::size_t b0, std::size_t b1) {
  check_dims(a, b);
  SimilarityMatrix s(a1 - a0, b1 - b0);
  for (std::size_t i = a0; i < a1; ++i)
    for (std::size_t j = b0; j < b1; ++j) s.at(i - a0, j - b0) = dot(a.row(i), b.row(j));
  return s;
}

inline SimilarityMatrix cosine_matrix(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
  return cosine_matrix(a, 0, a.rows(), b, 0, b.rows());
}

/// Cosine between the sums of rows [a0, a1) and [b0, b1); 0 when either sum
/// vanishes.
inline double summed_cosine(const EmbeddingMatrix& a, std::size_t a0, std::size_t a1, const EmbeddingMatrix& b,
                            std::size_t b0, std::size_t b1) {
  check_dims(a, b);
  std::vector<double> sa(a.dim, 0.0), sb(b.dim, 0.0);
  for (std::size_t i = a0; i < a1; ++i)
    for (std::size_t c = 0; c < a.dim; ++c) sa[c] += a.row(i)[c];
  for (std::size_t j = b0; j < b1; ++j)
    for (std::size_t c = 0; c < b.dim; ++c) sb[c] += b.row(j)[c];
  const double na = norm(sa), nb = norm(sb);
  if (na == 0 || nb == 0) return 0.0;
  return std::clamp(dot(sa, sb) / (na * nb), -1.0, 1.0);
}

}  // namespace sialign
