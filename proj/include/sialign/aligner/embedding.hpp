#pragma once

// Embedding matrices and the EMB1 file format.
//
// EMB1 layout, all integers and floats little-endian:
//   4 bytes   magic "EMB1"
//   uint32    version (1)
//   uint8     unit (0 = line, 1 = token)
//   uint8     normalized flag
//   uint16    reserved, zero
//   uint64    count
//   uint32    dim
//   uint32    model_tag length, then that many UTF-8 bytes
//   uint32    doc_id length, then that many UTF-8 bytes
//   count * dim float32, row-major

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sialign/core/bytes.hpp"
#include "sialign/core/error.hpp"
#include "sialign/core/io.hpp"

namespace sialign {

enum class EmbeddingUnit : std::uint8_t { Line = 0, Token = 1 };

inline std::string_view to_string(EmbeddingUnit u) { return u == EmbeddingUnit::Line ? "line" : "token"; }

/// Row-major, L2-normalized rows. Values are kept in double precision; files
/// store float32, which converts back exactly.
struct EmbeddingMatrix {
  EmbeddingUnit unit = EmbeddingUnit::Line;
  std::size_t dim = 0;
  std::vector<double> values;
  std::string doc_id;
  std::string model_tag;

  std::size_t rows() const { return dim ? values.size() / dim : 0; }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * dim, dim}; }

  bool operator==(const EmbeddingMatrix&) const = default;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// Normalizes every row in place. Zero or non-finite rows are an error.
inline void normalize_rows(EmbeddingMatrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double* p = m.values.data() + r * m.dim;
    const double n = norm({p, m.dim});
    if (!std::isfinite(n)) throw Error(ErrorCode::NonFinite, "embedding row " + std::to_string(r) + " is not finite");
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "embedding row " + std::to_string(r) + " is zero");
    for (std::size_t c = 0; c < m.dim; ++c) p[c] /= n;
  }
}

inline std::string encode_embeddings(const EmbeddingMatrix& m) {
  std::string out = "EMB1";
  detail::put_le<std::uint32_t>(out, 1);
  out.push_back(static_cast<char>(m.unit));
  out.push_back(1);
  detail::put_le<std::uint16_t>(out, 0);
  detail::put_le<std::uint64_t>(out, m.rows());
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.dim));
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.model_tag.size()));
  out += m.model_tag;
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.doc_id.size()));
  out += m.doc_id;
  out.reserve(out.size() + m.values.size() * 4);
  for (double v : m.values) detail::put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return out;
}

/// Parses an EMB1 buffer. Rows flagged as normalized must have norm 1 within
/// 1e-5 and are kept bit-for-bit; unflagged rows are normalized here.
inline EmbeddingMatrix decode_embeddings(std::string_view in) {
  std::size_t pos = 0;
  if (in.substr(0, 4) != "EMB1") throw Error(ErrorCode::MalformedDocument, "not an EMB1 embedding file");
  pos = 4;
  const auto version = detail::get_le<std::uint32_t>(in, pos);
  if (version != 1) throw Error(ErrorCode::MalformedDocument, "unsupported EMB1 version " + std::to_string(version));
  EmbeddingMatrix m;
  const auto unit = detail::get_le<std::uint8_t>(in, pos);
  if (unit > 1) throw Error(ErrorCode::MalformedDocument, "unknown embedding unit " + std::to_string(unit));
  m.unit = static_cast<EmbeddingUnit>(unit);
  const bool normalized = detail::get_le<std::uint8_t>(in, pos) != 0;
  detail::get_le<std::uint16_t>(in, pos);
  const auto count = detail::get_le<std::uint64_t>(in, pos);
  m.dim = detail::get_le<std::uint32_t>(in, pos);
  m.model_tag = detail::get_string(in, pos);
  m.doc_id = detail::get_string(in, pos);
  if (m.dim == 0 && count > 0) throw Error(ErrorCode::MalformedDocument, "embedding dimension is zero");
  if ((in.size() - pos) / 4 != count * m.dim || (in.size() - pos) % 4 != 0)
    throw Error(ErrorCode::MalformedDocument, "embedding body length does not match count * dim");
  m.values.resize(count * m.dim);
  for (auto& v : m.values) v = std::bit_cast<float>(detail::get_le<std::uint32_t>(in, pos));
  if (normalized) {
    for (std::size_t r = 0; r < m.rows(); ++r)
      if (std::abs(norm(m.row(r)) - 1.0) > 1e-5)
        throw Error(ErrorCode::MalformedDocument, "embedding row " + std::to_string(r) + " is flagged normalized but is not");
  } else {
    normalize_rows(m);
  }
  return m;
}

inline EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
  try {
    return decode_embeddings(read_file(path));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

inline void save_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& m) {
  write_file_atomic(path, encode_embeddings(m));
}

/// Deterministic stand-in for a neural encoder: hashed character trigrams of
/// "^unit$" (FNV-1a over the bytes), counted into `dim` buckets and
/// L2-normalized.
inline EmbeddingMatrix fallback_embed(const std::vector<std::string>& units, std::size_t dim,
                                      EmbeddingUnit unit = EmbeddingUnit::Token) {
  if (dim < 8) throw Error(ErrorCode::InvalidArgument, "fallback embedding dimension must be at least 8");
  EmbeddingMatrix m;
  m.unit = unit;
  m.dim = dim;
  m.model_tag = "fallback-trigram-" + std::to_string(dim);
  m.values.assign(units.size() * dim, 0.0);
  for (std::size_t r = 0; r < units.size(); ++r) {
    const std::string padded = "^" + units[r] + "$";
    double* row = m.values.data() + r * dim;
    // "^$" for an empty unit is shorter than a trigram and hashed whole
    const std::size_t n = std::min<std::size_t>(3, padded.size());
    for (std::size_t i = 0; i + n <= padded.size(); ++i) {
      std::uint64_t h = 14695981039346656037ULL;
      for (std::size_t k = 0; k < n; ++k) {
        h ^= static_cast<unsigned char>(padded[i + k]);
        h *= 1099511628211ULL;
      }
      row[h % dim] += 1.0;
    }
  }
  normalize_rows(m);
  return m;
}

}  // namespace sialign
