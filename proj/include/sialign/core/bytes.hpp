#pragma once

// Little-endian integer encoding shared by the binary file formats.

#include <cstdint>
#include <string>
#include <string_view>

#include "sialign/core/error.hpp"

namespace sialign {

namespace detail {

template <typename T>
void put_le(std::string& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

template <typename T>
T get_le(std::string_view in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw Error(ErrorCode::MalformedDocument, "truncated binary data");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  pos += sizeof(T);
  return v;
}

inline std::string get_string(std::string_view in, std::size_t& pos) {
  const auto len = get_le<std::uint32_t>(in, pos);
  if (pos + len > in.size()) throw Error(ErrorCode::MalformedDocument, "truncated binary data");
  std::string s(in.substr(pos, len));
  pos += len;
  return s;
}

}  // namespace detail

}  // namespace sialign
