#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sialign/core/error.hpp"

namespace sialign {

struct AlignerParams {
  // coarse alignment
  std::size_t max_align = 10;
  std::size_t top_k = 10;
  std::size_t window = 10;
  double skip = 0.0;
  bool len_penalty = true;
  // word alignment
  std::size_t itermax_iters = 2;
  double itermax_decay = 0.9;
  // windowed word-alignment baseline; no distance filter when empty
  std::size_t baseline_window = 128;
  std::size_t baseline_stride = 64;
  std::optional<std::size_t> baseline_max_distance = 50;
  std::uint64_t seed = 0;

  void check() const {
    auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidArgument, m); };
    if (max_align < 1) fail("max_align must be at least 1");
    if (top_k < 1) fail("top_k must be at least 1");
    if (window < 1) fail("window must be at least 1");
    if (itermax_iters < 1) fail("itermax iterations must be at least 1");
    if (!(itermax_decay > 0 && itermax_decay <= 1)) fail("itermax decay must be in (0, 1]");
    if (baseline_stride < 1 || baseline_stride > baseline_window) fail("baseline stride must be in [1, window]");
  }
};

}  // namespace sialign
