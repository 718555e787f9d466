#pragma once

// Trained-model file: a text header terminated by an empty line, then the
// blocks w1 b1 w2 b2 w3 b3 as little-endian float64, weights row-major
// (out x in).
//
//   sialign-mlp 1
//   classes TRAN PARA SUM GEN REPL
//   features similarity src_len tgt_len
//   scaling log1p
//   activation relu
//   optimizer sgd
//   init uniform-fan-in
//   seed 42
//   layers 3 100 100 5
//   <empty line>

#include <bit>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>

#include "sialign/core/bytes.hpp"
#include "sialign/core/io.hpp"
#include "sialign/labeler/mlp.hpp"

namespace sialign {

inline std::string encode_model(const MLPParams& p) {
  p.check();
  std::ostringstream h;
  h << "sialign-mlp 1\nclasses";
  for (Label l : kClassOrder) h << ' ' << to_string(l);
  h << "\nfeatures similarity src_len tgt_len\nscaling log1p\nactivation relu\noptimizer sgd\ninit uniform-fan-in\n";
  h << "seed " << p.seed << "\nlayers " << kNumFeatures << ' ' << p.hidden << ' ' << p.hidden << ' ' << kNumClasses
    << "\n\n";
  std::string out = h.str();
  for (const auto* b : p.blocks())
    for (double v : *b) detail::put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

inline MLPParams decode_model(std::string_view in) {
  auto bad = [](const std::string& m) { return Error(ErrorCode::MalformedDocument, "model file: " + m); };
  const auto end = in.find("\n\n");
  if (end == std::string_view::npos) throw bad("missing header terminator");
  std::istringstream header{std::string(in.substr(0, end))};
  std::string line;
  std::map<std::string, std::string> fields;
  bool first = true;
  while (std::getline(header, line)) {
    if (first) {
      if (line != "sialign-mlp 1") throw bad("unsupported header '" + line + "'");
      first = false;
      continue;
    }
    const auto sp = line.find(' ');
    fields[line.substr(0, sp)] = sp == std::string::npos ? "" : line.substr(sp + 1);
  }
  if (first) throw bad("empty header");
  std::string classes;
  for (Label l : kClassOrder) classes += (classes.empty() ? "" : " ") + std::string(to_string(l));
  if (fields["classes"] != classes) throw bad("class order '" + fields["classes"] + "' is not supported");
  if (fields["scaling"] != "log1p") throw bad("scaling '" + fields["scaling"] + "' is not supported");
  if (fields["activation"] != "relu") throw bad("activation '" + fields["activation"] + "' is not supported");
  std::istringstream layers(fields["layers"]);
  std::size_t in_dim = 0, h1 = 0, h2 = 0, out_dim = 0;
  if (!(layers >> in_dim >> h1 >> h2 >> out_dim) || in_dim != kNumFeatures || h1 != h2 || h1 == 0 ||
      out_dim != kNumClasses)
    throw bad("layers '" + fields["layers"] + "' do not describe a 3-H-H-5 network");
  MLPParams p = MLPParams::zeros(h1);
  try {
    p.seed = std::stoull(fields["seed"]);
  } catch (const std::exception&) {
    throw bad("invalid seed");
  }
  std::size_t pos = end + 2;
  std::size_t total = 0;
  for (const auto* b : p.blocks()) total += b->size();
  if (in.size() - pos != total * 8) throw bad("parameter block length does not match the layer sizes");
  for (auto* b : p.blocks())
    for (auto& v : *b) v = std::bit_cast<double>(detail::get_le<std::uint64_t>(in, pos));
  p.check();
  return p;
}

inline void save_model(const std::filesystem::path& path, const MLPParams& p) {
  write_file_atomic(path, encode_model(p));
}

inline MLPParams load_model(const std::filesystem::path& path) {
  try {
    return decode_model(read_file(path));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace sialign
