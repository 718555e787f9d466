#pragma once

#include <string>
#include <vector>

#include "sialign/core/transcript.hpp"
#include "sialign/core/types.hpp"

namespace sialign::testing {

/// Document with `ns` source and `nt` target tokens on one line each and no
/// links.
inline AlignmentDocument blank_document(std::size_t ns, std::size_t nt) {
  std::vector<std::string> s, t;
  for (std::size_t i = 0; i < ns; ++i) s.push_back("s" + std::to_string(i));
  for (std::size_t i = 0; i < nt; ++i) t.push_back("t" + std::to_string(i));
  AlignmentDocument doc;
  doc.pair_id = "fixture";
  doc.source = make_side({s}, "src-doc", "cs", Role::Source);
  doc.target = make_side({t}, "tgt-doc", "en", Role::Target);
  return doc;
}

inline SpanLink link(std::string id, std::optional<Span> src, std::optional<Span> tgt,
                     std::optional<Label> label = Label::TRAN) {
  return SpanLink{std::move(id), src, tgt, label};
}

}  // namespace sialign::testing
