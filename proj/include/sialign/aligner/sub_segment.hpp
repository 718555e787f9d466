#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "sialign/core/tokenize.hpp"
#include "sialign/core/types.hpp"

namespace sialign {

/// Decides whether a word link between two tokens marks a split point.
using CutPredicate = std::function<bool(const Token& src, const Token& tgt)>;

inline bool punctuation_cut(const Token& src, const Token& tgt) {
  return is_punctuation_token(src.surface) && is_punctuation_token(tgt.surface);
}

struct SubSegmentResult {
  std::vector<SpanLink> span_links;
  std::vector<WordLink> word_links;
};

/// Splits two-sided links after tokens joined by a cut link. Cut points must
/// lie strictly inside both spans and are taken greedily in source order
/// while they increase on both sides, so both spans get the same number of
/// pieces. Word links move to the piece holding both endpoints; those that
/// straddle a cut are dropped. Split pieces are named `<id>.<k>`.
inline SubSegmentResult sub_segment(const TranscriptSide& src, const TranscriptSide& tgt,
                                    const std::vector<SpanLink>& links, const std::vector<WordLink>& word_links,
                                    const CutPredicate& is_cut = punctuation_cut) {
  SubSegmentResult out;
  std::vector<char> owned(word_links.size(), 0);
  for (const auto& l : links) {
    if (!l.two_sided()) {
      out.span_links.push_back(l);
      continue;
    }
    const Span s = *l.src, t = *l.tgt;
    std::vector<std::size_t> inner;
    for (std::size_t w = 0; w < word_links.size(); ++w)
      if (s.contains(word_links[w].src) && t.contains(word_links[w].tgt)) inner.push_back(w);
    std::vector<std::pair<std::size_t, std::size_t>> cuts;
    for (std::size_t w : inner) {
      const auto& wl = word_links[w];
      if (wl.src + 1 < s.end && wl.tgt + 1 < t.end && is_cut(src.tokens[wl.src], tgt.tokens[wl.tgt]))
        cuts.push_back({wl.src + 1, wl.tgt + 1});
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::pair<std::size_t, std::size_t>> chain;
    for (const auto& c : cuts)
      if (chain.empty() || (c.first > chain.back().first && c.second > chain.back().second)) chain.push_back(c);

    std::vector<SpanLink> pieces;
    std::size_t s0 = s.start, t0 = t.start;
    chain.push_back({s.end, t.end});
    for (const auto& [cs, ct] : chain) {
      SpanLink p = l;
      p.src = Span{s0, cs};
      p.tgt = Span{t0, ct};
      if (chain.size() > 1) p.id = l.id + "." + std::to_string(pieces.size() + 1);
      pieces.push_back(std::move(p));
      s0 = cs;
      t0 = ct;
    }
    for (std::size_t w : inner) {
      owned[w] = 1;
      for (const auto& p : pieces)
        if (p.src->contains(word_links[w].src) && p.tgt->contains(word_links[w].tgt)) {
          WordLink moved = word_links[w];
          moved.parent = p.id;
          out.word_links.push_back(std::move(moved));
          break;
        }
    }
    out.span_links.insert(out.span_links.end(), pieces.begin(), pieces.end());
  }
  for (std::size_t w = 0; w < word_links.size(); ++w)
    if (!owned[w]) out.word_links.push_back(word_links[w]);
  return out;
}

}  // namespace sialign
