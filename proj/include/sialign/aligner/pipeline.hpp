#pragma once

// Automatic alignment: coarse line beads -> token-range span links ->
// per-link itermax word links -> punctuation sub-segmentation -> labels.

#include <cstdio>
#include <string>
#include <vector>

#include "sialign/aligner/coarse_align.hpp"
#include "sialign/aligner/embedding.hpp"
#include "sialign/aligner/itermax.hpp"
#include "sialign/aligner/params.hpp"
#include "sialign/aligner/similarity.hpp"
#include "sialign/aligner/sub_segment.hpp"
#include "sialign/core/validate.hpp"
#include "sialign/labeler/predict.hpp"

namespace sialign {

struct SideEmbeddings {
  const EmbeddingMatrix* lines = nullptr;
  const EmbeddingMatrix* tokens = nullptr;
};

/// Owning counterpart of SideEmbeddings.
struct SideEmbeddingData {
  EmbeddingMatrix lines;
  EmbeddingMatrix tokens;

  SideEmbeddings view() const { return {&lines, &tokens}; }
};

/// Hashed-trigram embeddings of a side's lines and tokens.
inline SideEmbeddingData fallback_side_embeddings(const TranscriptSide& side, std::size_t dim = 64) {
  std::vector<std::string> lines, tokens;
  for (std::size_t l = 0; l < side.lines.size(); ++l) lines.push_back(line_text(side, l));
  for (const auto& t : side.tokens) tokens.push_back(t.surface);
  SideEmbeddingData out{fallback_embed(lines, dim, EmbeddingUnit::Line), fallback_embed(tokens, dim, EmbeddingUnit::Token)};
  out.lines.doc_id = out.tokens.doc_id = side.doc_id;
  return out;
}

struct PipelineOptions {
  bool sub_segment = true;
  const MLPParams* classifier = nullptr;  // TRAN for every two-sided link when null
  CutPredicate cut = punctuation_cut;
};

inline void check_embeddings(const TranscriptSide& side, const SideEmbeddings& e) {
  const std::string who = std::string(to_string(side.role)) + " '" + side.doc_id + "'";
  if (!e.lines || !e.tokens) throw Error(ErrorCode::InvalidArgument, "missing embeddings for " + who);
  if (e.lines->rows() != side.lines.size())
    throw Error(ErrorCode::SizeMismatch, who + " has " + std::to_string(side.lines.size()) + " lines but " +
                                             std::to_string(e.lines->rows()) + " line embeddings");
  if (e.tokens->rows() != side.size())
    throw Error(ErrorCode::SizeMismatch, who + " has " + std::to_string(side.size()) + " tokens but " +
                                             std::to_string(e.tokens->rows()) + " token embeddings");
}

/// Cosine between the summed token embeddings of each two-sided link.
inline SpanSimilarities span_similarities(const std::vector<SpanLink>& links, const EmbeddingMatrix& src_tokens,
                                          const EmbeddingMatrix& tgt_tokens) {
  SpanSimilarities out;
  for (const auto& l : links)
    if (l.two_sided())
      out[l.id] = summed_cosine(src_tokens, l.src->start, l.src->end, tgt_tokens, l.tgt->start, l.tgt->end);
  return out;
}

inline std::string link_id(std::size_t n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "L%04zu", n);
  return buf;
}

/// Renames links to L0001, L0002, ... in order and updates word-link parents.
inline void renumber_links(std::vector<SpanLink>& links, std::vector<WordLink>& words) {
  std::map<std::string, std::string> rename;
  for (std::size_t i = 0; i < links.size(); ++i) {
    rename[links[i].id] = link_id(i + 1);
    links[i].id = link_id(i + 1);
  }
  for (auto& w : words)
    if (auto it = rename.find(w.parent); it != rename.end()) w.parent = it->second;
}

inline std::vector<SpanLink> beads_to_links(const std::vector<Bead>& beads, const TranscriptSide& src,
                                            const TranscriptSide& tgt) {
  std::vector<SpanLink> out;
  for (const auto& b : beads) {
    SpanLink l;
    l.id = link_id(out.size() + 1);
    if (b.src_size()) l.src = Span{src.lines[b.src_begin].begin, src.lines[b.src_end - 1].end};
    if (b.tgt_size()) l.tgt = Span{tgt.lines[b.tgt_begin].begin, tgt.lines[b.tgt_end - 1].end};
    out.push_back(std::move(l));
  }
  return out;
}

inline AlignmentDocument run_pipeline(const TranscriptSide& src, const TranscriptSide& tgt, const SideEmbeddings& src_emb,
                                      const SideEmbeddings& tgt_emb, const AlignerParams& params,
                                      const PipelineOptions& options = {}, std::string pair_id = {}) {
  params.check();
  check_embeddings(src, src_emb);
  check_embeddings(tgt, tgt_emb);
  check_dims(*src_emb.lines, *tgt_emb.lines);
  check_dims(*src_emb.tokens, *tgt_emb.tokens);

  AlignmentDocument doc;
  doc.pair_id = pair_id.empty() ? src.doc_id + "__" + tgt.doc_id : std::move(pair_id);
  doc.source = src;
  doc.target = tgt;

  const auto beads = coarse_align(*src_emb.lines, *tgt_emb.lines, src, tgt, params);
  auto links = beads_to_links(beads, src, tgt);
  std::vector<WordLink> words;
  for (const auto& l : links) {
    if (!l.two_sided()) continue;
    const auto sim = cosine_matrix(*src_emb.tokens, l.src->start, l.src->end, *tgt_emb.tokens, l.tgt->start, l.tgt->end);
    for (const auto& [i, j] : itermax_word_align(sim, params.itermax_iters, params.itermax_decay))
      words.push_back({l.src->start + i, l.tgt->start + j, Strength::Sure, l.id});
  }
  if (options.sub_segment) {
    auto split = sub_segment(src, tgt, links, words, options.cut);
    links = std::move(split.span_links);
    words = std::move(split.word_links);
  }
  renumber_links(links, words);
  doc.span_links = std::move(links);
  doc.word_links = std::move(words);
  const auto sims = span_similarities(doc.span_links, *src_emb.tokens, *tgt_emb.tokens);
  doc = predict_labels(std::move(doc), options.classifier, sims);

  const auto report = validate_document(doc);
  if (!report.ok() || !report.is_complete) {
    std::string msg = "pipeline produced an invalid alignment";
    for (const auto& e : report.errors) msg += "; " + e.code + ": " + e.message;
    throw Error(ErrorCode::Internal, msg);
  }
  return doc;
}

}  // namespace sialign
