#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "sialign/aligner/baselines.hpp"
#include "sialign/aligner/coarse_align.hpp"
#include "sialign/aligner/embedding.hpp"
#include "sialign/aligner/itermax.hpp"
#include "sialign/aligner/pipeline.hpp"
#include "sialign/aligner/sub_segment.hpp"
#include "sialign/metrics/span_alignment.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace sialign;
namespace gen = sialign::testing;

namespace {

double cosine(const EmbeddingMatrix& m, std::size_t a, std::size_t b) { return dot(m.row(a), m.row(b)); }

std::vector<std::string> texts(const TranscriptSide& side) {
  std::vector<std::string> out;
  for (std::size_t l = 0; l < side.lines.size(); ++l) out.push_back(line_text(side, l));
  return out;
}

TranscriptSide side_from(const std::vector<std::string>& lines, Role role) {
  std::vector<std::vector<std::string>> toks;
  for (const auto& l : lines) toks.push_back(tokenize(l));
  return make_side(toks, role == Role::Source ? "S" : "T", "en", role);
}

}  // namespace

// ---- embeddings ------------------------------------------------------------

TEST(FallbackEmbed, IdenticalAndDistinctStrings) {
  const auto m = fallback_embed({"abc", "abc", "xyz"}, 64);
  EXPECT_NEAR(cosine(m, 0, 1), 1.0, 1e-12);
  EXPECT_LT(cosine(m, 0, 2), 1.0);
  for (std::size_t r = 0; r < m.rows(); ++r) EXPECT_NEAR(norm(m.row(r)), 1.0, 1e-9);
  EXPECT_THROW(fallback_embed({"a"}, 4), Error);
  EXPECT_NO_THROW(fallback_embed({""}, 8));
}

TEST(FallbackEmbed, Deterministic) {
  EXPECT_EQ(fallback_embed({"mothers health", "school"}, 32), fallback_embed({"mothers health", "school"}, 32));
}

TEST(Emb1, RoundTripIsBitExact) {
  auto m = fallback_embed({"one", "two", "three"}, 16, EmbeddingUnit::Line);
  m.doc_id = "doc-7";
  const auto bytes = encode_embeddings(m);
  const auto back = decode_embeddings(bytes);
  EXPECT_EQ(encode_embeddings(back), bytes);
  EXPECT_EQ(back.unit, EmbeddingUnit::Line);
  EXPECT_EQ(back.doc_id, "doc-7");
  EXPECT_EQ(back.model_tag, m.model_tag);
  EXPECT_EQ(back.rows(), 3u);
  for (std::size_t i = 0; i < m.values.size(); ++i) EXPECT_EQ(back.values[i], static_cast<float>(m.values[i]));
}

TEST(Emb1, ByteLayout) {
  EmbeddingMatrix m;
  m.unit = EmbeddingUnit::Token;
  m.dim = 2;
  m.values = {1.0, 0.0};
  m.model_tag = "t";
  m.doc_id = "d";
  const auto b = encode_embeddings(m);
  // magic, version 1, unit 1, normalized 1, reserved, count 1, dim 2
  const std::string head("EMB1\x01\0\0\0\x01\x01\0\0\x01\0\0\0\0\0\0\0\x02\0\0\0", 24);
  EXPECT_EQ(b.substr(0, 24), head);
  EXPECT_EQ(b.substr(24, 5), std::string("\x01\0\0\0t", 5));
  EXPECT_EQ(b.size(), 24u + 5 + 5 + 8);
  // 1.0f little-endian
  EXPECT_EQ(b.substr(34, 4), std::string("\0\0\x80\x3f", 4));
}

TEST(Emb1, RejectsBadFiles) {
  auto m = fallback_embed({"a", "b"}, 8);
  auto bytes = encode_embeddings(m);
  EXPECT_THROW(decode_embeddings("EMB2"), Error);
  EXPECT_THROW(decode_embeddings(bytes.substr(0, bytes.size() - 1)), Error);
  auto scaled = m;
  for (auto& v : scaled.values) v *= 3;
  auto flagged = encode_embeddings(scaled);
  EXPECT_THROW(decode_embeddings(flagged), Error);
  flagged[9] = 0;  // clear the normalized flag: rows get normalized on load
  const auto fixed = decode_embeddings(flagged);
  for (std::size_t r = 0; r < fixed.rows(); ++r) EXPECT_NEAR(norm(fixed.row(r)), 1.0, 1e-6);
}

// ---- coarse alignment ------------------------------------------------------

TEST(CoarseAlign, IdenticalTextsAlignOneToOne) {
  const auto side = side_from({"the speech was about health", "we see a very long road", "children walk to school"},
                              Role::Source);
  const auto e = fallback_embed(texts(side), 64, EmbeddingUnit::Line);
  const auto beads = coarse_align(e, e, side, side, AlignerParams{});
  ASSERT_EQ(beads.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(beads[i].src_begin, i);
    EXPECT_EQ(beads[i].src_size(), 1u);
    EXPECT_EQ(beads[i].tgt_begin, i);
    EXPECT_EQ(beads[i].tgt_size(), 1u);
  }
}

TEST(CoarseAlign, EmptySides) {
  const auto side = side_from({"one line", "two line"}, Role::Source);
  const auto e = fallback_embed(texts(side), 16, EmbeddingUnit::Line);
  EmbeddingMatrix none;
  none.dim = 16;
  const auto beads = coarse_align(e, none, std::vector<std::size_t>{8, 8}, std::vector<std::size_t>{}, AlignerParams{});
  ASSERT_EQ(beads.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(beads[i], (Bead{i, i + 1, 0, 0, 0.0}));
  const std::vector<std::size_t> no_chars;
  EXPECT_TRUE(coarse_align(none, none, no_chars, no_chars, AlignerParams{}).empty());
}

TEST(CoarseAlign, MergedSourceLineTakesTwoTargetLines) {
  const auto src = side_from({"the speech was about health", "mothers walk children to school rights"}, Role::Source);
  const auto tgt = side_from({"the speech was about health", "mothers walk children", "to school rights"},
                             Role::Target);
  const auto es = fallback_embed(texts(src), 256, EmbeddingUnit::Line);
  const auto et = fallback_embed(texts(tgt), 256, EmbeddingUnit::Line);
  const AlignerParams p;
  const auto beads = coarse_align(es, et, src, tgt, p);
  ASSERT_EQ(beads.size(), 2u);
  EXPECT_EQ(beads[1], (Bead{1, 2, 1, 3, beads[1].score}));
  const double oracle = oracle::best_partition_score(es, et, line_char_lengths(src), line_char_lengths(tgt),
                                                     p.max_align, p.skip, p.len_penalty);
  EXPECT_NEAR(total_score(beads), oracle, 1e-9);
}

TEST(CoarseAlignProperty, PartitionAndOptimality) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    auto [src, tgt] = gen::random_parallel_pair(rng, 6);
    if (src.lines.size() > 6 || tgt.lines.size() > 6) continue;
    AlignerParams p;
    p.top_k = gen::uniform(rng, 1, 4);
    p.skip = gen::uniform_real(rng, -0.3, 0.3);
    p.len_penalty = trial % 3 != 0;
    const auto es = fallback_embed(texts(src), 32, EmbeddingUnit::Line);
    const auto et = fallback_embed(texts(tgt), 32, EmbeddingUnit::Line);
    const auto beads = coarse_align(es, et, src, tgt, p);
    std::size_t i = 0, j = 0;
    for (const auto& b : beads) {
      ASSERT_EQ(b.src_begin, i);
      ASSERT_EQ(b.tgt_begin, j);
      ASSERT_GT(b.src_size() + b.tgt_size(), 0u);
      i = b.src_end;
      j = b.tgt_end;
    }
    ASSERT_EQ(i, src.lines.size());
    ASSERT_EQ(j, tgt.lines.size());
    const double oracle = oracle::best_partition_score(es, et, line_char_lengths(src), line_char_lengths(tgt),
                                                       p.max_align, p.skip, p.len_penalty);
    if (!beads.empty()) ASSERT_NEAR(total_score(beads), oracle, 1e-9);
  }
}

TEST(CoarseAlign, ParameterChecks) {
  AlignerParams p;
  p.max_align = 0;
  EXPECT_THROW(p.check(), Error);
  p = {};
  p.itermax_decay = 0;
  EXPECT_THROW(p.check(), Error);
}

// ---- itermax ---------------------------------------------------------------

TEST(Itermax, IdentityGivesDiagonal) {
  const auto s = SimilarityMatrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  EXPECT_EQ(itermax_word_align(s, 2, 0.9), (PairSet{{0, 0}, {1, 1}, {2, 2}}));
}

TEST(Itermax, TwoByTwoExample) {
  const auto s = SimilarityMatrix::from_rows({{0.9, 0.8}, {0.7, 0.6}});
  EXPECT_EQ(itermax_word_align(s, 1, 0.9), (PairSet{{0, 0}}));
  // Round two: (0,0) drops out, (0,1) -> 0.72, (1,0) -> 0.63, (1,1) stays
  // 0.6. Both (0,1) and (1,0) are then mutual maxima.
  EXPECT_EQ(itermax_word_align(s, 2, 0.9), (PairSet{{0, 0}, {0, 1}, {1, 0}}));
}

TEST(Itermax, TiesGoToLowestIndex) {
  const auto s = SimilarityMatrix::from_rows({{0.5, 0.5}, {0.5, 0.5}});
  EXPECT_EQ(mutual_argmax(s), (PairSet{{0, 0}}));
}

TEST(Itermax, EmptyAndInvalid) {
  EXPECT_TRUE(itermax_word_align(SimilarityMatrix{}, 2, 0.9).empty());
  EXPECT_TRUE(itermax_word_align(SimilarityMatrix(0, 4), 2, 0.9).empty());
  EXPECT_THROW(itermax_word_align(SimilarityMatrix(1, 1), 0, 0.9), Error);
  EXPECT_THROW(itermax_word_align(SimilarityMatrix(1, 1), 1, 1.5), Error);
}

TEST(ItermaxProperty, FirstIterationIsMutualArgmax) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t r = gen::uniform(rng, 1, 20), c = gen::uniform(rng, 1, 20);
    std::vector<std::vector<double>> m(r, std::vector<double>(c));
    for (auto& row : m)
      for (auto& v : row) v = trial % 4 == 0 ? std::round(gen::uniform_real(rng, -1, 1) * 4) / 4 : gen::uniform_real(rng, -1, 1);
    const auto s = SimilarityMatrix::from_rows(m);
    const auto first = itermax_word_align(s, 1, 0.9);
    ASSERT_EQ(first, oracle::mutual_argmax(m));
    const auto more = itermax_word_align(s, 3, 0.9);
    ASSERT_TRUE(std::includes(more.begin(), more.end(), first.begin(), first.end()));
  }
}

// ---- sub-segmentation ------------------------------------------------------

TEST(SubSegment, CutsAtAlignedPunctuation) {
  const auto src = make_side({{"w", ".", "w", "."}}, "S", "en", Role::Source);
  const auto tgt = make_side({{"v", ".", "v", "."}}, "T", "en", Role::Target);
  const std::vector<SpanLink> links = {gen::link("L", Span{0, 4}, Span{0, 4}, std::nullopt)};
  const std::vector<WordLink> words = {{0, 0, Strength::Sure, "L"}, {1, 1, Strength::Sure, "L"},
                                       {2, 2, Strength::Sure, "L"}, {3, 3, Strength::Sure, "L"}};
  const auto out = sub_segment(src, tgt, links, words);
  ASSERT_EQ(out.span_links.size(), 2u);
  EXPECT_EQ(out.span_links[0].src, (Span{0, 2}));
  EXPECT_EQ(out.span_links[0].tgt, (Span{0, 2}));
  EXPECT_EQ(out.span_links[1].src, (Span{2, 4}));
  EXPECT_EQ(out.span_links[1].tgt, (Span{2, 4}));
  ASSERT_EQ(out.word_links.size(), 4u);
  EXPECT_EQ(out.word_links[1].parent, out.span_links[0].id);
  EXPECT_EQ(out.word_links[2].parent, out.span_links[1].id);
}

TEST(SubSegment, NoCutWithoutPunctuationPairs) {
  const auto src = make_side({{"w", ".", "w", "x"}}, "S", "en", Role::Source);
  const auto tgt = make_side({{"v", "v", "v", "."}}, "T", "en", Role::Target);
  const std::vector<SpanLink> links = {gen::link("L", Span{0, 4}, Span{0, 4}, std::nullopt),
                                       gen::link("A", std::nullopt, std::nullopt, std::nullopt)};
  const std::vector<WordLink> words = {{1, 1, Strength::Sure, "L"}, {0, 0, Strength::Sure, "L"}};
  const auto out = sub_segment(src, tgt, links, words);
  EXPECT_EQ(out.span_links, links);
  EXPECT_EQ(out.word_links, words);
}

TEST(SubSegment, StraddlingWordLinksAreDropped) {
  const auto src = make_side({{"a", ",", "b", "c"}}, "S", "en", Role::Source);
  const auto tgt = make_side({{"x", ",", "y", "z"}}, "T", "en", Role::Target);
  const std::vector<SpanLink> links = {gen::link("L", Span{0, 4}, Span{0, 4}, std::nullopt)};
  const std::vector<WordLink> words = {{1, 1, Strength::Sure, "L"}, {0, 3, Strength::Sure, "L"}};
  const auto out = sub_segment(src, tgt, links, words);
  ASSERT_EQ(out.span_links.size(), 2u);
  ASSERT_EQ(out.word_links.size(), 1u);
  EXPECT_EQ(out.word_links[0].src, 1u);
}

TEST(SubSegment, CutPredicateIsPluggable) {
  const auto src = make_side({{"a", "b", "c"}}, "S", "en", Role::Source);
  const auto tgt = make_side({{"x", "y", "z"}}, "T", "en", Role::Target);
  const std::vector<SpanLink> links = {gen::link("L", Span{0, 3}, Span{0, 3}, std::nullopt)};
  const std::vector<WordLink> words = {{0, 0, Strength::Sure, "L"}};
  const auto out = sub_segment(src, tgt, links, words, [](const Token&, const Token&) { return true; });
  ASSERT_EQ(out.span_links.size(), 2u);
  EXPECT_EQ(out.span_links[0].src, (Span{0, 1}));
}

TEST(SubSegmentProperty, CoverageKeptAndSpansNeverGrow) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    auto doc = gen::random_complete_document(rng, 4, 40);
    for (auto& l : doc.span_links) l.label.reset();
    const auto out = sub_segment(doc.source, doc.target, doc.span_links, doc.word_links);
    for (Role r : {Role::Source, Role::Target}) {
      std::vector<int> before(doc.side(r).size(), 0), after(doc.side(r).size(), 0);
      for (const auto& l : doc.span_links)
        if (l.side(r))
          for (auto i = l.side(r)->start; i < l.side(r)->end; ++i) ++before[i];
      for (const auto& l : out.span_links)
        if (l.side(r))
          for (auto i = l.side(r)->start; i < l.side(r)->end; ++i) ++after[i];
      ASSERT_EQ(before, after);
    }
    std::size_t longest_before = 0, longest_after = 0;
    for (const auto& l : doc.span_links) longest_before = std::max(longest_before, l.src ? l.src->size() : 0);
    for (const auto& l : out.span_links) longest_after = std::max(longest_after, l.src ? l.src->size() : 0);
    ASSERT_LE(longest_after, longest_before);
    AlignmentDocument check = doc;
    check.span_links = out.span_links;
    check.word_links = out.word_links;
    ASSERT_TRUE(validate_document(check).ok());
  }
}

// ---- pipeline --------------------------------------------------------------

TEST(Pipeline, IdenticalTextsMatchDiagonalReference) {
  const auto src = side_from({"the speech was about health .", "we see a very long road .", "children walk to school ."},
                             Role::Source);
  auto tgt = src;
  tgt.role = Role::Target;
  tgt.doc_id = "T";
  const auto es = gen::fallback_embeddings(src), et = gen::fallback_embeddings(tgt);
  const auto doc = run_pipeline(src, tgt, {&es.lines, &es.tokens}, {&et.lines, &et.tokens}, AlignerParams{});
  std::vector<SpanLink> diagonal;
  for (std::size_t l = 0; l < src.lines.size(); ++l)
    diagonal.push_back(gen::link("d" + std::to_string(l), Span{src.lines[l].begin, src.lines[l].end},
                                 Span{tgt.lines[l].begin, tgt.lines[l].end}));
  const auto score = evaluate_span_alignment(diagonal, doc.span_links);
  EXPECT_DOUBLE_EQ(score.relaxed_f1, 1.0);
  for (const auto& l : doc.span_links) EXPECT_EQ(l.label, Label::TRAN);
  EXPECT_EQ(doc.word_links.size(), src.size());
}

TEST(Pipeline, EmptyTargetGivesAdditions) {
  const auto src = side_from({"one line here", "and another"}, Role::Source);
  const auto tgt = make_side({}, "T", "en", Role::Target);
  const auto es = gen::fallback_embeddings(src), et = gen::fallback_embeddings(tgt);
  const auto doc = run_pipeline(src, tgt, {&es.lines, &es.tokens}, {&et.lines, &et.tokens}, AlignerParams{});
  ASSERT_EQ(doc.span_links.size(), 2u);
  for (const auto& l : doc.span_links) {
    EXPECT_FALSE(l.two_sided());
    EXPECT_EQ(l.label, Label::ADDU);
  }
}

TEST(Pipeline, EmbeddingErrors) {
  const auto src = side_from({"one line here"}, Role::Source);
  auto tgt = src;
  tgt.role = Role::Target;
  const auto es = gen::fallback_embeddings(src), et = gen::fallback_embeddings(tgt, 32);
  EXPECT_THROW(run_pipeline(src, tgt, {&es.lines, nullptr}, {&et.lines, &et.tokens}, AlignerParams{}), Error);
  try {
    run_pipeline(src, tgt, {&es.lines, &es.tokens}, {&et.lines, &et.tokens}, AlignerParams{});
    FAIL() << "dimension mismatch accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SizeMismatch);
  }
  const auto wrong = gen::fallback_embeddings(side_from({"a", "b"}, Role::Target));
  EXPECT_THROW(run_pipeline(src, tgt, {&es.lines, &es.tokens}, {&wrong.lines, &wrong.tokens}, AlignerParams{}),
               Error);
}

TEST(PipelineProperty, OutputAlwaysValidAndComplete) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const auto [src, tgt] = gen::random_parallel_pair(rng, 10);
    const auto es = gen::fallback_embeddings(src), et = gen::fallback_embeddings(tgt);
    PipelineOptions opt;
    opt.sub_segment = trial % 2 == 0;
    const auto doc = run_pipeline(src, tgt, {&es.lines, &es.tokens}, {&et.lines, &et.tokens}, AlignerParams{}, opt);
    const auto rep = validate_document(doc);
    ASSERT_TRUE(rep.ok());
    ASSERT_TRUE(rep.is_complete);
  }
}

// ---- baselines -------------------------------------------------------------

TEST(BaselineWordAlign, IdenticalTextsGiveDiagonal) {
  const std::vector<std::string> words = {"the", "speech", "was", "about", "mothers",
                                          "health", "we", "see", "long", "road"};
  const auto e = fallback_embed(words, 64);
  PairSet diag;
  for (std::size_t i = 0; i < words.size(); ++i) diag.insert({i, i});
  EXPECT_EQ(baseline_word_align(e, e, AlignerParams{}), diag);
}

TEST(BaselineWordAlign, DistanceFilter) {
  const PairSet pairs = {{0, 60}, {0, 50}, {70, 19}, {5, 5}};
  EXPECT_EQ(filter_distance(pairs, 50), (PairSet{{0, 50}, {5, 5}}));
  // one distinctive token at source 0 and target 60
  std::vector<std::string> s(61, "filler"), t(61, "other");
  s[0] = "mayan";
  t[60] = "mayan";
  const auto es = fallback_embed(s, 64), et = fallback_embed(t, 64);
  AlignerParams p;
  p.itermax_iters = 1;
  const auto filtered = baseline_word_align(es, et, p);
  p.baseline_max_distance.reset();
  const auto all = baseline_word_align(es, et, p);
  EXPECT_TRUE(all.count({0, 60}));
  EXPECT_FALSE(filtered.count({0, 60}));
  EXPECT_TRUE(std::includes(all.begin(), all.end(), filtered.begin(), filtered.end()));
  for (const auto& [i, j] : all) EXPECT_EQ(filtered.count({i, j}) == 1, (i > j ? i - j : j - i) <= 50);
}

TEST(RandomBaseline, PreservesCountsAndLabels) {
  std::mt19937_64 rng(5);
  for (int d = 0; d < 10; ++d) {
    const auto ref = gen::random_complete_document(rng, 1, 50);
    std::multiset<Label> want;
    for (const auto& l : ref.span_links) want.insert(*l.label);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto out = random_baseline(ref, seed);
      std::multiset<Label> got;
      for (const auto& l : out.span_links) got.insert(*l.label);
      ASSERT_EQ(got, want);
      for (Role r : {Role::Source, Role::Target}) {
        const auto n = ref.side(r).size();
        ASSERT_EQ(count_boundaries(boundary_string(side_spans(out, r), n)),
                  count_boundaries(boundary_string(side_spans(ref, r), n)));
      }
      const auto rep = validate_document(out);
      ASSERT_TRUE(rep.ok());
      ASSERT_TRUE(rep.is_complete);
    }
    EXPECT_EQ(random_baseline(ref, 9), random_baseline(ref, 9));
  }
}

TEST(RandomBaseline, RequiresCompleteReference) {
  auto doc = gen::blank_document(3, 3);
  doc.span_links = {gen::link("a", Span{0, 2}, Span{0, 3})};
  EXPECT_THROW(random_baseline(doc, 1), Error);
}
