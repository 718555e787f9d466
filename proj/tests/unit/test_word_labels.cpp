#include <gtest/gtest.h>

#include <random>

#include "sialign/metrics/labels.hpp"
#include "sialign/metrics/report.hpp"
#include "sialign/metrics/word_alignment.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace sialign;
using sialign::testing::link;

TEST(WordAlignment, HandComputedExample) {
  // A = {(0,0),(1,1),(2,3)}, S = {(0,0),(1,2)}, P adds (2,3) and (1,1).
  const PairSet pred = {{0, 0}, {1, 1}, {2, 3}};
  const PairSet sure = {{0, 0}, {1, 2}};
  const PairSet possible = {{1, 1}, {2, 3}};
  const auto s = evaluate_word_alignment(pred, sure, possible);
  // |A∩S| = 1, |A∩P| = 3 once P includes S: AER = 1 - 4/5.
  EXPECT_DOUBLE_EQ(s.aer, 0.2);
  EXPECT_DOUBLE_EQ(s.precision, 1.0);
  EXPECT_DOUBLE_EQ(*s.recall, 0.5);
  EXPECT_DOUBLE_EQ(*s.f1, 2.0 / 3.0);
}

TEST(WordAlignment, SureOnlyExample) {
  // Three of four predictions correct, three sure links.
  const PairSet pred = {{0, 0}, {1, 1}, {2, 2}, {3, 0}};
  const PairSet sure = {{0, 0}, {1, 1}, {4, 4}};
  const auto s = evaluate_word_alignment(pred, sure, {});
  EXPECT_DOUBLE_EQ(s.aer, 1.0 - 4.0 / 7.0);
  EXPECT_DOUBLE_EQ(s.precision, 0.5);
  EXPECT_DOUBLE_EQ(*s.recall, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(*s.f1, 4.0 / 7.0);
}

TEST(WordAlignment, EmptyCases) {
  const auto both = evaluate_word_alignment({}, {}, {});
  EXPECT_EQ(both.aer, 0.0);
  EXPECT_EQ(*both.f1, 1.0);
  const auto no_sure = evaluate_word_alignment({{0, 0}}, {}, {{0, 0}});
  EXPECT_FALSE(no_sure.recall.has_value());
  EXPECT_FALSE(no_sure.f1.has_value());
  EXPECT_EQ(no_sure.precision, 1.0);
  const auto no_pred = evaluate_word_alignment({}, {{0, 0}}, {});
  EXPECT_EQ(no_pred.aer, 1.0);
  EXPECT_EQ(*no_pred.recall, 0.0);
}

TEST(WordAlignment, MacroAverageSkipsUndefinedRecall) {
  std::vector<std::string> warnings;
  auto previous = set_warning_sink([&](const std::string& m) { warnings.push_back(m); });
  const auto avg = macro_average({evaluate_word_alignment({{0, 0}}, {{0, 0}}, {}),
                                  evaluate_word_alignment({{0, 0}}, {}, {})});
  set_warning_sink(previous);
  EXPECT_EQ(*avg.f1, 1.0);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(WordAlignmentProperty, BoundsAndIdentity) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    PairSet sure, possible, pred;
    for (int i = 0; i < 8; ++i) {
      const TokenPair p{sialign::testing::uniform(rng, 0, 5), sialign::testing::uniform(rng, 0, 5)};
      switch (sialign::testing::uniform(rng, 0, 2)) {
        case 0: sure.insert(p); break;
        case 1: possible.insert(p); break;
        default: pred.insert(p);
      }
    }
    const auto s = evaluate_word_alignment(pred, sure, possible);
    ASSERT_GE(s.aer, 0.0);
    ASSERT_LE(s.aer, 1.0);
    if (!sure.empty()) {
      const auto self = evaluate_word_alignment(sure, sure, possible);
      ASSERT_EQ(self.aer, 0.0);
      ASSERT_EQ(*self.f1, 1.0);
    }
  }
}

TEST(Labels, AccuracyAndMacroF1) {
  const std::vector<Label> ref = {Label::TRAN, Label::TRAN, Label::SUM, Label::SUM};
  const std::vector<Label> hyp = {Label::TRAN, Label::TRAN, Label::SUM, Label::TRAN};
  const auto s = evaluate_label_sequences(ref, hyp);
  EXPECT_DOUBLE_EQ(s.accuracy, 0.75);
  // TRAN: p 2/3 r 1 -> 0.8; SUM: p 1 r 1/2 -> 2/3.
  EXPECT_DOUBLE_EQ(s.macro_f1, (0.8 + 2.0 / 3.0) / 2);
}

TEST(Labels, DocumentLevelRequiresCompleteness) {
  auto doc = sialign::testing::blank_document(4, 4);
  doc.span_links = {link("a", Span{0, 2}, Span{0, 2}), link("b", Span{2, 4}, Span{2, 4}, Label::PARA)};
  auto hyp = doc;
  hyp.span_links[1].label = Label::TRAN;
  const auto s = evaluate_labels(doc, hyp);
  EXPECT_DOUBLE_EQ(s.accuracy, 0.5);
  hyp.span_links.pop_back();
  EXPECT_THROW(evaluate_labels(doc, hyp), Error);
}

TEST(Kappa, HandComputed) {
  // po = 0.75, pe = 0.5 -> 0.5
  const std::vector<int> a = {1, 1, 0, 0}, b = {1, 1, 0, 1};
  const auto k = cohen_kappa(a, b);
  EXPECT_DOUBLE_EQ(k.observed_agreement, 0.75);
  EXPECT_DOUBLE_EQ(k.expected_agreement, 0.5);
  EXPECT_DOUBLE_EQ(k.kappa, 0.5);
}

TEST(Kappa, DegenerateExpectedAgreement) {
  const std::vector<int> same = {2, 2, 2};
  EXPECT_EQ(cohen_kappa(same, same).kappa, 1.0);
  EXPECT_THROW(cohen_kappa(std::vector<int>{}, std::vector<int>{}), Error);
  EXPECT_THROW(cohen_kappa(std::vector<int>{1}, std::vector<int>{1, 2}), Error);
}

TEST(KappaProperty, SymmetricAndBounded) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = sialign::testing::uniform(rng, 1, 40);
    std::vector<int> a(n), b(n);
    for (auto& x : a) x = static_cast<int>(sialign::testing::uniform(rng, 0, 3));
    for (auto& x : b) x = static_cast<int>(sialign::testing::uniform(rng, 0, 3));
    const auto ab = cohen_kappa(a, b), ba = cohen_kappa(b, a);
    ASSERT_DOUBLE_EQ(ab.kappa, ba.kappa);
    ASSERT_LE(ab.kappa, 1.0);
    ASSERT_EQ(cohen_kappa(a, a).kappa, 1.0);
  }
}

TEST(Kappa, DocumentLevel) {
  auto a = sialign::testing::blank_document(4, 4);
  a.span_links = {link("a", Span{0, 2}, Span{0, 2}), link("b", Span{2, 4}, Span{2, 4}, Label::PARA)};
  auto b = a;
  EXPECT_EQ(segmentation_kappa(a, b, Role::Source).kappa, 1.0);
  EXPECT_EQ(label_kappa(a, b, Role::Target).kappa, 1.0);
  b.span_links = {link("x", Span{0, 4}, Span{0, 4})};
  // a: boundaries {0,1,0}, b: {0,0,0}: po = 2/3, pe = 2/3 -> 0
  EXPECT_DOUBLE_EQ(segmentation_kappa(a, b, Role::Source).kappa, 0.0);
}

TEST(Report, EvaluateAndAggregate) {
  std::mt19937_64 rng(3);
  std::vector<DocumentEvaluation> evals;
  for (int i = 0; i < 5; ++i) {
    const auto doc = sialign::testing::random_complete_document(rng);
    const auto e = evaluate_document(doc, doc);
    ASSERT_EQ(e.segmentation_source.pk, 0.0);
    ASSERT_TRUE(e.labels.has_value());
    ASSERT_EQ(e.labels->accuracy, 1.0);
    evals.push_back(e);
  }
  const auto row = aggregate("oracle", evals);
  EXPECT_EQ(row.recordings, 5u);
  EXPECT_EQ(row.exact_with, 100.0);
  EXPECT_EQ(*row.label_accuracy, 1.0);
  std::ostringstream table, kv;
  write_table(table, {row});
  write_key_values(kv, {row});
  EXPECT_NE(table.str().find("oracle"), std::string::npos);
  EXPECT_NE(kv.str().find("oracle.label.accuracy=1.000000"), std::string::npos);
}
