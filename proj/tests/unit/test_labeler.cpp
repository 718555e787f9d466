#include <gtest/gtest.h>

#include <chrono>
#include <numeric>
#include <random>

#include "sialign/core/validate.hpp"
#include "sialign/labeler/mlp.hpp"
#include "sialign/labeler/model_io.hpp"
#include "sialign/labeler/predict.hpp"
#include "sialign/labeler/train.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace sialign;
namespace gen = sialign::testing;

using gen::separable_examples;

TEST(Features, Layout) {
  const auto f = extract_features(gen::link("a", Span{0, 10}, Span{0, 5}), 0.5);
  EXPECT_EQ(f[0], 0.5);
  EXPECT_DOUBLE_EQ(f[1], std::log(11.0));
  EXPECT_DOUBLE_EQ(f[2], std::log(6.0));
  const auto same = extract_features(gen::link("b", Span{0, 4}, Span{4, 8}), 1.0);
  EXPECT_EQ(same[1], same[2]);
  try {
    extract_features(gen::link("c", Span{0, 4}, std::nullopt, Label::ADDU), 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OneSided);
  }
  EXPECT_THROW(extract_features(gen::link("d", Span{0, 1}, Span{0, 1}), 1.5), Error);
}

TEST(Mlp, ZeroParamsGiveUniform) {
  const auto p = forward(MLPParams::zeros(), {0.3, 1.0, 2.0});
  for (double v : p) EXPECT_DOUBLE_EQ(v, 0.2);
  EXPECT_EQ(predict_class(p), Label::TRAN);
}

TEST(Mlp, NonFiniteParamsRejected) {
  auto p = MLPParams::zeros();
  p.w2[7] = std::nan("");
  EXPECT_THROW(forward(p, {0, 0, 0}), Error);
}

TEST(MlpProperty, SoftmaxSumsToOneAndShiftInvariance) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    auto p = MLPParams::random(rng());
    const FeatureVector x{gen::uniform_real(rng, -1, 1), gen::uniform_real(rng, 0, 5), gen::uniform_real(rng, 0, 5)};
    const auto probs = forward(p, x);
    ASSERT_NEAR(std::accumulate(probs.begin(), probs.end(), 0.0), 1.0, 1e-9);
    const Label before = predict_class(probs);
    const double shift = gen::uniform_real(rng, -5, 5);
    for (auto& b : p.b3) b += shift;
    ASSERT_EQ(predict_class(forward(p, x)), before);
  }
}

TEST(MlpProperty, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(12);
  double worst = 0;
  for (int draw = 0; draw < 20; ++draw) {
    const auto p = MLPParams::random(rng());
    const FeatureVector x{gen::uniform_real(rng, -1, 1), gen::uniform_real(rng, 0, 4), gen::uniform_real(rng, 0, 4)};
    std::vector<std::pair<std::size_t, std::size_t>> coords;
    for (std::size_t b = 0; b < 6; ++b)
      for (int k = 0; k < 25; ++k) coords.push_back({b, gen::uniform(rng, 0, p.blocks()[b]->size() - 1)});
    worst = std::max(worst, oracle::gradient_check(p, x, gen::uniform(rng, 0, 4), coords));
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(Train, SeparableDataIsLearned) {
  const auto data = separable_examples(1, 200);
  TrainConfig cfg;
  cfg.seed = 3;
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = train(data, cfg);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 60.0);
  EXPECT_GE(res.heldout_accuracy, 0.95);
  EXPECT_EQ(res.train_size, 160u);
  EXPECT_EQ(res.heldout_size, 40u);
  ASSERT_FALSE(res.train_loss.empty());
  EXPECT_LE(res.train_loss.front(), res.initial_train_loss);
}

TEST(Train, DeterministicForSeed) {
  const auto data = separable_examples(2, 60);
  TrainConfig cfg;
  cfg.max_epochs = 15;
  cfg.seed = 9;
  EXPECT_EQ(train(data, cfg).params, train(data, cfg).params);
  cfg.patience = 0;
  EXPECT_EQ(train(data, cfg).params, train(data, cfg).params);
}

TEST(Train, InputErrorsAndImbalanceWarning) {
  auto data = separable_examples(4, 40);
  EXPECT_THROW(train({data.begin(), data.begin() + 5}, {}), Error);
  auto single = data;
  for (auto& e : single) e.label = Label::PARA;
  EXPECT_THROW(train(single, {}), Error);
  auto additions = data;
  additions[0].label = Label::ADDU;
  EXPECT_THROW(train(additions, {}), Error);

  std::vector<std::string> warnings;
  auto previous = set_warning_sink([&](const std::string& m) { warnings.push_back(m); });
  auto skewed = separable_examples(5, 44);
  for (std::size_t i = 2; i < skewed.size(); ++i) skewed[i].label = Label::TRAN;
  TrainConfig cfg;
  cfg.max_epochs = 1;
  train(skewed, cfg);
  set_warning_sink(previous);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("imbalance"), std::string::npos);
}

TEST(ModelIo, RoundTripAndHeader) {
  auto p = MLPParams::random(77);
  const auto bytes = encode_model(p);
  EXPECT_EQ(bytes.rfind("sialign-mlp 1\nclasses TRAN PARA SUM GEN REPL\n", 0), 0u);
  EXPECT_NE(bytes.find("activation relu\n"), std::string::npos);
  EXPECT_NE(bytes.find("seed 77\nlayers 3 100 100 5\n\n"), std::string::npos);
  EXPECT_EQ(decode_model(bytes), p);
  EXPECT_THROW(decode_model(bytes.substr(0, bytes.size() - 8)), Error);
  auto relabeled = bytes;
  relabeled.replace(relabeled.find("relu"), 4, "tanh");
  EXPECT_THROW(decode_model(relabeled), Error);
}

TEST(Predict, DefaultModeLabels) {
  auto doc = gen::blank_document(6, 4);
  doc.span_links = {gen::link("a", Span{0, 2}, Span{0, 2}, std::nullopt), gen::link("b", Span{2, 4}, Span{2, 4}, std::nullopt),
                    gen::link("c", Span{4, 6}, std::nullopt, std::nullopt)};
  const auto out = predict_labels(doc, nullptr, {});
  EXPECT_EQ(out.span_links[0].label, Label::TRAN);
  EXPECT_EQ(out.span_links[1].label, Label::TRAN);
  EXPECT_EQ(out.span_links[2].label, Label::ADDU);
  EXPECT_TRUE(validate_document(out).ok());
}

TEST(Predict, ClassifierMode) {
  auto doc = gen::blank_document(6, 4);
  doc.span_links = {gen::link("a", Span{0, 2}, Span{0, 2}, std::nullopt), gen::link("b", Span{2, 4}, Span{2, 4}, std::nullopt),
                    gen::link("c", Span{4, 6}, std::nullopt, std::nullopt)};
  const auto zero = MLPParams::zeros();
  const SpanSimilarities sims = {{"a", 0.9}, {"b", -0.3}};
  const auto out = predict_labels(doc, &zero, sims);
  EXPECT_EQ(out.span_links[0].label, Label::TRAN);
  EXPECT_EQ(out.span_links[1].label, Label::TRAN);
  EXPECT_EQ(out.span_links[2].label, Label::ADDU);
  EXPECT_THROW(predict_labels(doc, &zero, {{"a", 0.9}}), Error);
  EXPECT_THROW(predict_labels(out, nullptr, {}), Error);

  std::mt19937_64 rng(6);
  for (int i = 0; i < 20; ++i) {
    const auto p = MLPParams::random(rng());
    for (const auto& l : predict_labels(doc, &p, sims).span_links)
      if (l.two_sided()) EXPECT_FALSE(is_addition(*l.label));
  }
}

TEST(Predict, TrainingExamplesSkipAdditions) {
  auto doc = gen::blank_document(6, 4);
  doc.span_links = {gen::link("a", Span{0, 2}, Span{0, 2}, Label::PARA), gen::link("b", Span{2, 4}, Span{2, 4}, Label::REPL),
                    gen::link("c", Span{4, 6}, std::nullopt, Label::ADDF)};
  const auto ex = training_examples(doc, {{"a", 0.5}, {"b", 0.1}});
  ASSERT_EQ(ex.size(), 2u);
  EXPECT_EQ(ex[0].label, Label::PARA);
  EXPECT_EQ(ex[1].x[0], 0.1);
}
