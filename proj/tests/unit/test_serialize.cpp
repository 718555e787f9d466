#include <gtest/gtest.h>

#include <random>

#include "sialign/core/serialize.hpp"
#include "sialign/core/validate.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace sialign;
using sialign::testing::blank_document;
using sialign::testing::link;

TEST(Serialize, RoundTripIsIdentityAndByteStable) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto doc = sialign::testing::random_complete_document(rng);
    doc.source.tokens[0].is_name = true;
    doc.meta.duration_seconds = 612.125 + trial / 3.0;
    doc.meta.split = trial % 2 ? "dev" : "test";
    const auto bytes = serialize(doc);
    const auto back = deserialize(bytes);
    ASSERT_EQ(back, doc);
    EXPECT_EQ(serialize(back), bytes);
  }
}

TEST(Serialize, EmptyDocumentRoundTrips) {
  const auto doc = blank_document(3, 2);
  const auto back = deserialize(serialize(doc));
  EXPECT_EQ(back, doc);
  EXPECT_FALSE(validate_document(back).is_complete);
}

TEST(Serialize, UnlabeledLinksSerializeAsNull) {
  auto doc = blank_document(2, 2);
  doc.span_links = {link("x", Span{0, 2}, Span{0, 2}, std::nullopt)};
  const auto text = serialize(doc);
  EXPECT_NE(text.find("\"label\": null"), std::string::npos);
  EXPECT_EQ(deserialize(text), doc);
}

namespace {
std::string corrupt(const std::string& json, const std::string& from, const std::string& to) {
  auto out = json;
  const auto pos = out.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  out.replace(pos, from.size(), to);
  return out;
}

ErrorCode code_of(const std::string& bytes) {
  try {
    deserialize(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected deserialize to fail";
  return ErrorCode::Io;
}
}  // namespace

TEST(Serialize, RejectsBadPayloads) {
  auto doc = blank_document(3, 3);
  doc.span_links = {link("a", Span{0, 3}, Span{0, 3}), link("b", std::nullopt, std::nullopt, std::nullopt)};
  doc.span_links.pop_back();
  doc.word_links = {{0, 1, Strength::Sure, "a"}};
  const auto good = serialize(doc);
  EXPECT_EQ(code_of(corrupt(good, "\"TRAN\"", "\"FOO\"")), ErrorCode::UnknownLabel);
  EXPECT_EQ(code_of(corrupt(good, "\"sure\"", "\"maybe\"")), ErrorCode::UnknownStrength);
  auto j = nlohmann::ordered_json::parse(good);
  j["span_links"][0]["src"] = {0, 9};
  EXPECT_EQ(code_of(j.dump()), ErrorCode::IndexOutOfRange);
  EXPECT_EQ(code_of(corrupt(good, "\"src\": 0", "\"src\": 5")), ErrorCode::IndexOutOfRange);
  EXPECT_EQ(code_of("{not json"), ErrorCode::MalformedDocument);
  EXPECT_EQ(code_of("{\"pair_id\": \"x\"}"), ErrorCode::MalformedDocument);

  auto dup = blank_document(3, 3);
  dup.span_links = {link("a", Span{0, 1}, Span{0, 1}), link("a", Span{1, 3}, Span{1, 3})};
  EXPECT_EQ(code_of(serialize(dup)), ErrorCode::DuplicateId);
}
