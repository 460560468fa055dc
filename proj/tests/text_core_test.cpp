// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sprkit/text_core.hpp"

#include <random>
#include <set>

#include <gtest/gtest.h>

#include "sprkit/error.hpp"

namespace sprkit {
namespace {

using Tokens = std::vector<std::string>;

TEST(Tokenize, ExampleSentenceHasEightTokens) {
  auto seq = normalize_and_tokenize("the brown fox turned to escape hunter’s trap");
  EXPECT_EQ(seq.size(), 8u);
  EXPECT_EQ(seq.tokens[6], "hunter’s");
}

TEST(Tokenize, EmptyInput) {
  EXPECT_TRUE(normalize_and_tokenize("").tokens.empty());
  EXPECT_TRUE(normalize_and_tokenize(" \t\n ").tokens.empty());
}

TEST(Tokenize, DefaultPolicyLowercasesAndStripsEdges) {
  EXPECT_EQ(normalize_and_tokenize("The  BROWN, fox.").tokens, (Tokens{"the", "brown", "fox"}));
}

TEST(Tokenize, InnerPunctuationSurvives) {
  EXPECT_EQ(normalize_and_tokenize("(well-known) \"don't\" ...").tokens, (Tokens{"well-known", "don't"}));
}

TEST(Tokenize, PolicyFlagsAreHonoured) {
  TokenizationPolicy keep;
  keep.lowercase = false;
  keep.strip_punctuation = false;
  EXPECT_EQ(normalize_and_tokenize("The  BROWN, fox.", keep).tokens, (Tokens{"The", "BROWN,", "fox."}));
}

TEST(Tokenize, NfcMakesComposedAndDecomposedEqual) {
  auto composed = normalize_and_tokenize("caf\xC3\xA9");
  auto decomposed = normalize_and_tokenize("cafe\xCC\x81");
  EXPECT_EQ(composed.tokens, decomposed.tokens);
  EXPECT_EQ(composed.tokens, (Tokens{"caf\xC3\xA9"}));
}

TEST(Tokenize, NoBreakSpaceSplitsOnlyWhenCollapsing) {
  const std::string text = "a\xC2\xA0" "b c";
  EXPECT_EQ(normalize_and_tokenize(text).tokens, (Tokens{"a", "b", "c"}));
  TokenizationPolicy strict;
  strict.collapse_whitespace = false;
  EXPECT_EQ(normalize_and_tokenize(text, strict).tokens, (Tokens{"a\xC2\xA0" "b", "c"}));
}

TEST(Tokenize, SourceIdCarried) {
  EXPECT_EQ(normalize_and_tokenize("x", {}, "doc7").source_id, "doc7");
}

TEST(Tokenize, WordCountMatchesTokens) {
  EXPECT_EQ(word_count("One, two; THREE."), 3u);
}

TEST(Policy, RoundTrips) {
  TokenizationPolicy p;
  p.strip_punctuation = false;
  EXPECT_EQ(to_string(p), "lowercase=1,strip_punctuation=0,collapse_whitespace=1");
  EXPECT_EQ(parse_policy(to_string(p)), p);
}

TEST(Vocabulary, DuplicatesCollapse) {
  TokenSeq s{{"a", "b", "a"}, ""};
  auto v = build_vocabulary(std::span(&s, 1));
  EXPECT_EQ(v.size(), 2u);
  EXPECT_EQ(v.id_of("a"), 0u);
  EXPECT_EQ(v.id_of("b"), 1u);
}

TEST(Vocabulary, EmptyInput) { EXPECT_TRUE(build_vocabulary({}).empty()); }

TEST(Vocabulary, SharedTokensCountedOnce) {
  std::vector<TokenSeq> docs{{{"x", "y", "z", "y"}, ""}, {{"z", "x", "y"}, ""}};
  std::set<std::string> distinct(docs[0].tokens.begin(), docs[0].tokens.end());
  EXPECT_EQ(build_vocabulary(docs).size(), distinct.size());
}

TEST(Vocabulary, SentinelsLieAboveTokens) {
  TokenSeq s{{"a", "b"}, ""};
  auto v = build_vocabulary(std::span(&s, 1));
  EXPECT_GE(v.sentinel(0), v.size());
  EXPECT_NE(v.sentinel(0), v.sentinel(1));
}

TEST(Encode, MapsIds) {
  TokenSeq s{{"a", "b", "a"}, "d"};
  auto v = build_vocabulary(std::span(&s, 1));
  auto ids = encode(s, v);
  EXPECT_EQ(ids.ids, (std::vector<TokenId>{0, 1, 0}));
  EXPECT_EQ(ids.source_id, "d");
}

TEST(Encode, EmptySeq) {
  Vocabulary v;
  EXPECT_TRUE(encode(TokenSeq{}, v).ids.empty());
}

TEST(Encode, UnknownTokenThrows) {
  Vocabulary v;
  v.intern("a");
  try {
    encode(TokenSeq{{"a", "zz"}, ""}, v);
    FAIL() << "expected UnknownToken";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kUnknownToken);
  }
}

TEST(Encode, RandomRoundTrip) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    TokenSeq doc;
    for (int i = 0; i < 50; ++i) doc.tokens.push_back("w" + std::to_string(rng() % 20));
    auto v = build_vocabulary(std::span(&doc, 1));
    EXPECT_EQ(decode(encode(doc, v), v), doc);
  }
}

}  // namespace
}  // namespace sprkit
