// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sprkit/pattern_engine.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "sprkit/error.hpp"
#include "support.hpp"

namespace sprkit {
namespace {

constexpr const char* kTextA = "the brown fox turned to escape hunter’s trap";
constexpr const char* kTextB = "the brown fox turned to opposite direction to avoid hunter’s trap ahead";

struct Encoded {
  Vocabulary vocab;
  std::vector<IdSeq> docs;
};

Encoded encode_texts(std::initializer_list<const char*> texts) {
  Encoded e;
  for (const char* t : texts) {
    auto seq = normalize_and_tokenize(t);
    IdSeq ids;
    for (const auto& tok : seq.tokens) ids.ids.push_back(e.vocab.intern(tok));
    e.docs.push_back(std::move(ids));
  }
  return e;
}

IdSeq ids(std::initializer_list<TokenId> v) { return IdSeq{v, ""}; }

std::vector<std::string> render(const std::vector<PatternHit>& hits, const Vocabulary& v) {
  std::vector<std::string> out;
  for (const auto& h : hits) {
    std::string s;
    for (TokenId t : h.tokens) s += (s.empty() ? "" : " ") + v.token_of(t);
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST(BuildIndex, SingleTokenDoc) {
  std::vector<IdSeq> docs{ids({0})};
  auto index = build_index(docs);
  EXPECT_EQ(index.size(), 2u);
  EXPECT_EQ(index.suffix_array().size(), 2u);
  for (auto v : index.lcp()) EXPECT_EQ(v, 0u);
}

TEST(BuildIndex, RepeatedPairShowsInLcp) {
  std::vector<IdSeq> docs{ids({0, 1, 0, 1})};  // a b a b
  auto index = build_index(docs);
  // The sentinel sorts above every token: "abab$"(0), "ab$"(2), "bab$"(1), "b$"(3), "$"(4).
  EXPECT_EQ(std::vector<std::uint32_t>(index.suffix_array().begin(), index.suffix_array().end()),
            (std::vector<std::uint32_t>{0, 2, 1, 3, 4}));
  EXPECT_EQ(std::vector<std::uint32_t>(index.lcp().begin(), index.lcp().end()),
            (std::vector<std::uint32_t>{0, 2, 0, 1, 0}));
}

TEST(BuildIndex, RandomInvariants) {
  std::mt19937_64 rng(101);
  std::vector<IdSeq> docs;
  for (int i = 0; i < 100; ++i) docs.push_back(testing::random_doc(rng, 8, 10 + rng() % 41));
  auto index = build_index(docs);
  const auto text = index.concat();
  const auto sa = index.suffix_array();
  const auto lcp = index.lcp();
  ASSERT_EQ(sa.size(), text.size());

  std::vector<std::uint32_t> sorted(sa.begin(), sa.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::uint32_t> expect(text.size());
  std::iota(expect.begin(), expect.end(), 0u);
  EXPECT_EQ(sorted, expect);

  for (std::size_t i = 1; i < sa.size(); ++i) {
    auto a = text.subspan(sa[i - 1]);
    auto b = text.subspan(sa[i]);
    EXPECT_TRUE(std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end())) << i;
    std::size_t common = 0;
    while (common < a.size() && common < b.size() && a[common] == b[common]) ++common;
    EXPECT_EQ(lcp[i], common) << i;
  }
  for (std::size_t p = 0; p < index.size(); ++p) {
    EXPECT_EQ(index.global_position(index.doc_of(p), index.doc_offset(p)), p);
  }
}

TEST(BuildIndex, RejectsEmptyAndOversized) {
  try {
    build_index({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kInvalidArgument);
  }
  std::vector<IdSeq> docs{ids({1, 2, 3})};
  try {
    build_index(docs, IndexLimits{3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kCapacityExceeded);
  }
}

TEST(CommonPatterns, WorkedExample) {
  auto e = encode_texts({kTextA, kTextB});
  auto index = build_index(e.docs);
  auto hits = common_patterns(index, 0, 1, 4);
  EXPECT_EQ(render(hits, e.vocab), (std::vector<std::string>{"brown fox turned to", "the brown fox turned"}));
  for (const auto& h : hits) {
    EXPECT_TRUE(std::is_sorted(h.occurrences.begin(), h.occurrences.end()));
  }
  EXPECT_EQ(hits, common_patterns_bruteforce(e.docs[0], e.docs[1], 4));
}

TEST(CommonPatterns, IdenticalDocsReturnEveryGram) {
  std::vector<IdSeq> docs{ids({4, 5, 6, 7, 8}), ids({4, 5, 6, 7, 8})};
  auto index = build_index(docs);
  for (std::size_t l = 1; l <= 5; ++l) EXPECT_EQ(common_patterns(index, 0, 1, l).size(), 6 - l);
}

TEST(CommonPatterns, LongerThanDocsIsEmpty) {
  std::vector<IdSeq> docs{ids({1, 2}), ids({1, 2, 3})};
  auto index = build_index(docs);
  EXPECT_TRUE(common_patterns(index, 0, 1, 4).empty());
  EXPECT_TRUE(common_patterns_bruteforce(docs[0], docs[1], 4).empty());
}

TEST(CommonPatterns, ArgumentErrors) {
  std::vector<IdSeq> docs{ids({1, 2}), ids({1, 2})};
  auto index = build_index(docs);
  auto code_of = [&](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::kIoError;
  };
  EXPECT_EQ(code_of([&] { common_patterns(index, 0, 1, 0); }), Errc::kInvalidArgument);
  EXPECT_EQ(code_of([&] { common_patterns(index, 0, 0, 2); }), Errc::kInvalidArgument);
  EXPECT_EQ(code_of([&] { common_patterns(index, 0, 5, 2); }), Errc::kUnknownDocument);
}

TEST(CommonPatterns, PatternsInsideOneDocOnlyAreIgnored) {
  // "1 2" repeats inside doc 0 but never appears in doc 1.
  std::vector<IdSeq> docs{ids({1, 2, 1, 2, 3}), ids({2, 3, 9})};
  auto index = build_index(docs);
  auto hits = common_patterns(index, 0, 1, 2);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].tokens, (std::vector<TokenId>{2, 3}));
  EXPECT_EQ(hits[0].occurrences, (std::vector<Occurrence>{{0, 3}, {1, 0}}));
}

TEST(CommonPatterns, ThirdDocumentDoesNotLeakIn) {
  std::vector<IdSeq> docs{ids({1, 2, 3}), ids({7, 8, 9}), ids({1, 2, 3})};
  auto index = build_index(docs);
  EXPECT_TRUE(common_patterns(index, 0, 1, 2).empty());
  EXPECT_EQ(common_patterns(index, 0, 2, 2).size(), 2u);
}

TEST(CommonPatterns, MatchesBruteForceOnRandomPairs) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t alphabet = 5 + rng() % 46;
    std::vector<IdSeq> docs{testing::random_doc(rng, alphabet, 10 + rng() % 291),
                            testing::random_doc(rng, alphabet, 10 + rng() % 291)};
    const std::size_t l = 1 + rng() % 12;
    auto index = build_index(docs);
    ASSERT_EQ(common_patterns(index, 0, 1, l), common_patterns_bruteforce(docs[0], docs[1], l)) << trial;
  }
}

TEST(CommonPatternsUnion, SingleOtherMatchesPairRestrictedToTarget) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<IdSeq> docs{testing::random_doc(rng, 6, 60), testing::random_doc(rng, 6, 60)};
    auto index = build_index(docs);
    const DocId others[] = {1};
    auto uni = common_patterns_union(index, 0, others, 3);
    auto pair = common_patterns(index, 0, 1, 3);
    for (auto& h : pair) std::erase_if(h.occurrences, [](const Occurrence& o) { return o.doc != 0; });
    EXPECT_EQ(uni, pair);
  }
}

TEST(CommonPatternsUnion, CollectsPatternsFromEachOther) {
  // target shares "1 2" only with doc 1 and "5 6" only with doc 2.
  std::vector<IdSeq> docs{ids({1, 2, 9, 5, 6}), ids({1, 2, 7}), ids({8, 5, 6})};
  auto index = build_index(docs);
  const DocId others[] = {1, 2};
  auto hits = common_patterns_union(index, 0, others, 2);
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0].tokens, (std::vector<TokenId>{1, 2}));
  EXPECT_EQ(hits[1].tokens, (std::vector<TokenId>{5, 6}));
}

TEST(CommonPatternsUnion, DisjointOthersGiveNothing) {
  std::vector<IdSeq> docs{ids({1, 2, 3}), ids({4, 5, 6}), ids({7, 8, 9})};
  auto index = build_index(docs);
  const DocId others[] = {1, 2};
  EXPECT_TRUE(common_patterns_union(index, 0, others, 1).empty());
}

TEST(CoverageMask, WorkedExampleCoversFiveWords) {
  auto e = encode_texts({kTextA, kTextB});
  auto index = build_index(e.docs);
  auto hits = common_patterns(index, 0, 1, 4);
  auto mask = coverage_mask(8, hits, 0, 4);
  EXPECT_EQ(mask.covered_count, 5u);
  EXPECT_EQ(mask.covered, (std::vector<bool>{true, true, true, true, true, false, false, false}));
}

TEST(CoverageMask, NoHitsAndFullCoverage) {
  EXPECT_EQ(coverage_mask(5, {}, 0, 2).covered_count, 0u);
  std::vector<PatternHit> hits{{{1, 2}, {{0, 0}, {0, 2}}}, {{2, 1}, {{0, 1}, {0, 3}}}};
  EXPECT_EQ(coverage_mask(5, hits, 0, 2).covered_count, 5u);
}

TEST(CoverageMask, OutOfBoundsThrows) {
  std::vector<PatternHit> hits{{{1, 2}, {{0, 4}}}};
  try {
    coverage_mask(5, hits, 0, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kOccurrenceOutOfBounds);
  }
}

TEST(Engines, SuffixArrayAndBruteForceAgreeOnUnions) {
  std::mt19937_64 rng(11);
  SuffixArrayEngine sa;
  BruteForceEngine bf;
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<IdSeq> docs;
    for (int d = 0; d < 5; ++d) docs.push_back(testing::random_doc(rng, 5 + rng() % 10, 20 + rng() % 80));
    auto a = sa.prepare(docs);
    auto b = bf.prepare(docs);
    const std::size_t l = 1 + rng() % 6;
    const DocId others[] = {1, 2, 4};
    EXPECT_EQ(a->common_union(0, others, l), b->common_union(0, others, l));
    EXPECT_EQ(a->common(2, 3, l), b->common(2, 3, l));
  }
}

}  // namespace
}  // namespace sprkit
