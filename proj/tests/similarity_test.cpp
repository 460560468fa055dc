// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sprkit/similarity.hpp"

#include <random>

#include <gtest/gtest.h>

#include "sprkit/error.hpp"
#include "support.hpp"

namespace sprkit {
namespace {

IdSeq encode_with(Vocabulary& v, const char* text) {
  IdSeq out;
  for (const auto& tok : normalize_and_tokenize(text).tokens) out.ids.push_back(v.intern(tok));
  return out;
}

const SuffixArrayEngine kEngine;

TEST(SprPair, WorkedExample) {
  Vocabulary v;
  auto a = encode_with(v, "the brown fox turned to escape hunter’s trap");
  auto b = encode_with(v, "the brown fox turned to opposite direction to avoid hunter’s trap ahead");
  auto [sa, sb] = spr_pair(a, b, 4, kEngine);
  EXPECT_EQ(sa.covered_words, 5u);
  EXPECT_EQ(sb.covered_words, 5u);
  EXPECT_EQ(sa.text_length, 8u);
  EXPECT_EQ(sb.text_length, 12u);
  EXPECT_EQ(sa.value, 62.5);
  EXPECT_EQ(sb.value, 500.0 / 12.0);
}

TEST(SprPair, SelfIdentity) {
  std::mt19937_64 rng(5);
  auto a = testing::random_doc(rng, 7, 40);
  for (std::size_t l = 1; l <= a.size(); ++l) {
    auto [x, y] = spr_pair(a, a, l, kEngine);
    EXPECT_EQ(x.value, 100.0);
    EXPECT_EQ(y.value, 100.0);
  }
}

TEST(SprPair, DisjointVocabularies) {
  IdSeq a{{1, 2, 3, 1}, ""}, b{{4, 5, 6}, ""};
  auto [x, y] = spr_pair(a, b, 1, kEngine);
  EXPECT_EQ(x.value, 0.0);
  EXPECT_EQ(y.value, 0.0);
}

TEST(SprPair, EmptyTextIsZero) {
  IdSeq a{{}, ""}, b{{1, 2}, ""};
  auto [x, y] = spr_pair(a, b, 1, kEngine);
  EXPECT_EQ(x.value, 0.0);
  EXPECT_EQ(x.text_length, 0u);
  EXPECT_EQ(y.value, 0.0);
}

TEST(SprValue, RejectsImpossibleCounts) { EXPECT_THROW(SprValue::from_counts(3, 2), Error); }

TEST(SprUnion, CopyOfTargetCoversAll) {
  IdSeq t{{1, 2, 3, 4}, ""};
  std::vector<IdSeq> others{t};
  EXPECT_EQ(spr_union_group(t, others, 3, kEngine).value, 100.0);
}

TEST(SprUnion, PatternsFromDifferentOthersCombine) {
  Vocabulary v;
  auto t = encode_with(v, "a b c d");
  std::vector<IdSeq> others{encode_with(v, "a b x"), encode_with(v, "y c d")};
  auto s = spr_union_group(t, others, 2, kEngine);
  EXPECT_EQ(s.covered_words, 4u);
  EXPECT_EQ(s.value, 100.0);
}

TEST(SprUnion, DisjointOthers) {
  IdSeq t{{1, 2}, ""};
  std::vector<IdSeq> others{IdSeq{{3, 4}, ""}, IdSeq{{5}, ""}};
  EXPECT_EQ(spr_union_group(t, others, 1, kEngine).value, 0.0);
}

TEST(SprPair, AntiMonotoneInPatternLength) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t alphabet = 3 + rng() % 10;
    auto a = testing::random_doc(rng, alphabet, 20 + rng() % 100);
    auto b = testing::random_doc(rng, alphabet, 20 + rng() % 100);
    auto prev = spr_pair(a, b, 1, kEngine);
    for (std::size_t l = 2; l <= 15; ++l) {
      auto cur = spr_pair(a, b, l, kEngine);
      EXPECT_LE(cur.first.value, prev.first.value);
      EXPECT_LE(cur.second.value, prev.second.value);
      prev = cur;
    }
  }
}

TEST(SprPair, MatchesIndependentOracle) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t alphabet = 3 + rng() % 20;
    auto a = testing::random_doc(rng, alphabet, 10 + rng() % 150);
    auto b = testing::random_doc(rng, alphabet, 10 + rng() % 150);
    const std::size_t l = 1 + rng() % 8;
    auto [x, y] = spr_pair(a, b, l, kEngine);
    EXPECT_EQ(x.covered_words, testing::oracle_covered(a.ids, {b.ids}, l));
    EXPECT_EQ(y.covered_words, testing::oracle_covered(b.ids, {a.ids}, l));
  }
}

CorpusSlice two_group_slice(Vocabulary& v) {
  CorpusSlice slice;
  slice.labels = {GroupLabel::original("primary"), GroupLabel::control("control")};
  slice.documents.push_back({"d1", {encode_with(v, "a b c d"), encode_with(v, "a b x c d")}});
  slice.documents.push_back({"d2", {encode_with(v, "p q r"), encode_with(v, "p q s t")}});
  return slice;
}

TEST(SprMatrix, HandComputedTwoByTwo) {
  Vocabulary v;
  auto m = build_spr_matrix(two_group_slice(v), 2, kEngine);
  ASSERT_EQ(m.dim(), 2u);
  // d1: "a b" and "c d" cover all of A and 4 of 5 words of B.
  // d2: "p q" covers 2 of 3 and 2 of 4.
  EXPECT_EQ(m.cell(0, 1), (100.0 + 200.0 / 3.0) / 2.0);
  EXPECT_EQ(m.cell(1, 0), (80.0 + 50.0) / 2.0);
  EXPECT_EQ(m.cell(0, 0), m.cell(0, 1));  // with two groups the union is the single other group
  EXPECT_EQ(m.cell(1, 1), m.cell(1, 0));
  EXPECT_EQ(m.counts[0][1], 2u);
}

TEST(SprMatrix, IdenticalGroupsAreAllHundred) {
  IdSeq t{{1, 2, 3, 4, 5}, ""};
  CorpusSlice slice;
  slice.labels = standard_labels("o", 3, "c");
  slice.documents.push_back({"d", std::vector<std::optional<IdSeq>>(5, t)});
  for (std::size_t l = 1; l <= 5; ++l) {
    auto m = build_spr_matrix(slice, l, kEngine);
    for (std::size_t r = 0; r < 5; ++r) {
      for (std::size_t c = 0; c < 5; ++c) EXPECT_EQ(m.cell(r, c), 100.0);
    }
  }
}

TEST(SprMatrix, LabelsFollowDisplayOrder) {
  auto labels = standard_labels("original", 5, "control");
  ASSERT_EQ(labels.size(), 7u);
  EXPECT_EQ(labels[0].name, "original");
  EXPECT_EQ(labels[1].name, "CGPT_p=01");
  EXPECT_EQ(labels[5].name, "CGPT_p=05");
  EXPECT_EQ(labels[6].name, "control");
  EXPECT_EQ(labels[3].kind, GroupKind::kParaphrase);
  EXPECT_EQ(labels[3].index, 3);
}

TEST(SprMatrix, Errors) {
  CorpusSlice empty;
  empty.labels = standard_labels("o", 1, "c");
  try {
    build_spr_matrix(empty, 3, kEngine);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kEmptyCorpus);
  }
  CorpusSlice missing;
  missing.labels = standard_labels("o", 1, "c");
  missing.documents.push_back({"d", {IdSeq{{1}, ""}, std::nullopt, IdSeq{{1}, ""}}});
  try {
    build_spr_matrix(missing, 1, kEngine);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kMissingGroupText);
  }
}

TEST(SprMatrix, AgreesWithOracleAndAcrossEngines) {
  std::mt19937_64 rng(31);
  CorpusSlice slice;
  slice.labels = standard_labels("o", 3, "c");
  for (int d = 0; d < 9; ++d) {
    SliceDocument doc{"d" + std::to_string(d), {}};
    auto base = testing::random_doc(rng, 12, 60 + rng() % 40);
    for (int g = 0; g < 5; ++g) {
      IdSeq text = base;
      for (auto& t : text.ids) {
        if (rng() % 5 == 0) t = static_cast<TokenId>(rng() % 12);
      }
      doc.texts.push_back(text);
    }
    slice.documents.push_back(std::move(doc));
  }
  const std::size_t lengths[] = {1, 2, 3, 5, 8};
  auto fast = build_spr_matrices(slice, lengths, kEngine);
  auto slow = build_spr_matrices(slice, lengths, BruteForceEngine{});
  for (std::size_t li = 0; li < 5; ++li) {
    const std::size_t l = lengths[li];
    EXPECT_EQ(fast[li].cells, slow[li].cells);
    EXPECT_EQ(fast[li].cells, build_spr_matrix(slice, l, kEngine).cells);
    for (std::size_t r = 0; r < 5; ++r) {
      for (std::size_t c = 0; c < 5; ++c) {
        double sum = 0.0;
        for (const auto& doc : slice.documents) {
          const auto& target = doc.texts[r]->ids;
          std::vector<std::vector<TokenId>> others;
          for (std::size_t g = 0; g < 5; ++g) {
            if ((r == c && g != r) || (r != c && g == c)) others.push_back(doc.texts[g]->ids);
          }
          sum += testing::oracle_spr(testing::oracle_covered(target, others, l), target.size());
        }
        EXPECT_EQ(fast[li].cell(r, c), sum / 9.0) << "l=" << l << " r=" << r << " c=" << c;
      }
    }
  }
}

}  // namespace
}  // namespace sprkit
