// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sprkit/pattern_engine.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "sprkit/error.hpp"

namespace sprkit {
namespace {

// Prefix doubling with two counting-sort passes per round: O(n log n).
std::vector<std::uint32_t> build_suffix_array(std::span<const TokenId> text) {
  const std::size_t n = text.size();
  std::vector<std::uint32_t> sa(n), rank(n), tmp(n);
  if (n == 0) return sa;

  std::vector<TokenId> alphabet(text.begin(), text.end());
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
  for (std::size_t i = 0; i < n; ++i) {
    rank[i] = static_cast<std::uint32_t>(
        std::lower_bound(alphabet.begin(), alphabet.end(), text[i]) - alphabet.begin());
  }
  std::size_t classes = alphabet.size();

  std::vector<std::uint32_t> count;
  auto sort_by_rank = [&](const std::vector<std::uint32_t>& order) {
    count.assign(classes + 1, 0);
    for (std::size_t i = 0; i < n; ++i) ++count[rank[i] + 1];
    for (std::size_t c = 1; c <= classes; ++c) count[c] += count[c - 1];
    for (std::uint32_t pos : order) sa[count[rank[pos]]++] = pos;
  };

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  sort_by_rank(order);

  for (std::size_t k = 1; classes < n; k <<= 1) {
    // Suffixes whose second half runs off the end sort first on the second key.
    std::size_t p = 0;
    for (std::size_t i = n - std::min(k, n); i < n; ++i) order[p++] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (sa[j] >= k) order[p++] = static_cast<std::uint32_t>(sa[j] - k);
    }
    sort_by_rank(order);

    auto second = [&](std::uint32_t pos) -> std::int64_t {
      return pos + k < n ? static_cast<std::int64_t>(rank[pos + k]) : -1;
    };
    tmp[sa[0]] = 0;
    for (std::size_t j = 1; j < n; ++j) {
      bool same = rank[sa[j]] == rank[sa[j - 1]] && second(sa[j]) == second(sa[j - 1]);
      tmp[sa[j]] = tmp[sa[j - 1]] + (same ? 0 : 1);
    }
    rank.swap(tmp);
    classes = rank[sa[n - 1]] + 1;
  }
  return sa;
}

// Kasai et al.
std::vector<std::uint32_t> build_lcp(std::span<const TokenId> text, std::span<const std::uint32_t> sa) {
  const std::size_t n = text.size();
  std::vector<std::uint32_t> inv(n), lcp(n, 0);
  for (std::size_t i = 0; i < n; ++i) inv[sa[i]] = static_cast<std::uint32_t>(i);
  std::size_t h = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (inv[i] == 0) {
      h = 0;
      continue;
    }
    std::size_t j = sa[inv[i] - 1];
    while (i + h < n && j + h < n && text[i + h] == text[j + h]) ++h;
    lcp[inv[i]] = static_cast<std::uint32_t>(h);
    if (h > 0) --h;
  }
  return lcp;
}

void check_doc(const PatternIndex& index, DocId doc) {
  if (doc >= index.doc_count()) {
    throw Error(Errc::kUnknownDocument, "document " + std::to_string(doc) + " not in index of " +
                                            std::to_string(index.doc_count()));
  }
}

void check_length(std::size_t l) {
  if (l == 0) throw Error(Errc::kInvalidArgument, "pattern length must be >= 1");
}

// Calls visit(begin, end) for every maximal run of suffix-array slots whose
// suffixes share their first l tokens and which holds at least two suffixes.
template <typename Visit>
void for_each_repeat_group(const PatternIndex& index, std::size_t l, Visit&& visit) {
  auto lcp = index.lcp();
  const std::size_t n = index.size();
  std::size_t begin = 0;
  while (begin < n) {
    std::size_t end = begin + 1;
    while (end < n && lcp[end] >= l) ++end;
    if (end - begin >= 2) visit(begin, end);
    begin = end;
  }
}

std::vector<TokenId> pattern_at(const PatternIndex& index, std::size_t position, std::size_t l) {
  auto concat = index.concat();
  return {concat.begin() + static_cast<std::ptrdiff_t>(position),
          concat.begin() + static_cast<std::ptrdiff_t>(position + l)};
}

}  // namespace

std::size_t PatternIndex::doc_length(DocId doc) const {
  if (doc >= doc_len_.size()) throw Error(Errc::kUnknownDocument, "document " + std::to_string(doc));
  return doc_len_[doc];
}

std::uint32_t PatternIndex::doc_offset(std::size_t position) const {
  return static_cast<std::uint32_t>(position - doc_start_[doc_of_.at(position)]);
}

std::size_t PatternIndex::global_position(DocId doc, std::uint32_t offset) const {
  if (doc >= doc_start_.size()) throw Error(Errc::kUnknownDocument, "document " + std::to_string(doc));
  if (offset > doc_len_[doc]) {
    throw Error(Errc::kOccurrenceOutOfBounds, "offset " + std::to_string(offset) + " beyond document " +
                                                  std::to_string(doc));
  }
  return doc_start_[doc] + offset;
}

PatternIndex build_index(std::span<const IdSeq> docs, const IndexLimits& limits) {
  if (docs.empty()) throw Error(Errc::kInvalidArgument, "build_index needs at least one document");
  std::size_t total = docs.size();
  TokenId max_id = 0;
  for (const auto& doc : docs) {
    total += doc.size();
    for (TokenId id : doc.ids) max_id = std::max(max_id, id);
  }
  if (total > limits.max_positions) {
    throw Error(Errc::kCapacityExceeded, std::to_string(total) + " positions exceed limit " +
                                             std::to_string(limits.max_positions));
  }
  const std::uint64_t sentinel_base = static_cast<std::uint64_t>(max_id) + 1;
  if (sentinel_base + docs.size() > 0xFFFFFFFFull) {
    throw Error(Errc::kCapacityExceeded, "token ids leave no room for document sentinels");
  }

  PatternIndex index;
  index.concat_.reserve(total);
  index.doc_of_.reserve(total);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    index.doc_start_.push_back(static_cast<std::uint32_t>(index.concat_.size()));
    index.doc_len_.push_back(static_cast<std::uint32_t>(docs[d].size()));
    index.concat_.insert(index.concat_.end(), docs[d].ids.begin(), docs[d].ids.end());
    index.concat_.push_back(static_cast<TokenId>(sentinel_base + d));
    index.doc_of_.insert(index.doc_of_.end(), docs[d].size() + 1, static_cast<DocId>(d));
  }
  index.sa_ = build_suffix_array(index.concat_);
  index.lcp_ = build_lcp(index.concat_, index.sa_);
  return index;
}

std::vector<PatternHit> common_patterns(const PatternIndex& index, DocId a, DocId b, std::size_t l) {
  check_length(l);
  check_doc(index, a);
  check_doc(index, b);
  if (a == b) throw Error(Errc::kInvalidArgument, "common_patterns needs two distinct documents");

  std::vector<PatternHit> hits;
  auto sa = index.suffix_array();
  for_each_repeat_group(index, l, [&](std::size_t begin, std::size_t end) {
    std::vector<Occurrence> occ;
    bool in_a = false, in_b = false;
    for (std::size_t j = begin; j < end; ++j) {
      DocId doc = index.doc_of(sa[j]);
      if (doc != a && doc != b) continue;
      (doc == a ? in_a : in_b) = true;
      occ.push_back({doc, index.doc_offset(sa[j])});
    }
    if (!in_a || !in_b) return;
    std::sort(occ.begin(), occ.end());
    hits.push_back({pattern_at(index, sa[begin], l), std::move(occ)});
  });
  return hits;
}

std::vector<PatternHit> common_patterns_union(const PatternIndex& index, DocId target,
                                              std::span<const DocId> others, std::size_t l) {
  check_length(l);
  check_doc(index, target);
  if (others.empty()) throw Error(Errc::kInvalidArgument, "common_patterns_union needs other documents");
  std::vector<bool> is_other(index.doc_count(), false);
  for (DocId other : others) {
    check_doc(index, other);
    if (other == target) throw Error(Errc::kInvalidArgument, "target listed among others");
    is_other[other] = true;
  }

  std::vector<PatternHit> hits;
  auto sa = index.suffix_array();
  for_each_repeat_group(index, l, [&](std::size_t begin, std::size_t end) {
    std::vector<Occurrence> occ;
    bool shared = false;
    for (std::size_t j = begin; j < end; ++j) {
      DocId doc = index.doc_of(sa[j]);
      if (doc == target) {
        occ.push_back({doc, index.doc_offset(sa[j])});
      } else if (is_other[doc]) {
        shared = true;
      }
    }
    if (occ.empty() || !shared) return;
    std::sort(occ.begin(), occ.end());
    hits.push_back({pattern_at(index, sa[begin], l), std::move(occ)});
  });
  return hits;
}

CoverageMask coverage_mask(std::size_t doc_len, std::span<const PatternHit> hits, DocId doc,
                           std::size_t l) {
  check_length(l);
  // delta[p] counts pattern starts minus pattern ends at p.
  std::vector<int> delta(doc_len + 1, 0);
  for (const auto& hit : hits) {
    for (const auto& occ : hit.occurrences) {
      if (occ.doc != doc) continue;
      if (occ.offset + l > doc_len) {
        throw Error(Errc::kOccurrenceOutOfBounds,
                    "occurrence at " + std::to_string(occ.offset) + " with length " + std::to_string(l) +
                        " exceeds document length " + std::to_string(doc_len));
      }
      ++delta[occ.offset];
      --delta[occ.offset + l];
    }
  }
  CoverageMask mask{doc, std::vector<bool>(doc_len, false), 0};
  int depth = 0;
  for (std::size_t p = 0; p < doc_len; ++p) {
    depth += delta[p];
    if (depth > 0) {
      mask.covered[p] = true;
      ++mask.covered_count;
    }
  }
  return mask;
}

std::vector<PatternHit> common_patterns_bruteforce(const IdSeq& a, const IdSeq& b, std::size_t l,
                                                   DocId a_id, DocId b_id) {
  check_length(l);
  std::map<std::vector<TokenId>, std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> grams;
  for (std::size_t i = 0; i + l <= a.size(); ++i) {
    std::vector<TokenId> key(a.ids.begin() + static_cast<std::ptrdiff_t>(i),
                             a.ids.begin() + static_cast<std::ptrdiff_t>(i + l));
    grams[std::move(key)].first.push_back(static_cast<std::uint32_t>(i));
  }
  for (std::size_t i = 0; i + l <= b.size(); ++i) {
    std::vector<TokenId> key(b.ids.begin() + static_cast<std::ptrdiff_t>(i),
                             b.ids.begin() + static_cast<std::ptrdiff_t>(i + l));
    auto it = grams.find(key);
    if (it != grams.end()) it->second.second.push_back(static_cast<std::uint32_t>(i));
  }

  std::vector<PatternHit> hits;
  for (auto& [tokens, offsets] : grams) {
    if (offsets.second.empty()) continue;
    PatternHit hit{tokens, {}};
    for (auto off : offsets.first) hit.occurrences.push_back({a_id, off});
    for (auto off : offsets.second) hit.occurrences.push_back({b_id, off});
    std::sort(hit.occurrences.begin(), hit.occurrences.end());
    hits.push_back(std::move(hit));
  }
  return hits;
}

namespace {

class IndexedDocs final : public PreparedDocs {
 public:
  explicit IndexedDocs(PatternIndex index) : index_(std::move(index)) {}

  std::size_t doc_count() const override { return index_.doc_count(); }
  std::size_t doc_length(DocId doc) const override { return index_.doc_length(doc); }
  std::vector<PatternHit> common(DocId a, DocId b, std::size_t l) const override {
    return common_patterns(index_, a, b, l);
  }
  std::vector<PatternHit> common_union(DocId target, std::span<const DocId> others,
                                       std::size_t l) const override {
    return common_patterns_union(index_, target, others, l);
  }

 private:
  PatternIndex index_;
};

class BruteDocs final : public PreparedDocs {
 public:
  explicit BruteDocs(std::span<const IdSeq> docs) : docs_(docs.begin(), docs.end()) {}

  std::size_t doc_count() const override { return docs_.size(); }
  std::size_t doc_length(DocId doc) const override { return at(doc).size(); }

  std::vector<PatternHit> common(DocId a, DocId b, std::size_t l) const override {
    if (a == b) throw Error(Errc::kInvalidArgument, "common_patterns needs two distinct documents");
    return common_patterns_bruteforce(at(a), at(b), l, a, b);
  }

  std::vector<PatternHit> common_union(DocId target, std::span<const DocId> others,
                                       std::size_t l) const override {
    if (others.empty()) throw Error(Errc::kInvalidArgument, "common_patterns_union needs other documents");
    std::map<std::vector<TokenId>, std::vector<Occurrence>> merged;
    for (DocId other : others) {
      if (other == target) throw Error(Errc::kInvalidArgument, "target listed among others");
      for (auto& hit : common_patterns_bruteforce(at(target), at(other), l, target, other)) {
        auto& occ = merged[hit.tokens];
        if (!occ.empty()) continue;
        for (const auto& o : hit.occurrences) {
          if (o.doc == target) occ.push_back(o);
        }
      }
    }
    std::vector<PatternHit> hits;
    for (auto& [tokens, occ] : merged) hits.push_back({tokens, std::move(occ)});
    return hits;
  }

 private:
  const IdSeq& at(DocId doc) const {
    if (doc >= docs_.size()) throw Error(Errc::kUnknownDocument, "document " + std::to_string(doc));
    return docs_[doc];
  }

  std::vector<IdSeq> docs_;
};

}  // namespace

std::unique_ptr<PreparedDocs> SuffixArrayEngine::prepare(std::span<const IdSeq> docs) const {
  return std::make_unique<IndexedDocs>(build_index(docs, limits_));
}

std::unique_ptr<PreparedDocs> BruteForceEngine::prepare(std::span<const IdSeq> docs) const {
  return std::make_unique<BruteDocs>(docs);
}

}  // namespace sprkit
