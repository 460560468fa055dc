// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "sprkit/text_core.hpp"

namespace sprkit {

using DocId = std::uint32_t;

struct Occurrence {
  DocId doc = 0;
  std::uint32_t offset = 0;

  friend auto operator<=>(const Occurrence&, const Occurrence&) = default;
};

/// One l-token sequence together with every place it was found. Occurrences
/// are sorted by (doc, offset).
struct PatternHit {
  std::vector<TokenId> tokens;
  std::vector<Occurrence> occurrences;

  std::size_t length() const noexcept { return tokens.size(); }
  friend bool operator==(const PatternHit&, const PatternHit&) = default;
};

struct CoverageMask {
  DocId doc = 0;
  std::vector<bool> covered;
  std::size_t covered_count = 0;
};

struct IndexLimits {
  std::size_t max_positions = 2147483647;  // 2^31 - 1
};

// Suffix array + LCP over the documents joined by per-document sentinels.
// Sentinels are unique and larger than every token id, so no common prefix
// can run across a document boundary. Immutable once built.
class PatternIndex {
 public:
  std::size_t doc_count() const noexcept { return doc_start_.size(); }
  std::size_t doc_length(DocId doc) const;
  std::size_t size() const noexcept { return concat_.size(); }

  std::span<const TokenId> concat() const noexcept { return concat_; }
  std::span<const std::uint32_t> suffix_array() const noexcept { return sa_; }
  /// lcp()[i] is the common prefix length of suffixes sa[i-1] and sa[i]; lcp()[0] == 0.
  std::span<const std::uint32_t> lcp() const noexcept { return lcp_; }

  DocId doc_of(std::size_t position) const { return doc_of_.at(position); }
  std::uint32_t doc_offset(std::size_t position) const;
  std::size_t global_position(DocId doc, std::uint32_t offset) const;

 private:
  friend PatternIndex build_index(std::span<const IdSeq> docs, const IndexLimits& limits);

  std::vector<TokenId> concat_;
  std::vector<std::uint32_t> sa_;
  std::vector<std::uint32_t> lcp_;
  std::vector<DocId> doc_of_;
  std::vector<std::uint32_t> doc_start_;
  std::vector<std::uint32_t> doc_len_;
};

PatternIndex build_index(std::span<const IdSeq> docs, const IndexLimits& limits = {});

/// Distinct l-grams present in both a and b, occurrences restricted to a and b,
/// sorted lexicographically by token ids.
std::vector<PatternHit> common_patterns(const PatternIndex& index, DocId a, DocId b, std::size_t l);

/// l-grams of target that also occur in at least one of others; occurrences
/// restricted to target.
std::vector<PatternHit> common_patterns_union(const PatternIndex& index, DocId target,
                                              std::span<const DocId> others, std::size_t l);

CoverageMask coverage_mask(std::size_t doc_len, std::span<const PatternHit> hits, DocId doc,
                           std::size_t l);

/// Set-intersection reference for common_patterns. Occurrences in a are
/// labelled a_id, those in b are labelled b_id.
std::vector<PatternHit> common_patterns_bruteforce(const IdSeq& a, const IdSeq& b, std::size_t l,
                                                   DocId a_id = 0, DocId b_id = 1);

// A fixed set of documents prepared for repeated pattern queries. Two
// implementations exist: the suffix-array index and the brute-force oracle.
class PreparedDocs {
 public:
  virtual ~PreparedDocs() = default;

  virtual std::size_t doc_count() const = 0;
  virtual std::size_t doc_length(DocId doc) const = 0;
  virtual std::vector<PatternHit> common(DocId a, DocId b, std::size_t l) const = 0;
  virtual std::vector<PatternHit> common_union(DocId target, std::span<const DocId> others,
                                               std::size_t l) const = 0;
};

class PatternEngine {
 public:
  virtual ~PatternEngine() = default;
  virtual std::unique_ptr<PreparedDocs> prepare(std::span<const IdSeq> docs) const = 0;
};

class SuffixArrayEngine final : public PatternEngine {
 public:
  explicit SuffixArrayEngine(IndexLimits limits = {}) : limits_(limits) {}
  std::unique_ptr<PreparedDocs> prepare(std::span<const IdSeq> docs) const override;

 private:
  IndexLimits limits_;
};

class BruteForceEngine final : public PatternEngine {
 public:
  std::unique_ptr<PreparedDocs> prepare(std::span<const IdSeq> docs) const override;
};

}  // namespace sprkit
