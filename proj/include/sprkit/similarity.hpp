// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sprkit/pattern_engine.hpp"
#include "sprkit/temperature.hpp"
#include "sprkit/text_core.hpp"

namespace sprkit {

/// Share of a text's words covered by patterns it has in common with another
/// text, as a percentage.
struct SprValue {
  double value = 0.0;
  std::size_t covered_words = 0;
  std::size_t text_length = 0;

  static SprValue from_counts(std::size_t covered, std::size_t length);
  friend bool operator==(const SprValue&, const SprValue&) = default;
};

enum class GroupKind { kOriginal, kParaphrase, kControl };

struct GroupLabel {
  GroupKind kind = GroupKind::kOriginal;
  int index = 0;  // 1-based for paraphrase groups, 0 otherwise
  std::string name;

  static GroupLabel original(std::string name);
  static GroupLabel paraphrase(int index, const std::string& prefix = "CGPT_p=");
  static GroupLabel control(std::string name);

  friend bool operator==(const GroupLabel&, const GroupLabel&) = default;
};

/// Labels in display order: original, paraphrase groups 1..count, control.
std::vector<GroupLabel> standard_labels(const std::string& original_name, int paraphrase_count,
                                        const std::string& control_name,
                                        const std::string& paraphrase_prefix = "CGPT_p=");

struct SliceDocument {
  std::string id;
  std::vector<std::optional<IdSeq>> texts;  // one per label, same order
};

struct CorpusSlice {
  std::vector<GroupLabel> labels;
  std::vector<SliceDocument> documents;
};

// Mean SPR of row-group texts measured against column-group texts. The row
// text supplies the denominator, so cell(r, c) != cell(c, r) in general.
// Diagonal cells hold the coverage of a group by all other groups combined.
struct SprMatrix {
  std::string model;
  Temperature temperature = Temperature::kZero;
  std::size_t pattern_length = 0;
  std::vector<GroupLabel> labels;
  std::vector<std::vector<double>> cells;
  std::vector<std::vector<std::size_t>> counts;

  std::size_t dim() const noexcept { return labels.size(); }
  double cell(std::size_t row, std::size_t col) const { return cells.at(row).at(col); }
};

std::pair<SprValue, SprValue> spr_pair(const IdSeq& a, const IdSeq& b, std::size_t l,
                                       const PatternEngine& engine);
SprValue spr_union_group(const IdSeq& target, std::span<const IdSeq> others, std::size_t l,
                         const PatternEngine& engine);

/// Same computations against documents already prepared by an engine.
std::pair<SprValue, SprValue> spr_pair(const PreparedDocs& docs, DocId a, DocId b, std::size_t l);
SprValue spr_union_group(const PreparedDocs& docs, DocId target, std::span<const DocId> others,
                         std::size_t l);

SprMatrix build_spr_matrix(const CorpusSlice& slice, std::size_t l, const PatternEngine& engine);

/// One matrix per requested length; each document is prepared once.
std::vector<SprMatrix> build_spr_matrices(const CorpusSlice& slice, std::span<const std::size_t> lengths,
                                          const PatternEngine& engine);

}  // namespace sprkit
