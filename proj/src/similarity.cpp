// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sprkit/similarity.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "sprkit/error.hpp"

namespace sprkit {

SprValue SprValue::from_counts(std::size_t covered, std::size_t length) {
  if (covered > length) {
    throw Error(Errc::kInvalidArgument, "covered words exceed text length");
  }
  SprValue v;
  v.covered_words = covered;
  v.text_length = length;
  v.value = length == 0 ? 0.0 : 100.0 * static_cast<double>(covered) / static_cast<double>(length);
  return v;
}

GroupLabel GroupLabel::original(std::string name) { return {GroupKind::kOriginal, 0, std::move(name)}; }

GroupLabel GroupLabel::paraphrase(int index, const std::string& prefix) {
  if (index < 1) throw Error(Errc::kInvalidArgument, "paraphrase group indices are 1-based");
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d", index);
  return {GroupKind::kParaphrase, index, prefix + buf};
}

GroupLabel GroupLabel::control(std::string name) { return {GroupKind::kControl, 0, std::move(name)}; }

std::vector<GroupLabel> standard_labels(const std::string& original_name, int paraphrase_count,
                                        const std::string& control_name,
                                        const std::string& paraphrase_prefix) {
  std::vector<GroupLabel> labels;
  labels.push_back(GroupLabel::original(original_name));
  for (int i = 1; i <= paraphrase_count; ++i) labels.push_back(GroupLabel::paraphrase(i, paraphrase_prefix));
  labels.push_back(GroupLabel::control(control_name));
  return labels;
}

std::pair<SprValue, SprValue> spr_pair(const PreparedDocs& docs, DocId a, DocId b, std::size_t l) {
  auto hits = docs.common(a, b, l);
  const std::size_t len_a = docs.doc_length(a);
  const std::size_t len_b = docs.doc_length(b);
  auto mask_a = coverage_mask(len_a, hits, a, l);
  auto mask_b = coverage_mask(len_b, hits, b, l);
  return {SprValue::from_counts(mask_a.covered_count, len_a),
          SprValue::from_counts(mask_b.covered_count, len_b)};
}

SprValue spr_union_group(const PreparedDocs& docs, DocId target, std::span<const DocId> others,
                         std::size_t l) {
  auto hits = docs.common_union(target, others, l);
  const std::size_t len = docs.doc_length(target);
  return SprValue::from_counts(coverage_mask(len, hits, target, l).covered_count, len);
}

std::pair<SprValue, SprValue> spr_pair(const IdSeq& a, const IdSeq& b, std::size_t l,
                                       const PatternEngine& engine) {
  const IdSeq docs[] = {a, b};
  return spr_pair(*engine.prepare(docs), 0, 1, l);
}

SprValue spr_union_group(const IdSeq& target, std::span<const IdSeq> others, std::size_t l,
                         const PatternEngine& engine) {
  if (others.empty()) throw Error(Errc::kInvalidArgument, "spr_union_group needs other texts");
  std::vector<IdSeq> docs;
  docs.reserve(others.size() + 1);
  docs.push_back(target);
  docs.insert(docs.end(), others.begin(), others.end());
  std::vector<DocId> ids;
  for (std::size_t i = 1; i < docs.size(); ++i) ids.push_back(static_cast<DocId>(i));
  return spr_union_group(*engine.prepare(docs), 0, ids, l);
}

std::vector<SprMatrix> build_spr_matrices(const CorpusSlice& slice, std::span<const std::size_t> lengths,
                                          const PatternEngine& engine) {
  if (slice.documents.empty()) throw Error(Errc::kEmptyCorpus, "corpus slice has no documents");
  const std::size_t dim = slice.labels.size();
  if (dim < 2) throw Error(Errc::kInvalidArgument, "an SPR matrix needs at least two groups");
  for (const auto& doc : slice.documents) {
    if (doc.texts.size() != dim) {
      throw Error(Errc::kMissingGroupText, "document '" + doc.id + "' has " + std::to_string(doc.texts.size()) +
                                               " texts for " + std::to_string(dim) + " groups");
    }
    for (std::size_t g = 0; g < dim; ++g) {
      if (!doc.texts[g]) {
        throw Error(Errc::kMissingGroupText, "document '" + doc.id + "', group " + slice.labels[g].name);
      }
    }
  }

  std::vector<SprMatrix> out;
  for (std::size_t l : lengths) {
    SprMatrix m;
    m.pattern_length = l;
    m.labels = slice.labels;
    m.cells.assign(dim, std::vector<double>(dim, 0.0));
    m.counts.assign(dim, std::vector<std::size_t>(dim, 0));
    out.push_back(std::move(m));
  }

  // Documents are independent; each worker fills its documents' slots and the
  // slots are summed in document order so results do not depend on threading.
  const std::size_t n_docs = slice.documents.size();
  const std::size_t stride = lengths.size() * dim * dim;
  std::vector<double> contrib(n_docs * stride, 0.0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    std::vector<IdSeq> texts(dim);
    std::vector<DocId> others;
    for (std::size_t d = next++; d < n_docs; d = next++) {
      try {
        const auto& doc = slice.documents[d];
        for (std::size_t g = 0; g < dim; ++g) texts[g] = *doc.texts[g];
        auto prepared = engine.prepare(texts);
        for (std::size_t li = 0; li < lengths.size(); ++li) {
          double* cell = contrib.data() + d * stride + li * dim * dim;
          const std::size_t l = lengths[li];
          for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = r + 1; c < dim; ++c) {
              auto [row, col] = spr_pair(*prepared, static_cast<DocId>(r), static_cast<DocId>(c), l);
              cell[r * dim + c] = row.value;
              cell[c * dim + r] = col.value;
            }
            others.clear();
            for (std::size_t g = 0; g < dim; ++g) {
              if (g != r) others.push_back(static_cast<DocId>(g));
            }
            cell[r * dim + r] = spr_union_group(*prepared, static_cast<DocId>(r), others, l).value;
          }
        }
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const std::size_t n_threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(n_docs, 1));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  for (std::size_t d = 0; d < n_docs; ++d) {
    for (std::size_t li = 0; li < lengths.size(); ++li) {
      const double* cell = contrib.data() + d * stride + li * dim * dim;
      auto& m = out[li];
      for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
          m.cells[r][c] += cell[r * dim + c];
          ++m.counts[r][c];
        }
      }
    }
  }
  for (auto& m : out) {
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) m.cells[r][c] /= static_cast<double>(m.counts[r][c]);
    }
  }
  return out;
}

SprMatrix build_spr_matrix(const CorpusSlice& slice, std::size_t l, const PatternEngine& engine) {
  const std::size_t lengths[] = {l};
  return std::move(build_spr_matrices(slice, lengths, engine).front());
}

}  // namespace sprkit
