// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sprkit {

using TokenId = std::uint32_t;

/// Normalization steps applied before words are counted. Text is always put
/// in Unicode NFC first; the flags control the remaining steps.
///
/// With collapse_whitespace set, every Unicode White_Space code point
/// separates words. Without it only ASCII whitespace separates, so a no-break
/// space binds its neighbours into one token.
struct TokenizationPolicy {
  bool lowercase = true;
  bool strip_punctuation = true;
  bool collapse_whitespace = true;

  friend bool operator==(const TokenizationPolicy&, const TokenizationPolicy&) = default;
};

/// Stable one-line rendering, e.g. "lowercase=1,strip_punctuation=1,collapse_whitespace=1".
std::string to_string(const TokenizationPolicy& policy);
TokenizationPolicy parse_policy(std::string_view text);

struct TokenSeq {
  std::vector<std::string> tokens;
  std::string source_id;

  std::size_t size() const noexcept { return tokens.size(); }
  friend bool operator==(const TokenSeq&, const TokenSeq&) = default;
};

struct IdSeq {
  std::vector<TokenId> ids;
  std::string source_id;

  std::size_t size() const noexcept { return ids.size(); }
  friend bool operator==(const IdSeq&, const IdSeq&) = default;
};

TokenSeq normalize_and_tokenize(std::string_view raw, const TokenizationPolicy& policy = {},
                                std::string source_id = {});

/// Token count under the policy; the figure the corpus length filter uses.
std::size_t word_count(std::string_view raw, const TokenizationPolicy& policy = {});

// Dense bijection between token strings and ids. Ids at or above size() are
// never handed out, which leaves them free for per-document sentinels.
class Vocabulary {
 public:
  /// Returns the id of token, assigning the next dense id on first sight.
  TokenId intern(std::string_view token);

  bool contains(std::string_view token) const;
  TokenId id_of(std::string_view token) const;  // throws UnknownToken
  const std::string& token_of(TokenId id) const;

  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }

  /// Sentinel reserved for the document at position doc_index in an index.
  TokenId sentinel(std::size_t doc_index) const;

 private:
  std::unordered_map<std::string, TokenId> ids_;
  std::vector<std::string> tokens_;
};

/// First-appearance ordering over seqs, in order.
Vocabulary build_vocabulary(std::span<const TokenSeq> seqs);

IdSeq encode(const TokenSeq& seq, const Vocabulary& vocab);
TokenSeq decode(const IdSeq& seq, const Vocabulary& vocab);

}  // namespace sprkit
