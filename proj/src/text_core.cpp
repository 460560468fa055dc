// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sprkit/text_core.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <sstream>

#include "sprkit/error.hpp"

namespace sprkit {
namespace {

bool is_ascii_space(UChar32 c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

icu::UnicodeString to_nfc(std::string_view raw) {
  icu::UnicodeString text =
      icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw Error(Errc::kInvalidArgument, std::string("NFC normalizer unavailable: ") + u_errorName(status));
  }
  icu::UnicodeString out = nfc->normalize(text, status);
  if (U_FAILURE(status)) {
    throw Error(Errc::kInvalidArgument, std::string("NFC normalization failed: ") + u_errorName(status));
  }
  return out;
}

void emit_token(const icu::UnicodeString& text, int32_t begin, int32_t end, bool strip,
                std::vector<std::string>& out) {
  if (strip) {
    while (begin < end && u_ispunct(text.char32At(begin))) begin = text.moveIndex32(begin, 1);
    while (end > begin) {
      int32_t prev = text.moveIndex32(end, -1);
      if (!u_ispunct(text.char32At(prev))) break;
      end = prev;
    }
  }
  if (begin >= end) return;
  std::string utf8;
  text.tempSubStringBetween(begin, end).toUTF8String(utf8);
  out.push_back(std::move(utf8));
}

}  // namespace

std::string to_string(const TokenizationPolicy& policy) {
  std::ostringstream os;
  os << "lowercase=" << policy.lowercase << ",strip_punctuation=" << policy.strip_punctuation
     << ",collapse_whitespace=" << policy.collapse_whitespace;
  return os.str();
}

TokenizationPolicy parse_policy(std::string_view text) {
  TokenizationPolicy policy;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(pos, comma - pos);
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::kConfigError, "bad tokenization policy item '" + std::string(item) + "'");
    }
    std::string_view key = item.substr(0, eq);
    std::string_view value = item.substr(eq + 1);
    bool flag = false;
    if (value == "1" || value == "true") {
      flag = true;
    } else if (value != "0" && value != "false") {
      throw Error(Errc::kConfigError, "bad flag value '" + std::string(value) + "'");
    }
    if (key == "lowercase") {
      policy.lowercase = flag;
    } else if (key == "strip_punctuation") {
      policy.strip_punctuation = flag;
    } else if (key == "collapse_whitespace") {
      policy.collapse_whitespace = flag;
    } else {
      throw Error(Errc::kConfigError, "unknown tokenization policy key '" + std::string(key) + "'");
    }
    pos = comma + 1;
  }
  return policy;
}

TokenSeq normalize_and_tokenize(std::string_view raw, const TokenizationPolicy& policy,
                                std::string source_id) {
  TokenSeq seq;
  seq.source_id = std::move(source_id);
  if (raw.empty()) return seq;

  icu::UnicodeString text = to_nfc(raw);
  if (policy.lowercase) text.toLower(icu::Locale::getRoot());

  const int32_t n = text.length();
  int32_t start = -1;
  for (int32_t i = 0; i < n;) {
    UChar32 c = text.char32At(i);
    bool space = policy.collapse_whitespace ? u_isUWhiteSpace(c) : is_ascii_space(c);
    if (space) {
      if (start >= 0) emit_token(text, start, i, policy.strip_punctuation, seq.tokens);
      start = -1;
    } else if (start < 0) {
      start = i;
    }
    i = text.moveIndex32(i, 1);
  }
  if (start >= 0) emit_token(text, start, n, policy.strip_punctuation, seq.tokens);
  return seq;
}

std::size_t word_count(std::string_view raw, const TokenizationPolicy& policy) {
  return normalize_and_tokenize(raw, policy).size();
}

TokenId Vocabulary::intern(std::string_view token) {
  auto it = ids_.find(std::string(token));
  if (it != ids_.end()) return it->second;
  auto id = static_cast<TokenId>(tokens_.size());
  tokens_.emplace_back(token);
  ids_.emplace(tokens_.back(), id);
  return id;
}

bool Vocabulary::contains(std::string_view token) const {
  return ids_.find(std::string(token)) != ids_.end();
}

TokenId Vocabulary::id_of(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) throw Error(Errc::kUnknownToken, "'" + std::string(token) + "'");
  return it->second;
}

const std::string& Vocabulary::token_of(TokenId id) const {
  if (id >= tokens_.size()) {
    throw Error(Errc::kUnknownToken, "id " + std::to_string(id) + " outside vocabulary");
  }
  return tokens_[id];
}

TokenId Vocabulary::sentinel(std::size_t doc_index) const {
  return static_cast<TokenId>(tokens_.size() + doc_index);
}

Vocabulary build_vocabulary(std::span<const TokenSeq> seqs) {
  Vocabulary vocab;
  for (const auto& seq : seqs) {
    for (const auto& token : seq.tokens) vocab.intern(token);
  }
  return vocab;
}

IdSeq encode(const TokenSeq& seq, const Vocabulary& vocab) {
  IdSeq out;
  out.source_id = seq.source_id;
  out.ids.reserve(seq.tokens.size());
  for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
    if (!vocab.contains(seq.tokens[i])) {
      throw Error(Errc::kUnknownToken,
                  "'" + seq.tokens[i] + "' at position " + std::to_string(i));
    }
    out.ids.push_back(vocab.id_of(seq.tokens[i]));
  }
  return out;
}

TokenSeq decode(const IdSeq& seq, const Vocabulary& vocab) {
  TokenSeq out;
  out.source_id = seq.source_id;
  out.tokens.reserve(seq.ids.size());
  for (TokenId id : seq.ids) out.tokens.push_back(vocab.token_of(id));
  return out;
}

}  // namespace sprkit
