// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sprkit/text_core.hpp"

namespace sprkit::testing {

// Directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("sprkit-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline IdSeq random_doc(std::mt19937_64& rng, std::size_t alphabet, std::size_t length) {
  std::uniform_int_distribution<TokenId> pick(0, static_cast<TokenId>(alphabet - 1));
  IdSeq doc;
  doc.ids.resize(length);
  for (auto& t : doc.ids) t = pick(rng);
  return doc;
}

// Independent coverage oracle: positions of target covered by an l-gram that
// also appears somewhere in at least one of others.
template <typename Seq>
std::size_t oracle_covered(const Seq& target, const std::vector<Seq>& others, std::size_t l) {
  using T = typename Seq::value_type;
  if (l == 0 || target.size() < l) return 0;
  std::set<std::vector<T>> grams;
  for (const auto& o : others) {
    for (std::size_t i = 0; i + l <= o.size(); ++i) grams.emplace(o.begin() + i, o.begin() + i + l);
  }
  std::vector<bool> covered(target.size(), false);
  for (std::size_t i = 0; i + l <= target.size(); ++i) {
    if (grams.count(std::vector<T>(target.begin() + i, target.begin() + i + l))) {
      for (std::size_t k = i; k < i + l; ++k) covered[k] = true;
    }
  }
  std::size_t n = 0;
  for (bool c : covered) n += c;
  return n;
}

inline double oracle_spr(std::size_t covered, std::size_t length) {
  return length == 0 ? 0.0 : 100.0 * static_cast<double>(covered) / static_cast<double>(length);
}

}  // namespace sprkit::testing
