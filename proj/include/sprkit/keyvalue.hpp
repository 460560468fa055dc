// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sprkit/error.hpp"

namespace sprkit {

// Line-oriented key=value text with [section] headers, used for configs and
// manifests. Order of sections and keys is preserved so rendering is stable.
// '#' starts a comment line. Values are single-line; newlines are stored as
// "\n" escapes.
struct KvSection {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* find(std::string_view key) const;
  void set(std::string key, std::string_view value);
};

class KvDocument {
 public:
  static KvDocument parse(std::string_view text, const std::string& origin = "<text>");
  static KvDocument load(const std::filesystem::path& path);

  std::string render() const;

  KvSection& section(const std::string& name);  // created on first use
  const KvSection* find_section(std::string_view name) const;
  const std::vector<KvSection>& sections() const noexcept { return sections_; }

 private:
  std::vector<KvSection> sections_;
};

std::string read_file(const std::filesystem::path& path, Errc on_failure = Errc::kIoError);
/// Writes via a temporary sibling and rename so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view data);

}  // namespace sprkit
