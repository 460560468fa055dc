// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sprkit/keyvalue.hpp"

#include <fstream>
#include <sstream>

namespace sprkit {
namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::string escape(std::string_view v) {
  std::string out;
  for (char c : v) {
    if (c == '\\') {
      out += "\\\\";
    } else if (c == '\n') {
      out += "\\n";
    } else if (c == '\r') {
      out += "\\r";
    } else {
      out += c;
    }
  }
  return out;
}

std::string unescape(std::string_view v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == '\\' && i + 1 < v.size()) {
      char n = v[++i];
      out += n == 'n' ? '\n' : n == 'r' ? '\r' : n;
    } else {
      out += v[i];
    }
  }
  return out;
}

}  // namespace

const std::string* KvSection::find(std::string_view key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

void KvSection::set(std::string key, std::string_view value) {
  for (auto& [k, v] : entries) {
    if (k == key) {
      v = std::string(value);
      return;
    }
  }
  entries.emplace_back(std::move(key), std::string(value));
}

KvDocument KvDocument::parse(std::string_view text, const std::string& origin) {
  KvDocument doc;
  KvSection* current = nullptr;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw Error(Errc::kConfigError, origin + ":" + std::to_string(line_no) + ": unterminated section header");
      }
      current = &doc.section(std::string(trim(line.substr(1, line.size() - 2))));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::kConfigError, origin + ":" + std::to_string(line_no) + ": expected key=value");
    }
    if (!current) current = &doc.section("");
    current->set(std::string(trim(line.substr(0, eq))), unescape(trim(line.substr(eq + 1))));
  }
  return doc;
}

KvDocument KvDocument::load(const std::filesystem::path& path) {
  return parse(read_file(path, Errc::kConfigError), path.string());
}

std::string KvDocument::render() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& s : sections_) {
    if (!s.name.empty() || !first) {
      if (!first) os << '\n';
      os << '[' << s.name << "]\n";
    }
    for (const auto& [k, v] : s.entries) os << k << '=' << escape(v) << '\n';
    first = false;
  }
  return os.str();
}

KvSection& KvDocument::section(const std::string& name) {
  for (auto& s : sections_) {
    if (s.name == name) return s;
  }
  sections_.push_back({name, {}});
  return sections_.back();
}

const KvSection* KvDocument::find_section(std::string_view name) const {
  for (const auto& s : sections_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::string read_file(const std::filesystem::path& path, Errc on_failure) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(on_failure, "cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw Error(on_failure, "error reading " + path.string());
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view data) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::kIoError, "cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error(Errc::kIoError, "error writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(Errc::kIoError, "cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace sprkit
