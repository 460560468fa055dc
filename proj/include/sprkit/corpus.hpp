// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sprkit/sweep_stats.hpp"
#include "sprkit/temperature.hpp"
#include "sprkit/text_core.hpp"

namespace sprkit {

/// Chapter keys, model ids and similar names end up in file names, so they
/// are restricted to [A-Za-z0-9._-] and may not start with '.'.
bool is_safe_key(std::string_view key);

// ---------------------------------------------------------------------------
// Paired human corpus

struct DocumentPair {
  std::string chapter;
  std::string primary_text;
  std::string control_text;
  std::size_t primary_words = 0;
  std::size_t control_words = 0;
};

struct Rejection {
  std::string chapter;
  std::string reason;  // "unpaired", "too short", "too long", "invalid chapter key"
};

struct IngestOptions {
  std::filesystem::path index;         // chapter_key TAB primary_relpath TAB control_relpath
  std::filesystem::path primary_root;  // defaults to the index's directory
  std::filesystem::path control_root;  // defaults to the index's directory
  TokenizationPolicy policy;
  std::size_t min_words = 100;
  std::size_t max_words = 2000;
};

struct IngestResult {
  std::vector<DocumentPair> pairs;  // sorted by chapter key
  std::vector<Rejection> rejected;
  std::string dataset_checksum;
};

/// A relpath of "" or "-" marks a chapter the guide does not cover. The word
/// bounds apply to the primary text only.
IngestResult ingest_paired_corpus(const IngestOptions& options);

// ---------------------------------------------------------------------------
// Models

struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  /// Accepts YYYY-MM-DD or DD/MM/YYYY.
  static Date parse(std::string_view text);
  std::string iso() const;
  friend auto operator<=>(const Date&, const Date&) = default;
};

struct ModelSpec {
  std::string id;
  std::string api_name;
  std::string display_name;
  Date knowledge_cutoff;
  Date release;
  bool supports_temperature_0 = true;
  bool reasoning_none = false;  // send reasoning_effort=none with the request
  int release_order = 0;
};

/// The seven ChatGPT releases studied, oldest first.
std::vector<ModelSpec> builtin_models();

class ModelRegistry {
 public:
  ModelRegistry() = default;
  static ModelRegistry with_builtins();

  void add(ModelSpec spec);  // replaces an existing spec with the same id
  bool contains(std::string_view id) const;
  const ModelSpec& get(std::string_view id) const;

  /// The requested ids sorted by release order; throws on unknown ids.
  std::vector<ModelSpec> in_release_order(std::span<const std::string> ids) const;

  /// Release order must be strict and agree with release dates.
  void validate() const;

 private:
  std::vector<ModelSpec> specs_;
};

// ---------------------------------------------------------------------------
// Paraphrase records and the on-disk store

enum class SourceCorpus { kPrimary, kControl };
std::string to_string(SourceCorpus s);
SourceCorpus parse_source(std::string_view text);

struct ParaphraseRecord {
  std::string chapter;
  SourceCorpus source = SourceCorpus::kPrimary;
  std::string model;
  Temperature temperature = Temperature::kZero;
  int round = 1;
  std::string text;
  std::string request_ts;
  std::string response_ts;
  std::string prompt_fingerprint;

  /// <chapter>_round-<N>.txt, or <chapter>_round-<N>.control.txt for control-source paraphrases.
  std::string file_name() const;
  /// <model>/t<T>, relative to the store root.
  std::filesystem::path directory() const;

  friend bool operator==(const ParaphraseRecord&, const ParaphraseRecord&) = default;
};

/// Adds records to the store. Each (model, temperature) directory holds the
/// paraphrase texts and a records.manifest listing their metadata and SHA-256.
/// Re-saving an identical record is a no-op; saving different content under
/// an existing key throws RecordConflict.
void persist_records(std::span<const ParaphraseRecord> records, const std::filesystem::path& store);

/// Loads every record, verifying manifest and text checksums (StoreCorrupt on mismatch).
/// Sorted by (model, temperature, source, chapter, round).
std::vector<ParaphraseRecord> load_records(const std::filesystem::path& store);

struct StoreIssue {
  std::filesystem::path path;
  std::string problem;
};

/// Like load_records but collects every problem instead of stopping at the first.
std::vector<StoreIssue> verify_store(const std::filesystem::path& store);

// ---------------------------------------------------------------------------
// Run manifest

enum class CellStatus { kDone, kFailed, kSkipped };

struct CellKey {
  std::string chapter;
  SourceCorpus source = SourceCorpus::kPrimary;
  std::string model;
  Temperature temperature = Temperature::kZero;
  int round = 1;

  std::string text() const;  // chapter/source/model/tT/rN
  static CellKey parse(std::string_view text);
  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

struct CellState {
  CellStatus status = CellStatus::kDone;
  std::string reason;

  friend bool operator==(const CellState&, const CellState&) = default;
};

struct RunManifest {
  std::string dataset_checksum;
  TokenizationPolicy policy;
  SweepConfig sweep;
  std::vector<std::string> models;
  std::map<CellKey, CellState> ledger;

  std::string render() const;  // includes a trailing checksum section
  static RunManifest parse(std::string_view text, const std::string& origin = "<manifest>");

  void save(const std::filesystem::path& path) const;
  static RunManifest load(const std::filesystem::path& path);

  std::size_t count(CellStatus status) const;
};

/// Path of the run manifest inside a store.
std::filesystem::path manifest_path(const std::filesystem::path& store);

// ---------------------------------------------------------------------------
// Descriptive word-count statistics

struct WordStats {
  std::size_t n = 0;
  std::size_t min = 0;
  std::size_t max = 0;
  double median = 0.0;
  double mean = 0.0;
};

WordStats describe(std::vector<std::size_t> counts);

struct StatsRow {
  SourceCorpus source = SourceCorpus::kPrimary;
  std::string model;                       // empty for human originals
  std::optional<Temperature> temperature;  // empty for human originals
  std::string group;                       // "original", "control" or the paraphrase group label
  WordStats stats;
};

/// Originals first (primary then control texts), then one row per
/// (source, model, temperature, round).
std::vector<StatsRow> corpus_stats(std::span<const DocumentPair> pairs, std::span<const ParaphraseRecord> records,
                                   const TokenizationPolicy& policy = {});

}  // namespace sprkit
