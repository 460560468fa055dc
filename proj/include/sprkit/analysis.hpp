// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sprkit/corpus.hpp"
#include "sprkit/pattern_engine.hpp"
#include "sprkit/sweep_stats.hpp"

namespace sprkit {

struct AnalysisOptions {
  std::vector<ModelSpec> models;  // release order
  SweepConfig sweep;              // models and unsupported are filled in from models
  int rounds_t0 = 3;
  int rounds_t1 = 5;
  std::vector<SourceCorpus> sources{SourceCorpus::kPrimary};
  TokenizationPolicy policy;
  std::string primary_name = "primary";
  std::string control_name = "control";
  std::string paraphrase_prefix = "CGPT_p=";
  CellSelector selector = CellSelector::kOffDiagonalParaphrase;
  std::string base_model;  // defaults to the oldest model
  double flatness_tolerance = 0.25;
};

// A (model, temperature) left out of the analysis, with the reason.
struct Exclusion {
  std::string model;
  Temperature temperature = Temperature::kZero;
  std::string reason;
};

struct SourceAnalysis {
  SourceCorpus source = SourceCorpus::kPrimary;
  MatrixSet matrices;
  std::vector<SweepSeries> series;
  std::vector<SpreadSeries> spreads;
  std::vector<std::pair<std::string, std::string>> spread_absent;  // model, reason
  std::vector<RelativeSeries> relatives;
  ConvergenceReport convergence;
  std::vector<Exclusion> exclusions;
  // Chapters dropped from a (model, temperature) slice because a paraphrase round is missing.
  std::map<std::pair<std::string, Temperature>, std::vector<std::string>> dropped;
};

struct Analysis {
  std::vector<SourceAnalysis> sources;
  std::vector<StatsRow> stats;
};

/// Builds one slice per (source, model, temperature) from the paired corpus
/// and stored paraphrases, then computes matrices, sweep series, temperature
/// spreads, relative means and the trend report.
Analysis analyze(std::span<const DocumentPair> pairs, std::span<const ParaphraseRecord> records,
                 const AnalysisOptions& options, const PatternEngine& engine);

struct BundleInfo {
  std::string dataset_checksum;
  std::string manifest_checksum;  // SHA-256 of the run manifest file, empty if none
  nlohmann::json config;          // echoed into metadata.json
};

/// Writes every report file under out and returns the relative paths written.
std::vector<std::string> emit_bundle(const Analysis& analysis, const AnalysisOptions& options,
                                     const BundleInfo& info, const std::filesystem::path& out);

/// <source>/<model>/t<T>_l<LL>.csv below matrices/.
std::filesystem::path matrix_relpath(SourceCorpus source, const MatrixKey& key);

}  // namespace sprkit
