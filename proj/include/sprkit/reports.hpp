// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sprkit/corpus.hpp"
#include "sprkit/similarity.hpp"
#include "sprkit/sweep_stats.hpp"

namespace sprkit {

inline constexpr int kReportSchemaVersion = 1;

/// Two decimals, as shown in the tables ("41.67").
std::string format_display(double v);
/// Shortest text that parses back to the same double.
std::string format_exact(double v);

/// Header row of labels, then one row per label. decimals < 0 means exact.
std::string render_matrix_csv(const SprMatrix& m, int decimals = 2);

/// Writes path with display rounding and a sibling "<stem>.full.csv" at full precision.
void emit_matrix_csv(const SprMatrix& m, const std::filesystem::path& path);

// Long-format row shared by every series kind. Columns: model, temperature,
// l, value, std, count, flags. Empty optionals are written as empty fields.
struct SeriesRow {
  std::string model;
  std::string temperature;
  std::size_t l = 0;
  std::optional<double> value;
  std::optional<double> std;
  std::optional<std::size_t> count;
  std::string flags;

  friend bool operator==(const SeriesRow&, const SeriesRow&) = default;
};

enum class SeriesFile { kSweep, kSpread, kRelative };
std::string to_string(SeriesFile kind);

std::vector<SeriesRow> series_rows(std::span<const SweepSeries> series);
std::vector<SeriesRow> series_rows(std::span<const SpreadSeries> spreads);
std::vector<SeriesRow> series_rows(std::span<const RelativeSeries> relatives);

std::string render_series_csv(std::span<const SeriesRow> rows);
nlohmann::json series_json(SeriesFile kind, std::span<const SeriesRow> rows);
std::vector<SeriesRow> parse_series_csv(std::string_view text);
std::vector<SeriesRow> parse_series_json(const nlohmann::json& doc);

/// Writes <dir>/<kind>.v1.csv and <dir>/<kind>.v1.json.
void emit_series(SeriesFile kind, std::span<const SeriesRow> rows, const std::filesystem::path& dir);

nlohmann::json convergence_json(const ConvergenceReport& report);
std::string render_stats_csv(std::span<const StatsRow> rows);

/// JSON text with a trailing newline and stable key order.
std::string dump_json(const nlohmann::json& doc);

}  // namespace sprkit
