// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sprkit/similarity.hpp"
#include "sprkit/temperature.hpp"

namespace sprkit {

struct MatrixKey {
  std::string model;
  Temperature temperature = Temperature::kZero;
  std::size_t pattern_length = 0;

  friend auto operator<=>(const MatrixKey&, const MatrixKey&) = default;
};

using MatrixSet = std::map<MatrixKey, SprMatrix>;

struct SweepConfig {
  std::size_t l_min = 3;
  std::size_t l_max = 20;
  std::vector<Temperature> temperatures{Temperature::kZero, Temperature::kOne};
  std::vector<std::string> models;
  /// (model, temperature) combinations the models cannot run, e.g. a model
  /// that rejects temperature 0. These are not expected in the matrix set.
  std::set<std::pair<std::string, Temperature>> unsupported;

  void validate() const;
  std::vector<std::size_t> lengths() const;
  bool supports(const std::string& model, Temperature t) const {
    return !unsupported.contains({model, t});
  }
};

/// Which matrix cells feed the per-length mean of means.
enum class CellSelector {
  kOffDiagonalParaphrase,  // paraphrase group i vs paraphrase group j, i != j
  kOriginalVsParaphrase,   // original vs each paraphrase group, both directions
  kIncludeDiagonal,        // every paraphrase-paraphrase cell including i == j
};

std::string to_string(CellSelector selector);
CellSelector parse_cell_selector(const std::string& text);

struct SweepPoint {
  std::size_t l = 0;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  std::size_t count = 0;
};

enum class SeriesKind { kModel, kHumanControl };

struct SweepSeries {
  std::string model;
  Temperature temperature = Temperature::kZero;
  SeriesKind kind = SeriesKind::kModel;
  std::vector<SweepPoint> points;

  const SweepPoint& at(std::size_t l) const;
};

struct SpreadPoint {
  std::size_t l = 0;
  double delta = 0.0;
};

// delta(l) = mean at temperature 0 minus mean at temperature 1.
struct SpreadSeries {
  std::string model;
  std::vector<SpreadPoint> points;
};

struct RelativePoint {
  std::string model;
  std::size_t l = 0;
  std::optional<double> ratio;  // empty when the base mean is zero
};

struct RelativeSeries {
  std::string base_model;
  Temperature temperature = Temperature::kZero;
  std::vector<RelativePoint> entries;
};

/// Mean of the selected cell means per pattern length, one series per
/// requested (model, temperature), followed by one original-vs-control
/// series per temperature.
std::vector<SweepSeries> run_sweep(const MatrixSet& matrices, const SweepConfig& config,
                                   CellSelector selector = CellSelector::kOffDiagonalParaphrase);

/// Picks delta within a few ulps of s0 - s1 so that delta + s1 reproduces s0
/// exactly whenever such a double exists.
SpreadSeries temperature_spread(const SweepSeries& s0, const SweepSeries& s1);

/// Looks up the model's series in all; throws TemperatureUnsupported when the
/// model has no temperature-0 series.
SpreadSeries temperature_spread(std::span<const SweepSeries> all, const std::string& model,
                                bool supports_temperature_0 = true);

RelativeSeries relative_means(std::span<const SweepSeries> series, const std::string& base_model);

enum class Direction { kRise, kPlateau, kDecline };
std::string to_string(Direction d);

struct ShapeSegment {
  Direction direction = Direction::kPlateau;
  std::size_t l_begin = 0;
  std::size_t l_end = 0;
};

struct SpreadShape {
  std::string model;
  std::vector<ShapeSegment> segments;
  std::string label;  // e.g. "rise-plateau-decline"
};

struct TrendEntry {
  Temperature temperature = Temperature::kZero;
  std::size_t l = 0;
  std::vector<std::string> models;  // release order
  std::vector<double> means;
  bool monotone_non_decreasing = true;
};

struct ConvergenceReport {
  double flatness_tolerance = 0.25;
  std::vector<TrendEntry> trends;
  std::vector<SpreadShape> shapes;
  std::vector<RelativeSeries> relatives;
};

SpreadShape classify_spread(const SpreadSeries& spread, double flatness_tolerance = 0.25);

/// release_order lists model ids oldest first; models absent from it are
/// ignored.
ConvergenceReport trend_report(std::span<const SweepSeries> series, std::span<const SpreadSeries> spreads,
                               std::span<const RelativeSeries> relatives,
                               std::span<const std::string> release_order, double flatness_tolerance = 0.25);

}  // namespace sprkit
