// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sprkit/sweep_stats.hpp"

#include <algorithm>
#include <cmath>

#include "sprkit/error.hpp"

namespace sprkit {
namespace {

std::string key_text(const std::string& model, Temperature t, std::size_t l) {
  return "model=" + model + " temperature=" + to_string(t) + " l=" + std::to_string(l);
}

bool selected(CellSelector selector, const GroupLabel& row, const GroupLabel& col, std::size_t r,
              std::size_t c) {
  const bool row_p = row.kind == GroupKind::kParaphrase;
  const bool col_p = col.kind == GroupKind::kParaphrase;
  switch (selector) {
    case CellSelector::kOffDiagonalParaphrase:
      return row_p && col_p && r != c;
    case CellSelector::kOriginalVsParaphrase:
      return (row.kind == GroupKind::kOriginal && col_p) || (row_p && col.kind == GroupKind::kOriginal);
    case CellSelector::kIncludeDiagonal:
      return row_p && col_p;
  }
  return false;
}

SweepPoint aggregate(std::size_t l, const std::vector<double>& values) {
  SweepPoint p;
  p.l = l;
  p.count = values.size();
  if (values.empty()) return p;
  double sum = 0.0;
  for (double v : values) sum += v;
  p.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - p.mean) * (v - p.mean);
  p.std = std::sqrt(sq / static_cast<double>(values.size()));
  return p;
}

std::optional<std::size_t> find_label(const SprMatrix& m, GroupKind kind) {
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    if (m.labels[i].kind == kind) return i;
  }
  return std::nullopt;
}

void check_same_lengths(const SweepSeries& a, const SweepSeries& b) {
  bool same = a.points.size() == b.points.size();
  for (std::size_t i = 0; same && i < a.points.size(); ++i) same = a.points[i].l == b.points[i].l;
  if (!same) {
    throw Error(Errc::kInvalidArgument, "series '" + a.model + "' and '" + b.model + "' cover different lengths");
  }
}

double exact_difference(double a, double b) {
  double d = a - b;
  if (d + b == a) return d;
  double up = d, down = d;
  for (int step = 0; step < 4; ++step) {
    up = std::nextafter(up, INFINITY);
    if (up + b == a) return up;
    down = std::nextafter(down, -INFINITY);
    if (down + b == a) return down;
  }
  return d;
}

}  // namespace

void SweepConfig::validate() const {
  if (l_min < 1 || l_min > l_max) {
    throw Error(Errc::kInvalidArgument, "pattern length range must satisfy 1 <= l_min <= l_max, got [" +
                                            std::to_string(l_min) + ", " + std::to_string(l_max) + "]");
  }
}

std::vector<std::size_t> SweepConfig::lengths() const {
  validate();
  std::vector<std::size_t> out;
  for (std::size_t l = l_min; l <= l_max; ++l) out.push_back(l);
  return out;
}

std::string to_string(CellSelector selector) {
  switch (selector) {
    case CellSelector::kOffDiagonalParaphrase: return "off-diagonal-paraphrase";
    case CellSelector::kOriginalVsParaphrase: return "original-vs-paraphrase";
    case CellSelector::kIncludeDiagonal: return "include-diagonal";
  }
  return "?";
}

CellSelector parse_cell_selector(const std::string& text) {
  for (auto s : {CellSelector::kOffDiagonalParaphrase, CellSelector::kOriginalVsParaphrase,
                 CellSelector::kIncludeDiagonal}) {
    if (to_string(s) == text) return s;
  }
  throw Error(Errc::kConfigError, "unknown cell selector '" + text + "'");
}

const SweepPoint& SweepSeries::at(std::size_t l) const {
  for (const auto& p : points) {
    if (p.l == l) return p;
  }
  throw Error(Errc::kInvalidArgument, "series '" + model + "' has no point at l=" + std::to_string(l));
}

std::vector<SweepSeries> run_sweep(const MatrixSet& matrices, const SweepConfig& config, CellSelector selector) {
  const auto lengths = config.lengths();
  std::vector<SweepSeries> out;

  auto matrix_for = [&](const std::string& model, Temperature t, std::size_t l) -> const SprMatrix& {
    auto it = matrices.find({model, t, l});
    if (it == matrices.end()) throw Error(Errc::kMissingMatrix, key_text(model, t, l));
    return it->second;
  };

  for (const auto& model : config.models) {
    for (Temperature t : config.temperatures) {
      if (!config.supports(model, t)) continue;
      SweepSeries s{model, t, SeriesKind::kModel, {}};
      for (std::size_t l : lengths) {
        const SprMatrix& m = matrix_for(model, t, l);
        std::vector<double> values;
        for (std::size_t r = 0; r < m.dim(); ++r) {
          for (std::size_t c = 0; c < m.dim(); ++c) {
            if (selected(selector, m.labels[r], m.labels[c], r, c)) values.push_back(m.cells[r][c]);
          }
        }
        s.points.push_back(aggregate(l, values));
      }
      out.push_back(std::move(s));
    }
  }

  // Original and control texts are the same for every model, so the first
  // model with matrices at a temperature supplies the human baseline.
  for (Temperature t : config.temperatures) {
    auto model = std::find_if(config.models.begin(), config.models.end(),
                              [&](const std::string& m) { return config.supports(m, t); });
    if (model == config.models.end()) continue;
    const SprMatrix& first = matrix_for(*model, t, lengths.front());
    auto orig = find_label(first, GroupKind::kOriginal);
    auto ctrl = find_label(first, GroupKind::kControl);
    if (!orig || !ctrl) continue;
    SweepSeries s{first.labels[*orig].name + "-vs-" + first.labels[*ctrl].name, t, SeriesKind::kHumanControl, {}};
    for (std::size_t l : lengths) {
      s.points.push_back(aggregate(l, {matrix_for(*model, t, l).cell(*orig, *ctrl)}));
    }
    out.push_back(std::move(s));
  }
  return out;
}

SpreadSeries temperature_spread(const SweepSeries& s0, const SweepSeries& s1) {
  if (s0.model != s1.model) {
    throw Error(Errc::kInvalidArgument, "spread needs one model, got '" + s0.model + "' and '" + s1.model + "'");
  }
  if (s0.temperature != Temperature::kZero || s1.temperature != Temperature::kOne) {
    throw Error(Errc::kInvalidArgument, "spread takes the temperature-0 series first, then temperature 1");
  }
  check_same_lengths(s0, s1);
  SpreadSeries out{s0.model, {}};
  for (std::size_t i = 0; i < s0.points.size(); ++i) {
    out.points.push_back({s0.points[i].l, exact_difference(s0.points[i].mean, s1.points[i].mean)});
  }
  return out;
}

SpreadSeries temperature_spread(std::span<const SweepSeries> all, const std::string& model,
                                bool supports_temperature_0) {
  if (!supports_temperature_0) {
    throw Error(Errc::kTemperatureUnsupported, "model '" + model + "' does not accept temperature 0");
  }
  const SweepSeries* s0 = nullptr;
  const SweepSeries* s1 = nullptr;
  for (const auto& s : all) {
    if (s.kind != SeriesKind::kModel || s.model != model) continue;
    (s.temperature == Temperature::kZero ? s0 : s1) = &s;
  }
  if (!s0) throw Error(Errc::kTemperatureUnsupported, "no temperature-0 series for model '" + model + "'");
  if (!s1) throw Error(Errc::kInvalidArgument, "no temperature-1 series for model '" + model + "'");
  return temperature_spread(*s0, *s1);
}

RelativeSeries relative_means(std::span<const SweepSeries> series, const std::string& base_model) {
  auto base = std::find_if(series.begin(), series.end(), [&](const SweepSeries& s) { return s.model == base_model; });
  if (base == series.end()) throw Error(Errc::kBaseModelMissing, "base model '" + base_model + "' not in series");
  RelativeSeries out{base_model, base->temperature, {}};
  for (const auto& s : series) {
    if (s.temperature != base->temperature) {
      throw Error(Errc::kInvalidArgument, "relative means need one temperature; '" + s.model + "' differs");
    }
    check_same_lengths(*base, s);
  }
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      RelativePoint p{s.model, s.points[i].l, std::nullopt};
      const double denom = base->points[i].mean;
      if (denom != 0.0) p.ratio = s.points[i].mean / denom;
      out.entries.push_back(std::move(p));
    }
  }
  return out;
}

std::string to_string(Direction d) {
  switch (d) {
    case Direction::kRise: return "rise";
    case Direction::kPlateau: return "plateau";
    case Direction::kDecline: return "decline";
  }
  return "?";
}

SpreadShape classify_spread(const SpreadSeries& spread, double flatness_tolerance) {
  SpreadShape shape{spread.model, {}, {}};
  for (std::size_t i = 0; i + 1 < spread.points.size(); ++i) {
    const double diff = spread.points[i + 1].delta - spread.points[i].delta;
    Direction d = diff > flatness_tolerance    ? Direction::kRise
                  : diff < -flatness_tolerance ? Direction::kDecline
                                               : Direction::kPlateau;
    if (!shape.segments.empty() && shape.segments.back().direction == d) {
      shape.segments.back().l_end = spread.points[i + 1].l;
    } else {
      shape.segments.push_back({d, spread.points[i].l, spread.points[i + 1].l});
    }
  }
  for (const auto& seg : shape.segments) {
    if (!shape.label.empty()) shape.label += '-';
    shape.label += to_string(seg.direction);
  }
  if (shape.label.empty()) shape.label = "single-point";
  return shape;
}

ConvergenceReport trend_report(std::span<const SweepSeries> series, std::span<const SpreadSeries> spreads,
                               std::span<const RelativeSeries> relatives,
                               std::span<const std::string> release_order, double flatness_tolerance) {
  ConvergenceReport report;
  report.flatness_tolerance = flatness_tolerance;

  std::vector<std::pair<Temperature, std::size_t>> keys;
  for (const auto& s : series) {
    if (s.kind != SeriesKind::kModel) continue;
    for (const auto& p : s.points) keys.emplace_back(s.temperature, p.l);
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  for (auto [t, l] : keys) {
    TrendEntry entry{t, l, {}, {}, true};
    for (const auto& model : release_order) {
      for (const auto& s : series) {
        if (s.kind != SeriesKind::kModel || s.model != model || s.temperature != t) continue;
        for (const auto& p : s.points) {
          if (p.l != l) continue;
          entry.models.push_back(model);
          entry.means.push_back(p.mean);
        }
      }
    }
    for (std::size_t i = 1; i < entry.means.size(); ++i) {
      if (entry.means[i] < entry.means[i - 1]) entry.monotone_non_decreasing = false;
    }
    report.trends.push_back(std::move(entry));
  }

  for (const auto& model : release_order) {
    for (const auto& spread : spreads) {
      if (spread.model == model) report.shapes.push_back(classify_spread(spread, flatness_tolerance));
    }
  }
  report.relatives.assign(relatives.begin(), relatives.end());
  return report;
}

}  // namespace sprkit
