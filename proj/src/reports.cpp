// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sprkit/reports.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <system_error>

#include "sprkit/error.hpp"
#include "sprkit/keyvalue.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace sprkit {
namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::vector<std::string>> split_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    any = true;
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) throw Error(Errc::kInvalidArgument, "unterminated quoted CSV field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(Errc::kInvalidArgument, "not a number: '" + s + "'");
  }
  return v;
}

std::size_t parse_size(const std::string& s) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(Errc::kInvalidArgument, "not a count: '" + s + "'");
  }
  return v;
}

constexpr const char* kSeriesHeader = "model,temperature,l,value,std,count,flags";

}  // namespace

std::string format_display(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string format_exact(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error(Errc::kInvalidArgument, "cannot format number");
  return std::string(buf, ptr);
}

std::string render_matrix_csv(const SprMatrix& m, int decimals) {
  auto fmt = [decimals](double v) {
    if (decimals < 0) return format_exact(v);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return std::string(buf);
  };
  std::string out = "group";
  for (const auto& label : m.labels) out += "," + csv_field(label.name);
  out += '\n';
  for (std::size_t r = 0; r < m.dim(); ++r) {
    out += csv_field(m.labels[r].name);
    for (std::size_t c = 0; c < m.dim(); ++c) out += "," + fmt(m.cell(r, c));
    out += '\n';
  }
  return out;
}

void emit_matrix_csv(const SprMatrix& m, const fs::path& path) {
  fs::create_directories(path.parent_path());
  write_file_atomic(path, render_matrix_csv(m, 2));
  fs::path full = path;
  full.replace_filename(path.stem().string() + ".full.csv");
  write_file_atomic(full, render_matrix_csv(m, -1));
}

std::string to_string(SeriesFile kind) {
  switch (kind) {
    case SeriesFile::kSweep: return "sweep";
    case SeriesFile::kSpread: return "spread";
    case SeriesFile::kRelative: return "relative";
  }
  return "?";
}

std::vector<SeriesRow> series_rows(std::span<const SweepSeries> series) {
  std::vector<SeriesRow> rows;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      rows.push_back({s.model, to_string(s.temperature), p.l, p.mean, p.std, p.count,
                      s.kind == SeriesKind::kHumanControl ? "human-control" : ""});
    }
  }
  return rows;
}

std::vector<SeriesRow> series_rows(std::span<const SpreadSeries> spreads) {
  std::vector<SeriesRow> rows;
  for (const auto& s : spreads) {
    for (const auto& p : s.points) rows.push_back({s.model, "0-1", p.l, p.delta, std::nullopt, std::nullopt, ""});
  }
  return rows;
}

std::vector<SeriesRow> series_rows(std::span<const RelativeSeries> relatives) {
  std::vector<SeriesRow> rows;
  for (const auto& r : relatives) {
    for (const auto& e : r.entries) {
      std::string flags = "log-scale-recommended;base=" + r.base_model;
      if (!e.ratio) flags += ";undefined";
      rows.push_back({e.model, to_string(r.temperature), e.l, e.ratio, std::nullopt, std::nullopt, flags});
    }
  }
  return rows;
}

std::string render_series_csv(std::span<const SeriesRow> rows) {
  std::string out = kSeriesHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += csv_field(r.model) + "," + csv_field(r.temperature) + "," + std::to_string(r.l) + ",";
    if (r.value) out += format_exact(*r.value);
    out += ",";
    if (r.std) out += format_exact(*r.std);
    out += ",";
    if (r.count) out += std::to_string(*r.count);
    out += "," + csv_field(r.flags) + "\n";
  }
  return out;
}

json series_json(SeriesFile kind, std::span<const SeriesRow> rows) {
  json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["kind"] = to_string(kind);
  doc["rows"] = json::array();
  for (const auto& r : rows) {
    json row;
    row["model"] = r.model;
    row["temperature"] = r.temperature;
    row["l"] = r.l;
    row["value"] = r.value ? json(*r.value) : json(nullptr);
    row["std"] = r.std ? json(*r.std) : json(nullptr);
    row["count"] = r.count ? json(*r.count) : json(nullptr);
    row["flags"] = r.flags;
    doc["rows"].push_back(std::move(row));
  }
  return doc;
}

std::vector<SeriesRow> parse_series_csv(std::string_view text) {
  auto table = split_csv(text);
  if (table.empty()) throw Error(Errc::kInvalidArgument, "series CSV is empty");
  std::string header;
  for (std::size_t i = 0; i < table[0].size(); ++i) header += (i ? "," : "") + table[0][i];
  if (header != kSeriesHeader) throw Error(Errc::kInvalidArgument, "unexpected series header: " + header);
  std::vector<SeriesRow> rows;
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto& f = table[i];
    if (f.size() != 7) throw Error(Errc::kInvalidArgument, "series row " + std::to_string(i) + " has wrong width");
    SeriesRow r;
    r.model = f[0];
    r.temperature = f[1];
    r.l = parse_size(f[2]);
    if (!f[3].empty()) r.value = parse_double(f[3]);
    if (!f[4].empty()) r.std = parse_double(f[4]);
    if (!f[5].empty()) r.count = parse_size(f[5]);
    r.flags = f[6];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SeriesRow> parse_series_json(const json& doc) {
  std::vector<SeriesRow> rows;
  for (const auto& j : doc.at("rows")) {
    SeriesRow r;
    r.model = j.at("model").get<std::string>();
    r.temperature = j.at("temperature").get<std::string>();
    r.l = j.at("l").get<std::size_t>();
    if (!j.at("value").is_null()) r.value = j.at("value").get<double>();
    if (!j.at("std").is_null()) r.std = j.at("std").get<double>();
    if (!j.at("count").is_null()) r.count = j.at("count").get<std::size_t>();
    r.flags = j.at("flags").get<std::string>();
    rows.push_back(std::move(r));
  }
  return rows;
}

void emit_series(SeriesFile kind, std::span<const SeriesRow> rows, const fs::path& dir) {
  fs::create_directories(dir);
  const std::string stem = to_string(kind) + ".v" + std::to_string(kReportSchemaVersion);
  write_file_atomic(dir / (stem + ".csv"), render_series_csv(rows));
  write_file_atomic(dir / (stem + ".json"), dump_json(series_json(kind, rows)));
}

json convergence_json(const ConvergenceReport& report) {
  json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["flatness_tolerance"] = report.flatness_tolerance;
  doc["trends"] = json::array();
  for (const auto& t : report.trends) {
    doc["trends"].push_back({{"temperature", to_string(t.temperature)},
                             {"l", t.l},
                             {"models", t.models},
                             {"means", t.means},
                             {"monotone_non_decreasing", t.monotone_non_decreasing}});
  }
  doc["spread_shapes"] = json::array();
  for (const auto& s : report.shapes) {
    json segments = json::array();
    for (const auto& seg : s.segments) {
      segments.push_back({{"direction", to_string(seg.direction)}, {"l_begin", seg.l_begin}, {"l_end", seg.l_end}});
    }
    doc["spread_shapes"].push_back({{"model", s.model}, {"label", s.label}, {"segments", segments}});
  }
  doc["relative"] = series_json(SeriesFile::kRelative, series_rows(std::span(report.relatives)))["rows"];
  return doc;
}

std::string render_stats_csv(std::span<const StatsRow> rows) {
  std::string out = "source,model,temperature,group,n,min,median,mean,max\n";
  for (const auto& r : rows) {
    out += to_string(r.source) + "," + csv_field(r.model) + "," + (r.temperature ? to_string(*r.temperature) : "") +
           "," + csv_field(r.group) + "," + std::to_string(r.stats.n) + "," + std::to_string(r.stats.min) + "," +
           format_exact(r.stats.median) + "," + format_exact(r.stats.mean) + "," + std::to_string(r.stats.max) + "\n";
  }
  return out;
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace sprkit
