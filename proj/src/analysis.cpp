// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sprkit/analysis.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>

#include "sprkit/error.hpp"
#include "sprkit/keyvalue.hpp"
#include "sprkit/reports.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace sprkit {
namespace {

using RecordKey = std::tuple<SourceCorpus, std::string, Temperature, std::string, int>;

int rounds_for(const AnalysisOptions& o, Temperature t) { return t == Temperature::kZero ? o.rounds_t0 : o.rounds_t1; }

SourceAnalysis analyze_source(SourceCorpus source, std::span<const DocumentPair> pairs,
                              const std::map<RecordKey, const ParaphraseRecord*>& by_key,
                              const AnalysisOptions& options, const PatternEngine& engine) {
  SourceAnalysis out;
  out.source = source;

  SweepConfig sweep = options.sweep;
  sweep.models.clear();
  sweep.unsupported.clear();
  std::vector<std::string> release_order;
  for (const auto& m : options.models) {
    sweep.models.push_back(m.id);
    release_order.push_back(m.id);
  }
  sweep.validate();
  const auto lengths = sweep.lengths();

  // One vocabulary per source keeps token ids stable across every slice.
  Vocabulary vocab;
  auto encode_text = [&](const std::string& text, const std::string& id) {
    TokenSeq seq = normalize_and_tokenize(text, options.policy, id);
    IdSeq ids;
    ids.source_id = seq.source_id;
    ids.ids.reserve(seq.tokens.size());
    for (const auto& tok : seq.tokens) ids.ids.push_back(vocab.intern(tok));
    return ids;
  };

  const bool primary = source == SourceCorpus::kPrimary;
  const std::string& original_name = primary ? options.primary_name : options.control_name;
  const std::string& control_name = primary ? options.control_name : options.primary_name;

  std::vector<IdSeq> originals, controls;
  for (const auto& p : pairs) {
    originals.push_back(encode_text(primary ? p.primary_text : p.control_text, p.chapter + "/original"));
    controls.push_back(encode_text(primary ? p.control_text : p.primary_text, p.chapter + "/control"));
  }

  for (const auto& model : options.models) {
    for (Temperature t : sweep.temperatures) {
      if (t == Temperature::kZero && !model.supports_temperature_0) {
        sweep.unsupported.insert({model.id, t});
        out.exclusions.push_back({model.id, t, "model does not accept temperature 0"});
        continue;
      }
      const int rounds = rounds_for(options, t);
      CorpusSlice slice;
      slice.labels = standard_labels(original_name, rounds, control_name, options.paraphrase_prefix);
      auto& dropped = out.dropped[{model.id, t}];
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        SliceDocument doc;
        doc.id = pairs[i].chapter;
        doc.texts.push_back(originals[i]);
        bool complete = true;
        for (int round = 1; round <= rounds && complete; ++round) {
          auto it = by_key.find({source, model.id, t, pairs[i].chapter, round});
          if (it == by_key.end()) {
            complete = false;
          } else {
            doc.texts.push_back(encode_text(it->second->text, doc.id + "/" + std::to_string(round)));
          }
        }
        if (!complete) {
          dropped.push_back(doc.id);
          continue;
        }
        doc.texts.push_back(controls[i]);
        slice.documents.push_back(std::move(doc));
      }
      if (dropped.empty()) out.dropped.erase({model.id, t});
      if (slice.documents.empty()) {
        sweep.unsupported.insert({model.id, t});
        out.exclusions.push_back({model.id, t, "no document has every paraphrase round"});
        continue;
      }
      auto matrices = build_spr_matrices(slice, lengths, engine);
      for (auto& m : matrices) {
        m.model = model.id;
        m.temperature = t;
        out.matrices.emplace(MatrixKey{model.id, t, m.pattern_length}, std::move(m));
      }
    }
  }

  out.series = run_sweep(out.matrices, sweep, options.selector);

  const bool has_t0 = std::count(sweep.temperatures.begin(), sweep.temperatures.end(), Temperature::kZero) > 0;
  const bool has_t1 = std::count(sweep.temperatures.begin(), sweep.temperatures.end(), Temperature::kOne) > 0;
  std::vector<SweepSeries> model_series;
  for (const auto& s : out.series) {
    if (s.kind == SeriesKind::kModel) model_series.push_back(s);
  }
  if (has_t0 && has_t1) {
    for (const auto& model : options.models) {
      const bool t0 = sweep.supports(model.id, Temperature::kZero);
      const bool t1 = sweep.supports(model.id, Temperature::kOne);
      if (!t0 || !t1) {
        out.spread_absent.emplace_back(model.id, !model.supports_temperature_0
                                                     ? "model does not accept temperature 0"
                                                     : "no complete documents at one temperature");
        continue;
      }
      out.spreads.push_back(temperature_spread(model_series, model.id, true));
    }
  }

  for (Temperature t : sweep.temperatures) {
    std::vector<SweepSeries> at_t;
    for (const auto& s : model_series) {
      if (s.temperature == t) at_t.push_back(s);
    }
    if (at_t.empty()) continue;
    std::string base = options.base_model.empty() ? options.models.front().id : options.base_model;
    if (std::none_of(at_t.begin(), at_t.end(), [&](const SweepSeries& s) { return s.model == base; })) {
      base = at_t.front().model;
    }
    out.relatives.push_back(relative_means(at_t, base));
  }

  out.convergence = trend_report(out.series, out.spreads, out.relatives, release_order, options.flatness_tolerance);
  return out;
}

std::string two_digits(std::size_t l) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02zu", l);
  return buf;
}

}  // namespace

Analysis analyze(std::span<const DocumentPair> pairs, std::span<const ParaphraseRecord> records,
                 const AnalysisOptions& options, const PatternEngine& engine) {
  if (options.models.empty()) throw Error(Errc::kConfigError, "no models to analyze");
  if (pairs.empty()) throw Error(Errc::kEmptyCorpus, "no document pairs to analyze");
  std::map<RecordKey, const ParaphraseRecord*> by_key;
  for (const auto& r : records) by_key[{r.source, r.model, r.temperature, r.chapter, r.round}] = &r;

  Analysis out;
  for (SourceCorpus source : options.sources) out.sources.push_back(analyze_source(source, pairs, by_key, options, engine));
  out.stats = corpus_stats(pairs, records, options.policy);
  return out;
}

fs::path matrix_relpath(SourceCorpus source, const MatrixKey& key) {
  return fs::path(to_string(source)) / key.model /
         ("t" + to_string(key.temperature) + "_l" + two_digits(key.pattern_length) + ".csv");
}

std::vector<std::string> emit_bundle(const Analysis& analysis, const AnalysisOptions& options, const BundleInfo& info,
                                     const fs::path& out) {
  std::vector<std::string> written;
  fs::create_directories(out);
  auto note = [&](const fs::path& rel) { written.push_back(rel.generic_string()); };

  json sources = json::array();
  for (const auto& sa : analysis.sources) {
    const fs::path series_rel = fs::path("series") / to_string(sa.source);
    for (const auto& [key, m] : sa.matrices) {
      const fs::path rel = fs::path("matrices") / matrix_relpath(sa.source, key);
      emit_matrix_csv(m, out / rel);
      note(rel);
      fs::path full = rel;
      full.replace_filename(rel.stem().string() + ".full.csv");
      note(full);
    }
    const auto sweep_rows = series_rows(std::span(sa.series));
    const auto spread_rows = series_rows(std::span(sa.spreads));
    const auto relative_rows = series_rows(std::span(sa.relatives));
    emit_series(SeriesFile::kSweep, sweep_rows, out / series_rel);
    emit_series(SeriesFile::kSpread, spread_rows, out / series_rel);
    emit_series(SeriesFile::kRelative, relative_rows, out / series_rel);
    for (const char* kind : {"sweep", "spread", "relative"}) {
      note(series_rel / (std::string(kind) + ".v1.csv"));
      note(series_rel / (std::string(kind) + ".v1.json"));
    }
    const fs::path conv_rel = series_rel / "convergence.json";
    write_file_atomic(out / conv_rel, dump_json(convergence_json(sa.convergence)));
    note(conv_rel);

    json entry;
    entry["source"] = to_string(sa.source);
    entry["spread_absent"] = json::array();
    for (const auto& [model, reason] : sa.spread_absent) {
      entry["spread_absent"].push_back({{"model", model}, {"reason", reason}});
    }
    entry["excluded"] = json::array();
    for (const auto& e : sa.exclusions) {
      entry["excluded"].push_back({{"model", e.model}, {"temperature", to_string(e.temperature)}, {"reason", e.reason}});
    }
    entry["dropped_documents"] = json::array();
    for (const auto& [key, chapters] : sa.dropped) {
      entry["dropped_documents"].push_back(
          {{"model", key.first}, {"temperature", to_string(key.second)}, {"chapters", chapters}});
    }
    sources.push_back(std::move(entry));
  }

  const std::string stats_csv = render_stats_csv(analysis.stats);
  write_file_atomic(out / "corpus_stats.v1.csv", stats_csv);
  note("corpus_stats.v1.csv");
  json stats = json::array();
  for (const auto& r : analysis.stats) {
    stats.push_back({{"source", to_string(r.source)},
                     {"model", r.model},
                     {"temperature", r.temperature ? json(to_string(*r.temperature)) : json(nullptr)},
                     {"group", r.group},
                     {"n", r.stats.n},
                     {"min", r.stats.min},
                     {"median", r.stats.median},
                     {"mean", r.stats.mean},
                     {"max", r.stats.max}});
  }
  write_file_atomic(out / "corpus_stats.v1.json",
                    dump_json({{"schema_version", kReportSchemaVersion}, {"rows", std::move(stats)}}));
  note("corpus_stats.v1.json");

  json models = json::array();
  for (const auto& m : options.models) {
    models.push_back({{"id", m.id},
                      {"api_name", m.api_name},
                      {"display_name", m.display_name},
                      {"knowledge_cutoff", m.knowledge_cutoff.iso()},
                      {"release", m.release.iso()},
                      {"supports_temperature_0", m.supports_temperature_0},
                      {"release_order", m.release_order}});
  }

  json meta;
  meta["schema_version"] = kReportSchemaVersion;
  meta["dataset_checksum"] = info.dataset_checksum;
  meta["manifest_checksum"] = info.manifest_checksum;
  meta["config"] = info.config;
  meta["tokenization"] = to_string(options.policy);
  meta["cell_selector"] = to_string(options.selector);
  meta["models"] = std::move(models);
  meta["sources"] = std::move(sources);
  std::sort(written.begin(), written.end());
  meta["files"] = written;
  write_file_atomic(out / "metadata.json", dump_json(meta));
  written.push_back("metadata.json");
  return written;
}

}  // namespace sprkit
