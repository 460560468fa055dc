// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sprkit/cli.hpp"

#include <algorithm>
#include <charconv>
#include <csignal>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sprkit/analysis.hpp"
#include "sprkit/corpus.hpp"
#include "sprkit/error.hpp"
#include "sprkit/hash.hpp"
#include "sprkit/keyvalue.hpp"
#include "sprkit/paraphrase_client.hpp"
#include "sprkit/reports.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace sprkit::cli {
namespace {

volatile std::sig_atomic_t g_stop = 0;
extern "C" void on_interrupt(int) { g_stop = 1; }

// Raw flag values; empty means "not given".
struct Flags {
  std::string config, dataset, store, models, temps, rounds_t0, rounds_t1, l_min, l_max, mode, gap_seconds, out,
      fixtures, replay, sources, selector;
};

struct Settings {
  fs::path dataset;
  fs::path primary_root;
  fs::path control_root;
  fs::path store;
  fs::path out = "out";
  fs::path fixtures;
  std::vector<std::string> model_ids;
  std::vector<Temperature> temps{Temperature::kZero, Temperature::kOne};
  int rounds_t0 = 3;
  int rounds_t1 = 5;
  std::size_t l_min = 3;
  std::size_t l_max = 20;
  TransportMode mode = TransportMode::kLive;
  double gap_seconds = 30.0;
  std::vector<SourceCorpus> sources{SourceCorpus::kPrimary};
  CellSelector selector = CellSelector::kOffDiagonalParaphrase;
  std::string base_model;
  double flatness_tolerance = 0.25;
  std::string primary_name = "primary";
  std::string control_name = "control";
  std::string paraphrase_prefix = "CGPT_p=";
  TokenizationPolicy policy;
  std::size_t min_words = 100;
  std::size_t max_words = 2000;
  ProviderConfig provider;
  ModelRegistry registry = ModelRegistry::with_builtins();
};

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string item(text.substr(pos, comma - pos));
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
    pos = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(Errc::kConfigError, std::string(what) + ": not a number: '" + std::string(text) + "'");
  }
  return v;
}

bool parse_bool(std::string_view text, std::string_view what) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw Error(Errc::kConfigError, std::string(what) + ": expected true or false, got '" + std::string(text) + "'");
}

std::vector<Temperature> parse_temps(std::string_view text) {
  std::vector<Temperature> out;
  for (const auto& item : split_list(text)) {
    Temperature t = parse_temperature(item);
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw Error(Errc::kConfigError, "no temperatures given");
  return out;
}

std::vector<SourceCorpus> parse_sources(std::string_view text) {
  std::vector<SourceCorpus> out;
  for (const auto& item : split_list(text)) {
    try {
      SourceCorpus s = parse_source(item);
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    } catch (const Error& e) {
      throw Error(Errc::kConfigError, e.what());
    }
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw Error(Errc::kConfigError, "no sources given");
  return out;
}

// Relative paths in a config file are taken relative to the file.
fs::path resolve(const fs::path& base, const std::string& value) {
  fs::path p(value);
  return p.is_relative() && !base.empty() ? base / p : p;
}

void apply_config(Settings& s, const fs::path& file) {
  const KvDocument doc = KvDocument::load(file);
  const fs::path base = file.parent_path();
  for (const auto& section : doc.sections()) {
    auto where = [&](const std::string& key) { return file.string() + ": [" + section.name + "] " + key; };
    if (section.name == "run") {
      for (const auto& [key, value] : section.entries) {
        if (key == "dataset") s.dataset = resolve(base, value);
        else if (key == "primary_root") s.primary_root = resolve(base, value);
        else if (key == "control_root") s.control_root = resolve(base, value);
        else if (key == "store") s.store = resolve(base, value);
        else if (key == "out") s.out = resolve(base, value);
        else if (key == "fixtures") s.fixtures = resolve(base, value);
        else if (key == "models") s.model_ids = split_list(value);
        else if (key == "temps") s.temps = parse_temps(value);
        else if (key == "rounds_t0") s.rounds_t0 = parse_number<int>(value, where(key));
        else if (key == "rounds_t1") s.rounds_t1 = parse_number<int>(value, where(key));
        else if (key == "l_min") s.l_min = parse_number<std::size_t>(value, where(key));
        else if (key == "l_max") s.l_max = parse_number<std::size_t>(value, where(key));
        else if (key == "mode") s.mode = parse_mode(value);
        else if (key == "gap_seconds") s.gap_seconds = parse_number<double>(value, where(key));
        else if (key == "sources") s.sources = parse_sources(value);
        else if (key == "selector") s.selector = parse_cell_selector(value);
        else if (key == "base_model") s.base_model = value;
        else if (key == "flatness_tolerance") s.flatness_tolerance = parse_number<double>(value, where(key));
        else throw Error(Errc::kConfigError, where(key) + ": unknown key");
      }
    } else if (section.name == "corpus") {
      for (const auto& [key, value] : section.entries) {
        if (key == "primary_name") s.primary_name = value;
        else if (key == "control_name") s.control_name = value;
        else if (key == "paraphrase_prefix") s.paraphrase_prefix = value;
        else if (key == "min_words") s.min_words = parse_number<std::size_t>(value, where(key));
        else if (key == "max_words") s.max_words = parse_number<std::size_t>(value, where(key));
        else if (key == "tokenization") s.policy = parse_policy(value);
        else throw Error(Errc::kConfigError, where(key) + ": unknown key");
      }
    } else if (section.name == "provider") {
      for (const auto& [key, value] : section.entries) {
        if (key == "endpoint") s.provider.endpoint = value;
        else if (key == "credential_env") s.provider.credential_env = value;
        else if (key == "timeout_seconds")
          s.provider.timeout = std::chrono::milliseconds(
              static_cast<long long>(parse_number<double>(value, where(key)) * 1000.0));
        else if (key == "max_retries") s.provider.max_retries = parse_number<int>(value, where(key));
        else if (key == "backoff_seconds")
          s.provider.backoff = std::chrono::milliseconds(
              static_cast<long long>(parse_number<double>(value, where(key)) * 1000.0));
        else if (key == "reasoning_none") s.provider.reasoning_none = parse_bool(value, where(key));
        else throw Error(Errc::kConfigError, where(key) + ": unknown key");
      }
    } else if (section.name.rfind("model.", 0) == 0) {
      const std::string id = section.name.substr(6);
      ModelSpec spec = s.registry.contains(id) ? s.registry.get(id) : ModelSpec{id, id, id, {}, {}, true, false, 0};
      for (const auto& [key, value] : section.entries) {
        if (key == "api_name") spec.api_name = value;
        else if (key == "display_name") spec.display_name = value;
        else if (key == "knowledge_cutoff") spec.knowledge_cutoff = Date::parse(value);
        else if (key == "release") spec.release = Date::parse(value);
        else if (key == "supports_temperature_0") spec.supports_temperature_0 = parse_bool(value, where(key));
        else if (key == "reasoning_none") spec.reasoning_none = parse_bool(value, where(key));
        else if (key == "release_order") spec.release_order = parse_number<int>(value, where(key));
        else throw Error(Errc::kConfigError, where(key) + ": unknown key");
      }
      s.registry.add(std::move(spec));
    } else {
      throw Error(Errc::kConfigError, file.string() + ": unknown section [" + section.name + "]");
    }
  }
}

Settings resolve_settings(const Flags& f) {
  Settings s;
  fs::path config = f.config;
  if (config.empty() && !f.replay.empty() && fs::exists(fs::path(f.replay) / "sprkit.conf")) {
    config = fs::path(f.replay) / "sprkit.conf";
  }
  if (!config.empty()) apply_config(s, config);

  if (!f.dataset.empty()) s.dataset = f.dataset;
  if (!f.store.empty()) s.store = f.store;
  if (!f.out.empty()) s.out = f.out;
  if (!f.fixtures.empty()) s.fixtures = f.fixtures;
  if (!f.models.empty()) s.model_ids = split_list(f.models);
  if (!f.temps.empty()) s.temps = parse_temps(f.temps);
  if (!f.rounds_t0.empty()) s.rounds_t0 = parse_number<int>(f.rounds_t0, "--rounds-t0");
  if (!f.rounds_t1.empty()) s.rounds_t1 = parse_number<int>(f.rounds_t1, "--rounds-t1");
  if (!f.l_min.empty()) s.l_min = parse_number<std::size_t>(f.l_min, "--l-min");
  if (!f.l_max.empty()) s.l_max = parse_number<std::size_t>(f.l_max, "--l-max");
  if (!f.mode.empty()) s.mode = parse_mode(f.mode);
  if (!f.gap_seconds.empty()) s.gap_seconds = parse_number<double>(f.gap_seconds, "--gap-seconds");
  if (!f.sources.empty()) s.sources = parse_sources(f.sources);
  if (!f.selector.empty()) s.selector = parse_cell_selector(f.selector);
  if (!f.replay.empty()) {
    s.mode = TransportMode::kReplay;
    const fs::path dir = f.replay;
    if (f.fixtures.empty()) s.fixtures = fs::is_directory(dir / "responses") ? dir / "responses" : dir;
  }
  if (s.store.empty()) s.store = s.out / "store";

  if (s.model_ids.empty()) {
    for (const auto& m : builtin_models()) s.model_ids.push_back(m.id);
  }
  if (s.rounds_t0 < 1 || s.rounds_t1 < 1) throw Error(Errc::kConfigError, "round counts must be at least 1");
  if (s.l_min < 1 || s.l_min > s.l_max) throw Error(Errc::kConfigError, "need 1 <= l-min <= l-max");
  if (!(s.gap_seconds >= 0.0)) throw Error(Errc::kConfigError, "gap seconds must be non-negative");
  s.provider.gap = std::chrono::milliseconds(static_cast<long long>(s.gap_seconds * 1000.0));
  return s;
}

std::vector<ModelSpec> selected_models(const Settings& s) {
  auto models = s.registry.in_release_order(s.model_ids);
  ModelRegistry chosen;
  for (const auto& m : models) chosen.add(m);
  chosen.validate();
  return models;
}

IngestResult ingest(const Settings& s) {
  if (s.dataset.empty()) throw Error(Errc::kConfigError, "no dataset index given (--dataset or [run] dataset)");
  IngestOptions opts;
  opts.index = s.dataset;
  opts.primary_root = s.primary_root;
  opts.control_root = s.control_root;
  opts.policy = s.policy;
  opts.min_words = s.min_words;
  opts.max_words = s.max_words;
  return ingest_paired_corpus(opts);
}

SweepConfig sweep_config(const Settings& s) {
  SweepConfig sweep;
  sweep.l_min = s.l_min;
  sweep.l_max = s.l_max;
  sweep.temperatures = s.temps;
  sweep.models = s.model_ids;
  return sweep;
}

AnalysisOptions analysis_options(const Settings& s) {
  AnalysisOptions o;
  o.models = selected_models(s);
  o.sweep = sweep_config(s);
  o.rounds_t0 = s.rounds_t0;
  o.rounds_t1 = s.rounds_t1;
  o.sources = s.sources;
  o.policy = s.policy;
  o.primary_name = s.primary_name;
  o.control_name = s.control_name;
  o.paraphrase_prefix = s.paraphrase_prefix;
  o.selector = s.selector;
  o.base_model = s.base_model;
  o.flatness_tolerance = s.flatness_tolerance;
  return o;
}

json config_echo(const Settings& s) {
  json temps = json::array();
  for (Temperature t : s.temps) temps.push_back(to_string(t));
  json sources = json::array();
  for (SourceCorpus src : s.sources) sources.push_back(to_string(src));
  return {{"models", s.model_ids},
          {"temps", temps},
          {"rounds_t0", s.rounds_t0},
          {"rounds_t1", s.rounds_t1},
          {"l_min", s.l_min},
          {"l_max", s.l_max},
          {"sources", sources},
          {"selector", to_string(s.selector)},
          {"base_model", s.base_model},
          {"flatness_tolerance", s.flatness_tolerance},
          {"primary_name", s.primary_name},
          {"control_name", s.control_name},
          {"paraphrase_prefix", s.paraphrase_prefix},
          {"min_words", s.min_words},
          {"max_words", s.max_words}};
}

int do_ingest(const Settings& s, std::ostream& out) {
  const IngestResult r = ingest(s);
  out << "pairs: " << r.pairs.size() << "\nrejected: " << r.rejected.size() << "\ndataset_checksum: "
      << r.dataset_checksum << "\n";
  for (const auto& rej : r.rejected) out << "  rejected " << rej.chapter << ": " << rej.reason << "\n";
  return kExitOk;
}

// Runs (or resumes) the campaign; returns the campaign exit code.
int run_generation(const Settings& s, const IngestResult& corpus, std::ostream& out, std::ostream& err) {
  if (s.store.empty()) throw Error(Errc::kConfigError, "no record store given (--store or [run] store)");
  if (s.mode != TransportMode::kLive && s.fixtures.empty()) {
    throw Error(Errc::kConfigError, "mode " + to_string(s.mode) + " needs a fixture directory (--fixtures)");
  }
  fs::create_directories(s.store);
  const fs::path mpath = manifest_path(s.store);
  RunManifest manifest;
  if (fs::exists(mpath)) {
    manifest = RunManifest::load(mpath);
    if (manifest.dataset_checksum != corpus.dataset_checksum) {
      throw Error(Errc::kConfigError, "store " + s.store.string() + " was generated from a different dataset");
    }
  } else {
    manifest.dataset_checksum = corpus.dataset_checksum;
    manifest.policy = s.policy;
    manifest.sweep = sweep_config(s);
    manifest.models = s.model_ids;
  }

  CampaignPlan plan;
  plan.models = selected_models(s);
  plan.temperatures = s.temps;
  plan.rounds_t0 = s.rounds_t0;
  plan.rounds_t1 = s.rounds_t1;
  plan.sources = s.sources;

  HttpTransport http;
  std::optional<RecordingTransport> recording;
  std::optional<ReplayTransport> replay;
  Transport* transport = &http;
  if (s.mode == TransportMode::kRecord) {
    fs::create_directories(s.fixtures);
    transport = &recording.emplace(http, s.fixtures);
  } else if (s.mode == TransportMode::kReplay) {
    transport = &replay.emplace(s.fixtures);
  }
  SystemClock clock;
  ParaphraseClient client(s.provider, s.mode, *transport, clock);

  g_stop = 0;
  auto previous = std::signal(SIGINT, on_interrupt);
  CampaignSummary summary =
      run_campaign(corpus.pairs, plan, client, manifest, s.store, [] { return g_stop != 0; });
  std::signal(SIGINT, previous);

  out << "campaign: requested " << summary.requested << ", done " << summary.done << ", failed " << summary.failed
      << ", skipped " << summary.skipped << (summary.interrupted ? ", interrupted" : "") << "\n";
  if (summary.failed > 0) {
    for (const auto& [key, state] : manifest.ledger) {
      if (state.status == CellStatus::kFailed) err << "failed " << key.text() << ": " << state.reason << "\n";
    }
  }
  return summary.failed > 0 || summary.interrupted ? kExitPartial : kExitOk;
}

int do_generate(const Settings& s, std::ostream& out, std::ostream& err) {
  const IngestResult corpus = ingest(s);
  return run_generation(s, corpus, out, err);
}

void print_summary(const Analysis& analysis, std::ostream& out) {
  for (const auto& sa : analysis.sources) {
    out << "source " << to_string(sa.source) << ": " << sa.matrices.size() << " matrices\n";
    for (const auto& t : sa.convergence.trends) {
      if (!t.monotone_non_decreasing) {
        out << "  t" << to_string(t.temperature) << " l=" << t.l << ": means not non-decreasing by release\n";
      }
    }
    for (const auto& shape : sa.convergence.shapes) out << "  spread " << shape.model << ": " << shape.label << "\n";
    for (const auto& [model, reason] : sa.spread_absent) out << "  spread " << model << ": absent (" << reason << ")\n";
  }
}

int analyze_and_emit(const Settings& s, const IngestResult& corpus, std::ostream& out) {
  if (s.store.empty()) throw Error(Errc::kConfigError, "no record store given (--store or [run] store)");
  const auto records = load_records(s.store);
  const AnalysisOptions options = analysis_options(s);
  SuffixArrayEngine engine;
  const Analysis analysis = analyze(corpus.pairs, records, options, engine);
  BundleInfo info;
  info.dataset_checksum = corpus.dataset_checksum;
  const fs::path mpath = manifest_path(s.store);
  if (fs::exists(mpath)) info.manifest_checksum = sha256_hex(read_file(mpath));
  info.config = config_echo(s);
  const auto files = emit_bundle(analysis, options, info, s.out);
  print_summary(analysis, out);
  out << "wrote " << files.size() << " files to " << s.out.string() << "\n";
  return kExitOk;
}

int do_analyze(const Settings& s, bool generate_first, std::ostream& out, std::ostream& err) {
  const IngestResult corpus = ingest(s);
  int code = kExitOk;
  if (generate_first) code = run_generation(s, corpus, out, err);
  const int emitted = analyze_and_emit(s, corpus, out);
  return code != kExitOk ? code : emitted;
}

int do_validate(const Settings& s, std::ostream& out, std::ostream& err) {
  if (s.store.empty()) throw Error(Errc::kConfigError, "no record store given (--store or [run] store)");
  std::vector<StoreIssue> issues = verify_store(s.store);
  const fs::path mpath = manifest_path(s.store);
  if (fs::exists(mpath)) {
    try {
      RunManifest::load(mpath);
    } catch (const Error& e) {
      issues.push_back({mpath, e.what()});
    }
  }
  if (!s.dataset.empty() && issues.empty()) {
    const IngestResult corpus = ingest(s);
    std::map<std::string, const DocumentPair*> by_chapter;
    for (const auto& p : corpus.pairs) by_chapter[p.chapter] = &p;
    for (const auto& r : load_records(s.store)) {
      auto it = by_chapter.find(r.chapter);
      const fs::path where = s.store / r.directory() / r.file_name();
      if (it == by_chapter.end()) {
        issues.push_back({where, "chapter not in the dataset"});
        continue;
      }
      const std::string& text =
          r.source == SourceCorpus::kPrimary ? it->second->primary_text : it->second->control_text;
      if (prompt_fingerprint(text) != r.prompt_fingerprint) issues.push_back({where, "prompt fingerprint mismatch"});
    }
  }
  if (issues.empty()) {
    out << "store " << s.store.string() << ": ok\n";
    return kExitOk;
  }
  for (const auto& issue : issues) err << issue.path.string() << ": " << issue.problem << "\n";
  err << issues.size() << " problem(s) found\n";
  return kExitError;
}

void add_flags(CLI::App* app, Flags& f, bool analysis) {
  app->add_option("--config", f.config, "key=value config file");
  app->add_option("--dataset", f.dataset, "paired corpus index (chapter TAB primary TAB control)");
  app->add_option("--store", f.store, "paraphrase record store directory");
  app->add_option("--models", f.models, "comma-separated model ids");
  app->add_option("--temps", f.temps, "comma-separated temperatures (0,1)");
  app->add_option("--rounds-t0", f.rounds_t0, "paraphrase rounds at temperature 0");
  app->add_option("--rounds-t1", f.rounds_t1, "paraphrase rounds at temperature 1");
  app->add_option("--mode", f.mode, "live, record or replay");
  app->add_option("--gap-seconds", f.gap_seconds, "minimum spacing between requests");
  app->add_option("--fixtures", f.fixtures, "response fixture directory for record/replay");
  app->add_option("--sources", f.sources, "comma-separated sources to paraphrase (primary,control)");
  app->add_option("--out", f.out, "output directory");
  if (analysis) {
    app->add_option("--l-min", f.l_min, "shortest pattern length");
    app->add_option("--l-max", f.l_max, "longest pattern length");
    app->add_option("--selector", f.selector, "off-diagonal-paraphrase, original-vs-paraphrase or include-diagonal");
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"sprkit: pattern-overlap similarity across paraphrase generations", "sprkit"};
  Flags f;
  auto* ingest_cmd = app.add_subcommand("ingest", "read and check the paired corpus");
  auto* generate_cmd = app.add_subcommand("generate", "request paraphrases into the record store");
  auto* analyze_cmd = app.add_subcommand("analyze", "compute matrices and series and write the report bundle");
  auto* report_cmd = app.add_subcommand("report", "re-emit the report bundle from the record store");
  auto* validate_cmd = app.add_subcommand("validate", "verify record store checksums and prompt fingerprints");
  add_flags(ingest_cmd, f, false);
  add_flags(generate_cmd, f, false);
  add_flags(analyze_cmd, f, true);
  add_flags(report_cmd, f, true);
  add_flags(validate_cmd, f, false);
  analyze_cmd->add_option("--replay", f.replay, "replay fixtures from this directory before analyzing");
  app.require_subcommand(1);

  if (args.empty()) {
    err << app.help();
    return kExitUsage;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    const Settings s = resolve_settings(f);
    if (ingest_cmd->parsed()) return do_ingest(s, out);
    if (generate_cmd->parsed()) return do_generate(s, out, err);
    if (analyze_cmd->parsed()) return do_analyze(s, !f.replay.empty(), out, err);
    if (report_cmd->parsed()) {
      const IngestResult corpus = ingest(s);
      return analyze_and_emit(s, corpus, out);
    }
    if (validate_cmd->parsed()) return do_validate(s, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace sprkit::cli
