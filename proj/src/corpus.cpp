// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sprkit/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "sprkit/error.hpp"
#include "sprkit/hash.hpp"
#include "sprkit/keyvalue.hpp"
#include "sprkit/similarity.hpp"

namespace fs = std::filesystem;

namespace sprkit {
namespace {

constexpr std::string_view kRecordManifest = "records.manifest";
constexpr std::string_view kRecordFormat = "sprkit-records/1";
constexpr std::string_view kRunFormat = "sprkit-run/1";

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    auto next = text.find(sep, pos);
    out.emplace_back(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string join(std::span<const std::string> items, char sep) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += sep;
    out += item;
  }
  return out;
}

// Hash of everything except the [checksum] section, as rendered.
std::string content_checksum(const KvDocument& doc) {
  KvDocument body;
  for (const auto& s : doc.sections()) {
    if (s.name == "checksum") continue;
    auto& copy = body.section(s.name);
    copy.entries = s.entries;
  }
  return sha256_hex(body.render());
}

std::string render_with_checksum(KvDocument doc) {
  doc.section("checksum").set("sha256", content_checksum(doc));
  return doc.render();
}

bool checksum_matches(const KvDocument& doc) {
  const KvSection* sum = doc.find_section("checksum");
  if (!sum) return false;
  const std::string* value = sum->find("sha256");
  return value && *value == content_checksum(doc);
}

const std::string& require(const KvSection& s, std::string_view key, const std::string& origin) {
  const std::string* v = s.find(key);
  if (!v) throw Error(Errc::kStoreCorrupt, origin + ": section [" + s.name + "] lacks '" + std::string(key) + "'");
  return *v;
}

int parse_int(std::string_view text, const std::string& what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(std::string(text), &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::kConfigError, what + ": expected an integer, got '" + std::string(text) + "'");
  }
}

}  // namespace

bool is_safe_key(std::string_view key) {
  if (key.empty() || key.front() == '.') return false;
  return std::all_of(key.begin(), key.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' || c == '_' ||
           c == '-';
  });
}

// ---------------------------------------------------------------------------

IngestResult ingest_paired_corpus(const IngestOptions& options) {
  const std::string index_text = read_file(options.index, Errc::kSourceUnreadable);
  const fs::path base = options.index.parent_path();
  const fs::path primary_root = options.primary_root.empty() ? base : options.primary_root;
  const fs::path control_root = options.control_root.empty() ? base : options.control_root;

  IngestResult result;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  for (const auto& raw_line : split(index_text, '\n')) {
    ++line_no;
    std::string line = raw_line;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw Error(Errc::kSourceUnreadable, options.index.string() + ":" + std::to_string(line_no) +
                                               ": expected 3 tab-separated fields");
    }
    const std::string& key = fields[0];
    if (!seen.insert(key).second) {
      throw Error(Errc::kDuplicateChapterKey, "'" + key + "' at " + options.index.string() + ":" +
                                                  std::to_string(line_no));
    }
    if (!is_safe_key(key)) {
      result.rejected.push_back({key, "invalid chapter key"});
      continue;
    }
    auto missing = [](const std::string& rel) { return rel.empty() || rel == "-"; };
    if (missing(fields[1]) || missing(fields[2])) {
      result.rejected.push_back({key, "unpaired"});
      continue;
    }
    DocumentPair pair;
    pair.chapter = key;
    pair.primary_text = read_file(primary_root / fields[1], Errc::kSourceUnreadable);
    pair.control_text = read_file(control_root / fields[2], Errc::kSourceUnreadable);
    pair.primary_words = word_count(pair.primary_text, options.policy);
    pair.control_words = word_count(pair.control_text, options.policy);
    if (pair.primary_words < options.min_words) {
      result.rejected.push_back({key, "too short"});
      continue;
    }
    if (pair.primary_words > options.max_words) {
      result.rejected.push_back({key, "too long"});
      continue;
    }
    result.pairs.push_back(std::move(pair));
  }

  std::sort(result.pairs.begin(), result.pairs.end(),
            [](const DocumentPair& a, const DocumentPair& b) { return a.chapter < b.chapter; });
  std::sort(result.rejected.begin(), result.rejected.end(),
            [](const Rejection& a, const Rejection& b) { return a.chapter < b.chapter; });

  std::ostringstream digest;
  digest << "policy=" << to_string(options.policy) << "\nwords=" << options.min_words << ".." << options.max_words
         << '\n';
  for (const auto& p : result.pairs) {
    digest << p.chapter << '\t' << sha256_hex(p.primary_text) << '\t' << sha256_hex(p.control_text) << '\n';
  }
  result.dataset_checksum = sha256_hex(digest.str());
  return result;
}

// ---------------------------------------------------------------------------

Date Date::parse(std::string_view text) {
  Date d;
  char tail = 0;
  std::string s(text);
  if (std::sscanf(s.c_str(), "%4d-%2d-%2d%c", &d.year, &d.month, &d.day, &tail) == 3 ||
      std::sscanf(s.c_str(), "%2d/%2d/%4d%c", &d.day, &d.month, &d.year, &tail) == 3) {
    if (d.month >= 1 && d.month <= 12 && d.day >= 1 && d.day <= 31) return d;
  }
  throw Error(Errc::kConfigError, "bad date '" + s + "', expected YYYY-MM-DD or DD/MM/YYYY");
}

std::string Date::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
  return buf;
}

std::vector<ModelSpec> builtin_models() {
  auto spec = [](std::string id, std::string display, const char* cutoff, const char* release, int order) {
    ModelSpec m;
    m.api_name = id;
    m.id = std::move(id);
    m.display_name = std::move(display);
    m.knowledge_cutoff = Date::parse(cutoff);
    m.release = Date::parse(release);
    m.release_order = order;
    return m;
  };
  std::vector<ModelSpec> models{
      spec("gpt-3.5-turbo", "GPT-3.5 Turbo", "01/09/2021", "30/11/2022", 1),
      spec("gpt-4-turbo", "GPT-4 Turbo", "01/12/2023", "09/04/2024", 2),
      spec("gpt-4o", "GPT-4o", "01/06/2024", "13/05/2024", 3),
      spec("gpt-4.1", "GPT-4.1", "01/06/2024", "15/04/2025", 4),
      spec("gpt-5", "GPT-5", "30/09/2024", "07/08/2025", 5),
      spec("gpt-5.1", "GPT-5.1", "30/09/2024", "12/11/2025", 6),
      spec("gpt-5.2", "GPT-5.2", "30/08/2025", "11/12/2025", 7),
  };
  models[4].supports_temperature_0 = false;  // the API fixes GPT-5 at temperature 1
  models[6].reasoning_none = true;
  return models;
}

ModelRegistry ModelRegistry::with_builtins() {
  ModelRegistry r;
  for (auto& m : builtin_models()) r.add(std::move(m));
  return r;
}

void ModelRegistry::add(ModelSpec spec) {
  if (!is_safe_key(spec.id)) throw Error(Errc::kConfigError, "model id '" + spec.id + "' is not a safe key");
  for (auto& existing : specs_) {
    if (existing.id == spec.id) {
      existing = std::move(spec);
      return;
    }
  }
  specs_.push_back(std::move(spec));
}

bool ModelRegistry::contains(std::string_view id) const {
  return std::any_of(specs_.begin(), specs_.end(), [&](const ModelSpec& m) { return m.id == id; });
}

const ModelSpec& ModelRegistry::get(std::string_view id) const {
  for (const auto& m : specs_) {
    if (m.id == id) return m;
  }
  throw Error(Errc::kConfigError, "unknown model '" + std::string(id) + "'");
}

std::vector<ModelSpec> ModelRegistry::in_release_order(std::span<const std::string> ids) const {
  std::vector<ModelSpec> out;
  for (const auto& id : ids) out.push_back(get(id));
  std::stable_sort(out.begin(), out.end(),
                   [](const ModelSpec& a, const ModelSpec& b) { return a.release_order < b.release_order; });
  return out;
}

void ModelRegistry::validate() const {
  auto sorted = specs_;
  std::sort(sorted.begin(), sorted.end(),
            [](const ModelSpec& a, const ModelSpec& b) { return a.release_order < b.release_order; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].release_order == sorted[i - 1].release_order) {
      throw Error(Errc::kConfigError, "models '" + sorted[i - 1].id + "' and '" + sorted[i].id +
                                          "' share release order " + std::to_string(sorted[i].release_order));
    }
    if (sorted[i].release < sorted[i - 1].release) {
      throw Error(Errc::kConfigError, "release order puts '" + sorted[i].id + "' after '" + sorted[i - 1].id +
                                          "' but it was released earlier");
    }
  }
}

// ---------------------------------------------------------------------------

std::string to_string(SourceCorpus s) { return s == SourceCorpus::kPrimary ? "primary" : "control"; }

SourceCorpus parse_source(std::string_view text) {
  if (text == "primary") return SourceCorpus::kPrimary;
  if (text == "control") return SourceCorpus::kControl;
  throw Error(Errc::kConfigError, "source must be 'primary' or 'control', got '" + std::string(text) + "'");
}

std::string ParaphraseRecord::file_name() const {
  std::string name = chapter + "_round-" + std::to_string(round);
  return name + (source == SourceCorpus::kControl ? ".control.txt" : ".txt");
}

fs::path ParaphraseRecord::directory() const { return fs::path(model) / ("t" + to_string(temperature)); }

namespace {

struct StoreDir {
  fs::path dir;
  KvDocument manifest;
};

KvDocument load_record_manifest(const fs::path& dir) {
  const fs::path path = dir / kRecordManifest;
  KvDocument doc = KvDocument::parse(read_file(path, Errc::kStoreCorrupt), path.string());
  if (!checksum_matches(doc)) throw Error(Errc::kStoreCorrupt, path.string() + ": manifest checksum mismatch");
  return doc;
}

void fill_record_section(KvSection& s, const ParaphraseRecord& r) {
  s.set("chapter", r.chapter);
  s.set("source", to_string(r.source));
  s.set("round", std::to_string(r.round));
  s.set("request_ts", r.request_ts);
  s.set("response_ts", r.response_ts);
  s.set("prompt_fingerprint", r.prompt_fingerprint);
  s.set("sha256", sha256_hex(r.text));
}

ParaphraseRecord record_from_section(const KvSection& s, const std::string& model, Temperature t,
                                     const std::string& origin) {
  ParaphraseRecord r;
  r.model = model;
  r.temperature = t;
  r.chapter = require(s, "chapter", origin);
  r.source = parse_source(require(s, "source", origin));
  r.round = parse_int(require(s, "round", origin), origin + " round");
  r.request_ts = require(s, "request_ts", origin);
  r.response_ts = require(s, "response_ts", origin);
  r.prompt_fingerprint = require(s, "prompt_fingerprint", origin);
  return r;
}

constexpr std::string_view kRecordPrefix = "record ";

// Walks every (model, temperature) directory. report(path, problem) is called
// for each inconsistency; records whose text verified are appended to out.
template <typename Report>
void scan_store(const fs::path& store, std::vector<ParaphraseRecord>& out, Report&& report) {
  if (!fs::is_directory(store)) {
    report(store, "store directory does not exist");
    return;
  }
  std::vector<fs::path> dirs;
  for (const auto& model_dir : fs::directory_iterator(store)) {
    if (!model_dir.is_directory()) continue;
    for (const auto& t_dir : fs::directory_iterator(model_dir.path())) {
      if (t_dir.is_directory() && fs::exists(t_dir.path() / kRecordManifest)) dirs.push_back(t_dir.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());

  for (const auto& dir : dirs) {
    KvDocument doc;
    try {
      doc = load_record_manifest(dir);
    } catch (const Error& e) {
      report(dir / kRecordManifest, e.what());
      continue;
    }
    const std::string origin = (dir / kRecordManifest).string();
    const KvSection* head = doc.find_section("store");
    if (!head || !head->find("format") || *head->find("format") != kRecordFormat) {
      report(dir / kRecordManifest, "missing or unknown format header");
      continue;
    }
    const std::string model = require(*head, "model", origin);
    const Temperature t = parse_temperature(require(*head, "temperature", origin));

    std::set<std::string> tracked;
    for (const auto& s : doc.sections()) {
      if (!s.name.starts_with(kRecordPrefix)) continue;
      const std::string file = s.name.substr(kRecordPrefix.size());
      tracked.insert(file);
      ParaphraseRecord r = record_from_section(s, model, t, origin);
      if (r.file_name() != file) {
        report(dir / file, "manifest entry does not match its file name");
        continue;
      }
      std::string text;
      try {
        text = read_file(dir / file, Errc::kStoreCorrupt);
      } catch (const Error&) {
        report(dir / file, "record file missing");
        continue;
      }
      if (sha256_hex(text) != require(s, "sha256", origin)) {
        report(dir / file, "record checksum mismatch");
        continue;
      }
      r.text = std::move(text);
      out.push_back(std::move(r));
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      if (name == kRecordManifest) continue;
      if (!tracked.contains(name)) report(entry.path(), "file not listed in manifest");
    }
  }
}

}  // namespace

void persist_records(std::span<const ParaphraseRecord> records, const fs::path& store) {
  std::map<fs::path, std::vector<const ParaphraseRecord*>> by_dir;
  for (const auto& r : records) {
    if (!is_safe_key(r.chapter) || !is_safe_key(r.model)) {
      throw Error(Errc::kInvalidArgument, "record key '" + r.chapter + "' / '" + r.model + "' is not file-safe");
    }
    if (r.round < 1) throw Error(Errc::kInvalidArgument, "round index must be >= 1");
    by_dir[r.directory()].push_back(&r);
  }

  for (const auto& [rel, group] : by_dir) {
    const fs::path dir = store / rel;
    fs::create_directories(dir);
    KvDocument doc;
    if (fs::exists(dir / kRecordManifest)) {
      doc = load_record_manifest(dir);
    } else {
      auto& head = doc.section("store");
      head.set("format", std::string(kRecordFormat));
      head.set("model", group.front()->model);
      head.set("temperature", to_string(group.front()->temperature));
    }

    bool changed = false;
    for (const ParaphraseRecord* r : group) {
      const std::string file = r->file_name();
      const std::string section_name = std::string(kRecordPrefix) + file;
      KvSection fresh{section_name, {}};
      fill_record_section(fresh, *r);
      if (const KvSection* existing = doc.find_section(section_name)) {
        if (existing->entries != fresh.entries) {
          throw Error(Errc::kRecordConflict, (dir / file).string() + " already holds a different record");
        }
        continue;
      }
      write_file_atomic(dir / file, r->text);
      doc.section(section_name).entries = fresh.entries;
      changed = true;
    }
    if (changed) write_file_atomic(dir / kRecordManifest, render_with_checksum(doc));
  }
}

std::vector<ParaphraseRecord> load_records(const fs::path& store) {
  std::vector<ParaphraseRecord> out;
  scan_store(store, out, [](const fs::path& path, const std::string& problem) {
    throw Error(Errc::kStoreCorrupt, path.string() + ": " + problem);
  });
  std::sort(out.begin(), out.end(), [](const ParaphraseRecord& a, const ParaphraseRecord& b) {
    return std::tie(a.model, a.temperature, a.source, a.chapter, a.round) <
           std::tie(b.model, b.temperature, b.source, b.chapter, b.round);
  });
  return out;
}

std::vector<StoreIssue> verify_store(const fs::path& store) {
  std::vector<ParaphraseRecord> records;
  std::vector<StoreIssue> issues;
  scan_store(store, records, [&](const fs::path& path, const std::string& problem) {
    issues.push_back({path, problem});
  });
  const fs::path run = manifest_path(store);
  if (fs::exists(run)) {
    try {
      RunManifest::load(run);
    } catch (const Error& e) {
      issues.push_back({run, e.what()});
    }
  }
  return issues;
}

// ---------------------------------------------------------------------------

std::string CellKey::text() const {
  return chapter + "/" + to_string(source) + "/" + model + "/t" + to_string(temperature) + "/r" +
         std::to_string(round);
}

CellKey CellKey::parse(std::string_view text) {
  auto parts = split(text, '/');
  if (parts.size() != 5 || parts[3].size() < 2 || parts[3][0] != 't' || parts[4].size() < 2 || parts[4][0] != 'r') {
    throw Error(Errc::kStoreCorrupt, "bad ledger key '" + std::string(text) + "'");
  }
  CellKey k;
  k.chapter = parts[0];
  k.source = parse_source(parts[1]);
  k.model = parts[2];
  k.temperature = parse_temperature(std::string_view(parts[3]).substr(1));
  k.round = parse_int(std::string_view(parts[4]).substr(1), "ledger round");
  return k;
}

std::string RunManifest::render() const {
  KvDocument doc;
  auto& run = doc.section("run");
  run.set("format", std::string(kRunFormat));
  run.set("dataset_checksum", dataset_checksum);
  run.set("tokenization", to_string(policy));
  run.set("l_min", std::to_string(sweep.l_min));
  run.set("l_max", std::to_string(sweep.l_max));
  std::vector<std::string> temps;
  for (auto t : sweep.temperatures) temps.push_back(to_string(t));
  run.set("temperatures", join(temps, ','));
  run.set("models", join(models, ','));

  auto& ledger_section = doc.section("ledger");
  for (const auto& [key, state] : ledger) {
    std::string value = state.status == CellStatus::kDone     ? "done"
                        : state.status == CellStatus::kFailed ? "failed"
                                                              : "skipped";
    if (!state.reason.empty()) value += ":" + state.reason;
    ledger_section.entries.emplace_back(key.text(), value);
  }
  return render_with_checksum(std::move(doc));
}

RunManifest RunManifest::parse(std::string_view text, const std::string& origin) {
  KvDocument doc = KvDocument::parse(text, origin);
  if (!checksum_matches(doc)) throw Error(Errc::kStoreCorrupt, origin + ": manifest checksum mismatch");
  const KvSection* run = doc.find_section("run");
  if (!run || !run->find("format") || *run->find("format") != kRunFormat) {
    throw Error(Errc::kStoreCorrupt, origin + ": missing or unknown run manifest format");
  }
  RunManifest m;
  m.dataset_checksum = require(*run, "dataset_checksum", origin);
  m.policy = parse_policy(require(*run, "tokenization", origin));
  m.sweep.l_min = static_cast<std::size_t>(parse_int(require(*run, "l_min", origin), "l_min"));
  m.sweep.l_max = static_cast<std::size_t>(parse_int(require(*run, "l_max", origin), "l_max"));
  m.sweep.temperatures.clear();
  const std::string& temps = require(*run, "temperatures", origin);
  if (!temps.empty()) {
    for (const auto& t : split(temps, ',')) m.sweep.temperatures.push_back(parse_temperature(t));
  }
  const std::string& models = require(*run, "models", origin);
  if (!models.empty()) m.models = split(models, ',');
  m.sweep.models = m.models;

  if (const KvSection* ledger = doc.find_section("ledger")) {
    for (const auto& [key, value] : ledger->entries) {
      CellState state;
      auto colon = value.find(':');
      std::string status = value.substr(0, colon);
      if (colon != std::string::npos) state.reason = value.substr(colon + 1);
      if (status == "done") {
        state.status = CellStatus::kDone;
      } else if (status == "failed") {
        state.status = CellStatus::kFailed;
      } else if (status == "skipped") {
        state.status = CellStatus::kSkipped;
      } else {
        throw Error(Errc::kStoreCorrupt, origin + ": bad ledger status '" + value + "'");
      }
      m.ledger[CellKey::parse(key)] = std::move(state);
    }
  }
  return m;
}

void RunManifest::save(const fs::path& path) const { write_file_atomic(path, render()); }

RunManifest RunManifest::load(const fs::path& path) {
  return parse(read_file(path, Errc::kStoreCorrupt), path.string());
}

std::size_t RunManifest::count(CellStatus status) const {
  return static_cast<std::size_t>(
      std::count_if(ledger.begin(), ledger.end(), [&](const auto& kv) { return kv.second.status == status; }));
}

fs::path manifest_path(const fs::path& store) { return store / "run.manifest"; }

// ---------------------------------------------------------------------------

WordStats describe(std::vector<std::size_t> counts) {
  WordStats s;
  s.n = counts.size();
  if (counts.empty()) return s;
  std::sort(counts.begin(), counts.end());
  s.min = counts.front();
  s.max = counts.back();
  const std::size_t mid = counts.size() / 2;
  s.median = counts.size() % 2 ? static_cast<double>(counts[mid])
                               : (static_cast<double>(counts[mid - 1]) + static_cast<double>(counts[mid])) / 2.0;
  double sum = 0.0;
  for (auto c : counts) sum += static_cast<double>(c);
  s.mean = sum / static_cast<double>(counts.size());
  return s;
}

std::vector<StatsRow> corpus_stats(std::span<const DocumentPair> pairs, std::span<const ParaphraseRecord> records,
                                   const TokenizationPolicy& policy) {
  std::vector<StatsRow> rows;
  if (!pairs.empty()) {
    std::vector<std::size_t> primary, control;
    for (const auto& p : pairs) {
      primary.push_back(p.primary_words);
      control.push_back(p.control_words);
    }
    rows.push_back({SourceCorpus::kPrimary, "", std::nullopt, "original", describe(primary)});
    rows.push_back({SourceCorpus::kControl, "", std::nullopt, "original", describe(control)});
  }

  using GroupKey = std::tuple<SourceCorpus, std::string, Temperature, int>;
  std::map<GroupKey, std::vector<std::size_t>> groups;
  for (const auto& r : records) {
    groups[{r.source, r.model, r.temperature, r.round}].push_back(word_count(r.text, policy));
  }
  for (auto& [key, counts] : groups) {
    const auto& [source, model, t, round] = key;
    rows.push_back({source, model, t, GroupLabel::paraphrase(round).name, describe(std::move(counts))});
  }
  return rows;
}

}  // namespace sprkit
