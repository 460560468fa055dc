// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sprkit/paraphrase_client.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <ctime>
#include <thread>

#include <json.hpp>

#include "sprkit/error.hpp"
#include "sprkit/hash.hpp"
#include "sprkit/keyvalue.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace sprkit {
namespace {

bool is_blank(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string timestamp_from_body(std::string_view body) {
  auto doc = json::parse(body, nullptr, false);
  if (doc.is_object() && doc.contains("created") && doc["created"].is_number_integer()) {
    return format_timestamp(std::chrono::system_clock::time_point(std::chrono::seconds(doc["created"].get<long long>())));
  }
  return format_timestamp(std::chrono::system_clock::time_point{});
}

}  // namespace

std::string render_prompt(std::string_view text) {
  if (is_blank(text)) throw Error(Errc::kEmptyText, "nothing to paraphrase");
  std::string prompt(kPromptPrefix);
  prompt += text;
  return prompt;
}

std::string prompt_fingerprint(std::string_view text) { return sha256_hex(render_prompt(text)); }

std::string fixture_name(const CellKey& key) {
  std::string material = key.model + "\n" + to_string(key.temperature) + "\n" + std::to_string(key.round) + "\n" +
                         key.chapter;
  if (key.source == SourceCorpus::kControl) material += "\ncontrol";
  return sha256_hex(material) + ".json";
}

std::string to_string(TransportMode mode) {
  switch (mode) {
    case TransportMode::kLive: return "live";
    case TransportMode::kRecord: return "record";
    case TransportMode::kReplay: return "replay";
  }
  return "?";
}

TransportMode parse_mode(std::string_view text) {
  if (text == "live") return TransportMode::kLive;
  if (text == "record") return TransportMode::kRecord;
  if (text == "replay") return TransportMode::kReplay;
  throw Error(Errc::kConfigError, "mode must be live, record or replay, got '" + std::string(text) + "'");
}

void ProviderConfig::validate(TransportMode mode) const {
  if (max_retries < 0) throw Error(Errc::kConfigError, "max_retries must be >= 0");
  if (mode != TransportMode::kReplay && gap.count() <= 0) {
    throw Error(Errc::kConfigError, "the inter-request gap must be positive outside replay mode");
  }
  if (mode != TransportMode::kReplay && endpoint.empty()) throw Error(Errc::kConfigError, "endpoint is empty");
}

bool is_transient_status(int status) { return status == 408 || status == 409 || status == 429 || status >= 500; }

HttpResponse RecordingTransport::send(const CellKey& key, const HttpRequest& request) {
  HttpResponse response = inner_.send(key, request);
  if (response.status == 200) {
    // Only the body is kept: headers carry the credential.
    const std::string name = fixture_name(key);
    write_file_atomic(dir_ / (name.substr(0, name.size() - 5) + ".request.json"), request.body);
    write_file_atomic(dir_ / name, response.body);
  }
  return response;
}

HttpResponse ReplayTransport::send(const CellKey& key, const HttpRequest&) {
  const fs::path path = dir_ / fixture_name(key);
  if (!fs::exists(path)) throw Error(Errc::kFixtureMissing, "no fixture " + path.string() + " for " + key.text());
  return {200, read_file(path, Errc::kFixtureMissing)};
}

void SystemClock::sleep_for(std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }

std::string format_timestamp(std::chrono::system_clock::time_point t) {
  using namespace std::chrono;
  const auto ms = duration_cast<milliseconds>(t.time_since_epoch()).count();
  std::time_t secs = static_cast<std::time_t>(ms / 1000);
  int millis = static_cast<int>(ms % 1000);
  if (millis < 0) {
    millis += 1000;
    --secs;
  }
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                tm.tm_hour, tm.tm_min, tm.tm_sec, millis);
  return buf;
}

std::string build_request_body(const ModelSpec& model, Temperature t, std::string_view prompt,
                               bool force_reasoning_none) {
  json body;
  body["model"] = model.api_name;
  body["messages"] = json::array({{{"role", "user"}, {"content", std::string(prompt)}}});
  // Models that reject temperature 0 reject the parameter outright.
  if (model.supports_temperature_0) body["temperature"] = to_int(t);
  if (model.reasoning_none || force_reasoning_none) body["reasoning_effort"] = "none";
  return body.dump();
}

std::string extract_content(std::string_view response_body) {
  auto doc = json::parse(response_body, nullptr, false);
  if (doc.is_discarded()) throw Error(Errc::kTransportError, "response is not JSON");
  try {
    const auto& content = doc.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw Error(Errc::kTransportError, "message content is not a string");
    return content.get<std::string>();
  } catch (const json::exception& e) {
    throw Error(Errc::kTransportError, std::string("unexpected response shape: ") + e.what());
  }
}

ParaphraseClient::ParaphraseClient(ProviderConfig config, TransportMode mode, Transport& transport, Clock& clock)
    : config_(std::move(config)), mode_(mode), transport_(transport), clock_(clock) {
  config_.validate(mode_);
}

HttpResponse ParaphraseClient::send_spaced(const CellKey& key, const HttpRequest& request) {
  if (mode_ != TransportMode::kReplay && last_send_) {
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(clock_.now() - *last_send_);
    if (elapsed < config_.gap) clock_.sleep_for(config_.gap - elapsed);
  }
  last_send_ = clock_.now();
  ++requests_;
  return transport_.send(key, request);
}

Outcome ParaphraseClient::generate_one(const DocumentPair& pair, const ModelSpec& model, Temperature t, int round,
                                       SourceCorpus source) {
  Outcome out;
  out.key = {pair.chapter, source, model.id, t, round};
  if (t == Temperature::kZero && !model.supports_temperature_0) {
    out.state = {CellStatus::kSkipped, "CapabilitySkip: temperature 0 unsupported"};
    return out;
  }

  const std::string& text = source == SourceCorpus::kPrimary ? pair.primary_text : pair.control_text;
  std::string prompt;
  try {
    prompt = render_prompt(text);
  } catch (const Error& e) {
    out.state = {CellStatus::kFailed, e.what()};
    return out;
  }

  HttpRequest request;
  request.url = config_.endpoint;
  request.timeout = config_.timeout;
  request.body = build_request_body(model, t, prompt, config_.reasoning_none);
  request.headers.emplace_back("Content-Type", "application/json");
  if (mode_ != TransportMode::kReplay) {
    const char* credential = std::getenv(config_.credential_env.c_str());
    if (!credential || !*credential) {
      out.state = {CellStatus::kFailed, "credential variable " + config_.credential_env + " is not set"};
      return out;
    }
    request.headers.emplace_back("Authorization", std::string("Bearer ") + credential);
  }

  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) clock_.sleep_for(config_.backoff * (1LL << std::min(attempt - 1, 20)));
    HttpResponse response;
    try {
      response = send_spaced(out.key, request);
    } catch (const Error& e) {
      last_error = e.what();
      if (e.code() == Errc::kTransportError) continue;
      break;
    }
    if (response.status != 200) {
      last_error = "HTTP " + std::to_string(response.status);
      if (is_transient_status(response.status)) continue;
      break;
    }
    ParaphraseRecord record;
    try {
      record.text = extract_content(response.body);
    } catch (const Error& e) {
      last_error = e.what();
      break;
    }
    record.chapter = pair.chapter;
    record.source = source;
    record.model = model.id;
    record.temperature = t;
    record.round = round;
    record.prompt_fingerprint = sha256_hex(prompt);
    if (mode_ == TransportMode::kReplay) {
      record.request_ts = record.response_ts = timestamp_from_body(response.body);
    } else {
      record.request_ts = format_timestamp(*last_send_);
      record.response_ts = format_timestamp(clock_.now());
    }
    out.state = {CellStatus::kDone, ""};
    out.record = std::move(record);
    return out;
  }
  out.state = {CellStatus::kFailed, last_error};
  return out;
}

std::vector<Outcome> ParaphraseClient::generate_round(std::span<const DocumentPair> pairs, const ModelSpec& model,
                                                      Temperature t, int round, SourceCorpus source) {
  std::vector<Outcome> outcomes;
  outcomes.reserve(pairs.size());
  for (const auto& pair : pairs) outcomes.push_back(generate_one(pair, model, t, round, source));
  return outcomes;
}

CampaignSummary run_campaign(std::span<const DocumentPair> pairs, const CampaignPlan& plan, ParaphraseClient& client,
                             RunManifest& manifest, const fs::path& store, const std::function<bool()>& should_stop) {
  CampaignSummary summary;
  const int max_rounds = std::max(plan.rounds_t0, plan.rounds_t1);
  const fs::path manifest_file = manifest_path(store);

  for (int round = 1; round <= max_rounds; ++round) {
    for (const auto& model : plan.models) {
      for (Temperature t : plan.temperatures) {
        if (round > plan.rounds_for(t)) continue;
        for (SourceCorpus source : plan.sources) {
          for (const auto& pair : pairs) {
            CellKey key{pair.chapter, source, model.id, t, round};
            auto it = manifest.ledger.find(key);
            if (it != manifest.ledger.end() && it->second.status == CellStatus::kDone) continue;
            if (should_stop && should_stop()) {
              summary.interrupted = true;
              manifest.save(manifest_file);
              return summary;
            }
            Outcome outcome = client.generate_one(pair, model, t, round, source);
            switch (outcome.state.status) {
              case CellStatus::kDone:
                persist_records(std::span(&*outcome.record, 1), store);
                ++summary.requested;
                ++summary.done;
                break;
              case CellStatus::kFailed:
                ++summary.requested;
                ++summary.failed;
                break;
              case CellStatus::kSkipped:
                ++summary.skipped;
                break;
            }
            manifest.ledger[key] = outcome.state;
            manifest.save(manifest_file);
          }
        }
      }
    }
  }
  return summary;
}

}  // namespace sprkit
