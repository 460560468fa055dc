// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sprkit/corpus.hpp"
#include "sprkit/temperature.hpp"

namespace sprkit {

inline constexpr std::string_view kPromptPrefix =
    "Answer ONLY the question, no extra context. Please paraphrase the following text: ";

/// Prefix followed by text, verbatim. Throws EmptyText for blank input.
std::string render_prompt(std::string_view text);

/// SHA-256 of the rendered prompt for text.
std::string prompt_fingerprint(std::string_view text);

/// Name of the replay fixture for a request: SHA-256 over model, temperature,
/// round and chapter (plus the source when it is the control corpus), ".json".
std::string fixture_name(const CellKey& key);

enum class TransportMode { kLive, kRecord, kReplay };
std::string to_string(TransportMode mode);
TransportMode parse_mode(std::string_view text);

struct ProviderConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string credential_env = "OPENAI_API_KEY";
  std::chrono::milliseconds timeout{120'000};
  int max_retries = 3;
  std::chrono::milliseconds gap{30'000};     // between consecutive requests
  std::chrono::milliseconds backoff{1'000};  // doubled on every retry
  bool reasoning_none = false;               // force reasoning_effort=none for every model

  void validate(TransportMode mode) const;
};

struct HttpRequest {
  std::string url;
  std::string body;
  std::vector<std::pair<std::string, std::string>> headers;
  std::chrono::milliseconds timeout{0};
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Status codes worth retrying: 408, 409, 429 and 5xx.
bool is_transient_status(int status);

// Sends one chat-completion request. Implementations throw
// Error(kTransportError) for connection-level failures, which are retried,
// and Error(kFixtureMissing) when a replay fixture is absent.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse send(const CellKey& key, const HttpRequest& request) = 0;
};

/// HTTPS via cpp-httplib.
class HttpTransport final : public Transport {
 public:
  HttpResponse send(const CellKey& key, const HttpRequest& request) override;
};

/// Forwards to inner and stores every successful response body as a fixture,
/// with the request body beside it as <name>.request.json.
class RecordingTransport final : public Transport {
 public:
  RecordingTransport(Transport& inner, std::filesystem::path fixture_dir)
      : inner_(inner), dir_(std::move(fixture_dir)) {}
  HttpResponse send(const CellKey& key, const HttpRequest& request) override;

 private:
  Transport& inner_;
  std::filesystem::path dir_;
};

/// Serves stored fixtures; never touches the network.
class ReplayTransport final : public Transport {
 public:
  explicit ReplayTransport(std::filesystem::path fixture_dir) : dir_(std::move(fixture_dir)) {}
  HttpResponse send(const CellKey& key, const HttpRequest& request) override;

 private:
  std::filesystem::path dir_;
};

class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::chrono::system_clock::time_point now() = 0;
  virtual void sleep_for(std::chrono::milliseconds d) = 0;
};

class SystemClock final : public Clock {
 public:
  std::chrono::system_clock::time_point now() override { return std::chrono::system_clock::now(); }
  void sleep_for(std::chrono::milliseconds d) override;
};

/// ISO-8601 UTC with millisecond precision, e.g. 2026-01-02T03:04:05.678Z.
std::string format_timestamp(std::chrono::system_clock::time_point t);

/// The OpenAI chat-completions body for one request.
std::string build_request_body(const ModelSpec& model, Temperature t, std::string_view prompt,
                               bool force_reasoning_none = false);

/// choices[0].message.content of a chat-completions response.
std::string extract_content(std::string_view response_body);

struct Outcome {
  CellKey key;
  CellState state;
  std::optional<ParaphraseRecord> record;
};

class ParaphraseClient {
 public:
  ParaphraseClient(ProviderConfig config, TransportMode mode, Transport& transport, Clock& clock);

  /// One request (with retries) for one document. Never throws for per-cell
  /// failures; they come back as failed or skipped outcomes.
  Outcome generate_one(const DocumentPair& pair, const ModelSpec& model, Temperature t, int round,
                       SourceCorpus source = SourceCorpus::kPrimary);

  /// One paraphrase per document, requested sequentially in pair order.
  std::vector<Outcome> generate_round(std::span<const DocumentPair> pairs, const ModelSpec& model, Temperature t,
                                      int round, SourceCorpus source = SourceCorpus::kPrimary);

  std::size_t requests_sent() const noexcept { return requests_; }

 private:
  HttpResponse send_spaced(const CellKey& key, const HttpRequest& request);

  ProviderConfig config_;
  TransportMode mode_;
  Transport& transport_;
  Clock& clock_;
  std::optional<std::chrono::system_clock::time_point> last_send_;
  std::size_t requests_ = 0;
};

struct CampaignPlan {
  std::vector<ModelSpec> models;  // release order
  std::vector<Temperature> temperatures{Temperature::kZero, Temperature::kOne};
  int rounds_t0 = 3;
  int rounds_t1 = 5;
  std::vector<SourceCorpus> sources{SourceCorpus::kPrimary};

  int rounds_for(Temperature t) const { return t == Temperature::kZero ? rounds_t0 : rounds_t1; }
};

struct CampaignSummary {
  std::size_t requested = 0;  // cells attempted in this run
  std::size_t done = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
  bool interrupted = false;
};

/// Rounds run outermost: every round-k request of a (model, temperature)
/// finishes before its first round-(k+1) request. Cells already marked done in
/// the manifest are not requested again. Records and the manifest are written
/// to store after every cell. should_stop, when set, is polled before each
/// cell and ends the run early.
CampaignSummary run_campaign(std::span<const DocumentPair> pairs, const CampaignPlan& plan, ParaphraseClient& client,
                             RunManifest& manifest, const std::filesystem::path& store,
                             const std::function<bool()>& should_stop = {});

}  // namespace sprkit
