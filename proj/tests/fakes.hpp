// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <deque>
#include <string>
#include <vector>

#include <json.hpp>

#include "sprkit/error.hpp"
#include "sprkit/paraphrase_client.hpp"

namespace sprkit::testing {

class FakeClock final : public Clock {
 public:
  std::chrono::system_clock::time_point now() override { return t_; }
  void sleep_for(std::chrono::milliseconds d) override {
    t_ += d;
    slept_ += d;
  }
  std::chrono::milliseconds slept() const { return slept_; }
  void advance(std::chrono::milliseconds d) { t_ += d; }

 private:
  std::chrono::system_clock::time_point t_{std::chrono::seconds(1'767'225'600)};
  std::chrono::milliseconds slept_{0};
};

inline std::string chat_response(const std::string& content) {
  return nlohmann::json{{"created", 1'767'225'600},
              {"choices", nlohmann::json::array({{{"index", 0}, {"message", {{"role", "assistant"}, {"content", content}}}}})}}
      .dump();
}

// Answers every request with a paraphrase naming the cell, after replaying
// any queued failures. Each send also costs `latency` on the clock.
class FakeTransport final : public Transport {
 public:
  struct Sent {
    CellKey key;
    std::chrono::system_clock::time_point at;
    HttpRequest request;
  };

  explicit FakeTransport(FakeClock& clock, std::chrono::milliseconds latency = std::chrono::milliseconds(250))
      : clock_(clock), latency_(latency) {}

  HttpResponse send(const CellKey& key, const HttpRequest& request) override {
    sent.push_back({key, clock_.now(), request});
    clock_.advance(latency_);
    if (always_fail) return {503, "unavailable"};
    if (!failures.empty()) {
      int status = failures.front();
      failures.pop_front();
      if (status < 0) throw Error(Errc::kTransportError, "connection reset");
      return {status, "error"};
    }
    return {200, chat_response("paraphrase of " + key.text())};
  }

  std::vector<Sent> sent;
  std::deque<int> failures;  // negative values throw a transport error
  bool always_fail = false;

 private:
  FakeClock& clock_;
  std::chrono::milliseconds latency_;
};

}  // namespace sprkit::testing
