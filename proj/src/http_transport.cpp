// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "sprkit/error.hpp"
#include "sprkit/paraphrase_client.hpp"

namespace sprkit {

HttpResponse HttpTransport::send(const CellKey&, const HttpRequest& request) {
  const auto scheme_end = request.url.find("://");
  if (scheme_end == std::string::npos) throw Error(Errc::kConfigError, "endpoint lacks a scheme: " + request.url);
  const auto path_start = request.url.find('/', scheme_end + 3);
  const std::string origin = request.url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : request.url.substr(path_start);

  httplib::Client client(origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(request.timeout).count();
  client.set_connection_timeout(secs > 0 ? secs : 30);
  client.set_read_timeout(secs > 0 ? secs : 120);

  httplib::Headers headers;
  std::string content_type = "application/json";
  for (const auto& [k, v] : request.headers) {
    if (k == "Content-Type") {
      content_type = v;
    } else {
      headers.emplace(k, v);
    }
  }
  auto result = client.Post(path, headers, request.body, content_type);
  if (!result) throw Error(Errc::kTransportError, "request failed: " + httplib::to_string(result.error()));
  return {result->status, result->body};
}

}  // namespace sprkit
