// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sprkit/temperature.hpp"

#include "sprkit/error.hpp"

namespace sprkit {

Temperature parse_temperature(std::string_view text) {
  if (text == "0" || text == "0.0") return Temperature::kZero;
  if (text == "1" || text == "1.0") return Temperature::kOne;
  throw Error(Errc::kConfigError, "temperature must be 0 or 1, got '" + std::string(text) + "'");
}

}  // namespace sprkit
