// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace sprkit {

// Sampling temperatures a campaign may request. Values above one yield
// unusable text and are not supported.
enum class Temperature : int { kZero = 0, kOne = 1 };

inline int to_int(Temperature t) noexcept { return static_cast<int>(t); }
inline std::string to_string(Temperature t) { return t == Temperature::kZero ? "0" : "1"; }

/// Accepts "0", "1", "0.0", "1.0"; throws Error(kConfigError) otherwise.
Temperature parse_temperature(std::string_view text);

}  // namespace sprkit
