// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sprkit {

enum class Errc {
  kInvalidArgument,
  kUnknownToken,
  kCapacityExceeded,
  kUnknownDocument,
  kOccurrenceOutOfBounds,
  kEmptyCorpus,
  kMissingGroupText,
  kMissingMatrix,
  kTemperatureUnsupported,
  kBaseModelMissing,
  kSourceUnreadable,
  kDuplicateChapterKey,
  kStoreCorrupt,
  kRecordConflict,
  kEmptyText,
  kTransportError,
  kFixtureMissing,
  kCapabilitySkip,
  kNonPositiveTemperature,
  kInvalidK,
  kInvalidThreshold,
  kConfigError,
  kIoError,
};

std::string_view to_string(Errc code) noexcept;

// All library failures are reported as sprkit::Error; code() identifies the
// failure kind so callers can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace sprkit
