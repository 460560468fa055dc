// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sprkit/error.hpp"

namespace sprkit {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kUnknownToken: return "UnknownToken";
    case Errc::kCapacityExceeded: return "CapacityExceeded";
    case Errc::kUnknownDocument: return "UnknownDocument";
    case Errc::kOccurrenceOutOfBounds: return "OccurrenceOutOfBounds";
    case Errc::kEmptyCorpus: return "EmptyCorpus";
    case Errc::kMissingGroupText: return "MissingGroupText";
    case Errc::kMissingMatrix: return "MissingMatrix";
    case Errc::kTemperatureUnsupported: return "TemperatureUnsupported";
    case Errc::kBaseModelMissing: return "BaseModelMissing";
    case Errc::kSourceUnreadable: return "SourceUnreadable";
    case Errc::kDuplicateChapterKey: return "DuplicateChapterKey";
    case Errc::kStoreCorrupt: return "StoreCorrupt";
    case Errc::kRecordConflict: return "RecordConflict";
    case Errc::kEmptyText: return "EmptyText";
    case Errc::kTransportError: return "TransportError";
    case Errc::kFixtureMissing: return "FixtureMissing";
    case Errc::kCapabilitySkip: return "CapabilitySkip";
    case Errc::kNonPositiveTemperature: return "NonPositiveTemperature";
    case Errc::kInvalidK: return "InvalidK";
    case Errc::kInvalidThreshold: return "InvalidThreshold";
    case Errc::kConfigError: return "ConfigError";
    case Errc::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace sprkit
