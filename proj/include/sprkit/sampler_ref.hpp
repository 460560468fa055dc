// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sprkit::sampling {

// Reference implementation of temperature scaling and candidate truncation
// as applied to next-token logits. Not tuned for vocabulary-sized inputs.

/// Probabilities over candidates. indices maps each entry back to its
/// position in the unfiltered vector; it is the identity after softmax.
struct ProbVector {
  std::vector<double> p;
  std::vector<std::size_t> indices;

  std::size_t size() const noexcept { return p.size(); }
};

struct SamplingConfig {
  double temperature = 1.0;
  std::optional<std::size_t> top_k;
  std::optional<double> top_p;

  /// Throws unless temperature > 0 and exactly one of top_k / top_p is set.
  void validate() const;
};

/// p_i = exp(z_i / T) / sum_j exp(z_j / T), computed after subtracting max(z).
ProbVector temperature_softmax(std::span<const double> logits, double temperature);

/// Keeps the k largest entries (lower index wins ties) and rescales them to sum to 1.
ProbVector top_k_filter(const ProbVector& p, std::size_t k);

/// Keeps the shortest descending prefix whose cumulative mass reaches threshold.
ProbVector top_p_filter(const ProbVector& p, double threshold);

/// Inverse-CDF draw from a mt19937_64 seeded with seed. Returns an index into
/// the unfiltered vector.
std::size_t sample_next(const ProbVector& p, std::uint64_t seed);

/// Temperature, then the configured filter, then a seeded draw.
std::size_t sample(std::span<const double> logits, const SamplingConfig& config, std::uint64_t seed);

}  // namespace sprkit::sampling
