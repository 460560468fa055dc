// Copyright 2026 The sprkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sprkit/sampler_ref.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "sprkit/error.hpp"

namespace sprkit::sampling {
namespace {

// Neumaier compensated sum.
double stable_sum(std::span<const double> values) {
  double sum = 0.0, comp = 0.0;
  for (double v : values) {
    double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

void check_probs(const ProbVector& p) {
  if (p.p.empty()) throw Error(Errc::kInvalidArgument, "empty probability vector");
  if (p.indices.size() != p.p.size()) throw Error(Errc::kInvalidArgument, "probability/index size mismatch");
  for (double v : p.p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(Errc::kInvalidArgument, "probabilities must be finite and >= 0");
  }
}

std::vector<std::size_t> descending_order(const ProbVector& p) {
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p.p[a] > p.p[b]; });
  return order;
}

// keep holds positions into p; output keeps p's relative order.
ProbVector renormalized(const ProbVector& p, std::vector<std::size_t> keep) {
  std::sort(keep.begin(), keep.end());
  ProbVector out;
  for (std::size_t i : keep) {
    out.p.push_back(p.p[i]);
    out.indices.push_back(p.indices[i]);
  }
  const double mass = stable_sum(out.p);
  if (!(mass > 0.0)) throw Error(Errc::kInvalidArgument, "retained probability mass is zero");
  const double scale = 1.0 / mass;
  for (double& v : out.p) v *= scale;
  return out;
}

}  // namespace

void SamplingConfig::validate() const {
  if (!(temperature > 0.0)) throw Error(Errc::kNonPositiveTemperature, std::to_string(temperature));
  if (top_k.has_value() == top_p.has_value()) {
    throw Error(Errc::kInvalidArgument, "exactly one of top_k and top_p must be set");
  }
}

ProbVector temperature_softmax(std::span<const double> logits, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(Errc::kNonPositiveTemperature, "temperature must be a positive finite number, got " +
                                                   std::to_string(temperature));
  }
  if (logits.empty()) throw Error(Errc::kInvalidArgument, "empty logit vector");
  for (double z : logits) {
    if (!std::isfinite(z)) throw Error(Errc::kInvalidArgument, "logits must be finite");
  }
  const double zmax = *std::max_element(logits.begin(), logits.end());
  ProbVector out;
  out.p.reserve(logits.size());
  for (double z : logits) out.p.push_back(std::exp((z - zmax) / temperature));
  const double scale = 1.0 / stable_sum(out.p);
  for (double& v : out.p) v *= scale;
  out.indices.resize(logits.size());
  std::iota(out.indices.begin(), out.indices.end(), std::size_t{0});
  return out;
}

ProbVector top_k_filter(const ProbVector& p, std::size_t k) {
  check_probs(p);
  if (k < 1 || k > p.size()) {
    throw Error(Errc::kInvalidK, "k=" + std::to_string(k) + " outside [1, " + std::to_string(p.size()) + "]");
  }
  auto order = descending_order(p);
  order.resize(k);
  return renormalized(p, std::move(order));
}

ProbVector top_p_filter(const ProbVector& p, double threshold) {
  check_probs(p);
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(Errc::kInvalidThreshold, "threshold " + std::to_string(threshold) + " outside (0, 1]");
  }
  auto order = descending_order(p);
  std::vector<std::size_t> keep;
  double cumulative = 0.0;
  for (std::size_t i : order) {
    keep.push_back(i);
    cumulative += p.p[i];
    if (cumulative >= threshold) break;
  }
  return renormalized(p, std::move(keep));
}

std::size_t sample_next(const ProbVector& p, std::uint64_t seed) {
  check_probs(p);
  std::mt19937_64 rng(seed);
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.p[i] <= 0.0) continue;
    last_positive = i;
    cumulative += p.p[i];
    if (u < cumulative) return p.indices[i];
  }
  return p.indices[last_positive];
}

std::size_t sample(std::span<const double> logits, const SamplingConfig& config, std::uint64_t seed) {
  config.validate();
  auto probs = temperature_softmax(logits, config.temperature);
  probs = config.top_k ? top_k_filter(probs, *config.top_k) : top_p_filter(probs, *config.top_p);
  return sample_next(probs, seed);
}

}  // namespace sprkit::sampling
