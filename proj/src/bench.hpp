// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors
//
// Seeded batch evaluation: episodes, per-seed and pooled metrics, scores.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "policies.hpp"
#include "scoring.hpp"
#include "trajmetric.hpp"
#include "world.hpp"

namespace crowdbench {

struct RunSpec {
  ScenarioConfig scenario{};
  PolicySpec policy{};
  std::size_t episodes_per_seed{500};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  ScoringConfig scoring{};
  SmoothnessConfig smoothness{};
  /// Keep per-step positions and rewards (needed for logs and plots).
  bool record_steps{false};

  void validate() const;
};

enum class Outcome { Success, Collision, Timeout, ProtocolFailure };

const char *outcome_name(Outcome o);

struct StepLog {
  double t{0.0};
  Point2 robot;
  std::vector<Point2> humans;
  double r_base{0.0};
  double r_shape{0.0};
  double d{0.0};
};

struct EpisodeRecord {
  std::uint64_t seed{0};
  std::size_t index{0};
  /// Position of this episode in the whole batch (seed-major).
  std::size_t ep{0};
  Outcome outcome{Outcome::Timeout};
  double nav_time{0.0};
  Trajectory trajectory;
  double min_sep{0.0};
  std::size_t discomfort_steps{0};
  std::size_t total_steps{0};
  std::optional<double> cdr;
  double return_base{0.0};
  double return_shaping{0.0};
  std::string failure;
  std::vector<StepLog> steps;
};

struct SeedReport {
  std::uint64_t seed{0};
  std::size_t episodes{0};
  std::size_t excluded{0};
  BatchMetrics metrics;
  ScoreBreakdown scores;
};

struct AggregateReport {
  std::vector<SeedReport> per_seed;
  /// Metrics over all usable episodes taken together.
  BatchMetrics pooled;
  /// Mean of the per-seed metrics; `scores` is computed from this. M_at and
  /// M_cdr average only the seeds where they are defined.
  BatchMetrics seed_mean;
  ScoreBreakdown scores;
  /// Sample standard deviation across seeds (0 with a single seed).
  BatchMetrics stddev_metrics;
  ScoreBreakdown stddev_scores;
  /// Mean of the per-seed score breakdowns, for comparison with `scores`.
  ScoreBreakdown mean_seed_scores;
  std::size_t episodes{0};
  std::size_t excluded_episodes{0};
  std::size_t cdr_undefined_episodes{0};
};

/// One episode with world seed episode_seed(seed, index). `ep` is stored in
/// the record verbatim. ExternalPolicyFailure propagates.
EpisodeRecord run_episode(const RunSpec &spec, std::uint64_t seed, std::size_t index,
                          std::size_t ep = 0);

/// Metrics of one group of records; order-independent.
BatchMetrics batch_metrics(const std::vector<const EpisodeRecord *> &records,
                           std::size_t *cdr_undefined = nullptr);

/// Throws Error{EmptyBatch} when no usable record remains.
AggregateReport aggregate(const std::vector<EpisodeRecord> &records, const ScoringConfig &scoring);

struct BatchResult {
  std::vector<EpisodeRecord> records;  // sorted by ep
  AggregateReport report;
};

/// workers == 0 selects std::thread::hardware_concurrency().
BatchResult run_batch(const RunSpec &spec, unsigned workers = 0);

}  // namespace crowdbench
