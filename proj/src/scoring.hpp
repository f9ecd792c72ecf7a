// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors
//
// Priority-weighted multi-objective scoring: five normalized scores in [0,1]
// folded into one comprehensive index.

#pragma once

#include <array>

namespace crowdbench {

/// Raw batch metrics. Rates are fractions, not percentages.
struct BatchMetrics {
  double sr{0.0};   // success rate
  double cr{0.0};   // collision rate
  double tr{0.0};   // timeout rate
  double at{0.0};   // mean navigation time over successes (s)
  double dr{0.0};   // discomfort rate
  double md{0.0};   // mean per-episode minimum separation (m)
  double cdr{0.0};  // mean curvature discontinuity ratio
};

struct ScoreWeights {
  double saf{0.40};
  double suc{0.25};
  double comf{0.15};
  double traj{0.12};
  double effic{0.08};
};

enum class DensityPreset { Low, High };

struct ScoringConfig {
  double tau_S{0.05};
  double beta{4.0};
  double gamma{10.0};
  double lambda_comf{0.5};
  double tau_md_min{0.5};  // m
  double t_star{8.0};      // s
  ScoreWeights weights{};

  static ScoringConfig for_preset(DensityPreset preset);
};

struct ComfortScore {
  double dn{0.0};
  double md{0.0};
  double total{0.0};
};

struct ScoreBreakdown {
  double f_saf{0.0};
  double f_suc{0.0};
  double f_comf{0.0};
  double f_traj{0.0};
  double f_effic{0.0};
  double f_comf_dn{0.0};
  double f_comf_md{0.0};
  double comprehensive{0.0};
  /// Set when no episode succeeded, so there is no average time and
  /// f_effic was forced to 0.
  bool efficiency_undefined{false};
};

double safety_score(double cr, double tau_S, double beta);
double success_score(double sr);
ComfortScore comfort_score(double dr, double md, double gamma, double lambda_comf, double tau_md_min);
double trajectory_score(double cdr, double gamma);
double efficiency_score(double at, double t_star);

/// Throws Error{InvalidWeights} unless weights are non-negative, sum to one,
/// and follow saf > suc > comf >= traj >= effic.
void validate_weights(const ScoreWeights &w);

/// Dot product of the weights with the five component scores already held in
/// `scores`; writes the result into scores.comprehensive.
void apply_weights(ScoreBreakdown &scores, const ScoreWeights &w);

ScoreBreakdown comprehensive_score(const BatchMetrics &metrics, const ScoringConfig &cfg);

}  // namespace crowdbench
