// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors

#include "scoring.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace crowdbench {

ScoringConfig ScoringConfig::for_preset(DensityPreset preset) {
  ScoringConfig cfg;
  cfg.tau_S = preset == DensityPreset::Low ? 0.05 : 0.1;
  return cfg;
}

double safety_score(double cr, double tau_S, double beta) {
  return 1.0 / (1.0 + std::pow(cr / tau_S, beta));
}

double success_score(double sr) { return sr; }

ComfortScore comfort_score(double dr, double md, double gamma, double lambda_comf,
                           double tau_md_min) {
  ComfortScore c;
  c.dn = std::pow(1.0 - dr, gamma);
  c.md = std::clamp(md / tau_md_min, 0.0, 1.0);
  c.total = lambda_comf * c.dn + (1.0 - lambda_comf) * c.md;
  return c;
}

double trajectory_score(double cdr, double gamma) { return std::pow(1.0 - cdr, gamma); }

double efficiency_score(double at, double t_star) { return std::min(1.0, t_star / at); }

void validate_weights(const ScoreWeights &w) {
  const std::array<double, 5> all{w.saf, w.suc, w.comf, w.traj, w.effic};
  std::ostringstream why;
  for (double v : all) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      why << "weights must be finite and non-negative";
      throw Error(ErrorCode::InvalidWeights, why.str());
    }
  }
  const double sum = w.saf + w.suc + w.comf + w.traj + w.effic;
  if (std::abs(sum - 1.0) > 1e-9) {
    why << "weights must sum to 1, got " << sum;
    throw Error(ErrorCode::InvalidWeights, why.str());
  }
  if (!(w.saf > w.suc && w.suc > w.comf && w.comf >= w.traj && w.traj >= w.effic)) {
    why << "weights must satisfy saf > suc > comf >= traj >= effic";
    throw Error(ErrorCode::InvalidWeights, why.str());
  }
}

void apply_weights(ScoreBreakdown &s, const ScoreWeights &w) {
  s.comprehensive = w.saf * s.f_saf + w.suc * s.f_suc + w.comf * s.f_comf + w.traj * s.f_traj +
                    w.effic * s.f_effic;
}

namespace {

void require_fraction(double v, const char *name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream os;
    os << name << " must be a fraction in [0,1], got " << v;
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
}

void validate_config(const ScoringConfig &cfg) {
  auto positive = [](double v, const char *name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be positive");
    }
  };
  positive(cfg.tau_S, "tau_S");
  positive(cfg.beta, "beta");
  positive(cfg.gamma, "gamma");
  positive(cfg.tau_md_min, "tau_md_min");
  positive(cfg.t_star, "t_star");
  require_fraction(cfg.lambda_comf, "lambda_comf");
}

}  // namespace

ScoreBreakdown comprehensive_score(const BatchMetrics &m, const ScoringConfig &cfg) {
  validate_weights(cfg.weights);
  validate_config(cfg);
  require_fraction(m.sr, "sr");
  require_fraction(m.cr, "cr");
  require_fraction(m.tr, "tr");
  require_fraction(m.dr, "dr");
  require_fraction(m.cdr, "cdr");
  // md is +inf for batches without humans; only NaN is rejected.
  if (std::isnan(m.md) || std::isnan(m.at)) {
    throw Error(ErrorCode::InvalidArgument, "md and at must not be NaN");
  }

  ScoreBreakdown s;
  s.f_saf = safety_score(m.cr, cfg.tau_S, cfg.beta);
  s.f_suc = success_score(m.sr);
  const ComfortScore comfort = comfort_score(m.dr, m.md, cfg.gamma, cfg.lambda_comf, cfg.tau_md_min);
  s.f_comf_dn = comfort.dn;
  s.f_comf_md = comfort.md;
  s.f_comf = comfort.total;
  s.f_traj = trajectory_score(m.cdr, cfg.gamma);
  if (m.sr > 0.0 && m.at > 0.0) {
    s.f_effic = efficiency_score(m.at, cfg.t_star);
  } else {
    s.f_effic = 0.0;
    s.efficiency_undefined = true;
  }
  apply_weights(s, cfg.weights);
  return s;
}

}  // namespace crowdbench
