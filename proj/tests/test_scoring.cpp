// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "errors.hpp"
#include "scoring.hpp"

namespace crowdbench {
namespace {

TEST(Safety, AnchorsExact) {
  EXPECT_EQ(safety_score(0.0, 0.05, 4.0), 1.0);
  EXPECT_EQ(safety_score(0.05, 0.05, 4.0), 0.5);
  EXPECT_EQ(safety_score(0.1, 0.1, 4.0), 0.5);
  EXPECT_EQ(safety_score(0.0, 0.1, 2.5), 1.0);
}

TEST(Safety, ClosedForm) {
  EXPECT_NEAR(safety_score(0.10, 0.05, 4.0), 1.0 / 17.0, 1e-15);
  // (0.043 / 0.05)^4 = 0.86^4
  EXPECT_NEAR(safety_score(0.043, 0.05, 4.0), 1.0 / (1.0 + 0.54700816), 1e-12);
  EXPECT_NEAR(safety_score(0.043, 0.05, 4.0), 0.6464, 5e-5);
}

TEST(Success, Identity) {
  EXPECT_EQ(success_score(0.0), 0.0);
  EXPECT_EQ(success_score(0.902), 0.902);
  EXPECT_EQ(success_score(1.0), 1.0);
}

TEST(Comfort, Examples) {
  const auto one = comfort_score(0.0, 0.5, 10.0, 0.5, 0.5);
  EXPECT_EQ(one.dn, 1.0);
  EXPECT_EQ(one.md, 1.0);
  EXPECT_EQ(one.total, 1.0);

  const auto sfm = comfort_score(0.00796, 0.415, 10.0, 0.5, 0.5);
  EXPECT_NEAR(sfm.total, 0.8766, 5e-5);
  EXPECT_NEAR(sfm.total, 0.877, 0.002);

  const auto c = comfort_score(0.05, 0.25, 10.0, 0.5, 0.5);
  EXPECT_NEAR(c.dn, 0.59874, 5e-6);
  EXPECT_EQ(c.md, 0.5);
  EXPECT_NEAR(c.total, 0.54937, 5e-6);
}

TEST(Comfort, MinDistanceClipped) {
  EXPECT_EQ(comfort_score(0.0, -0.2, 10.0, 0.5, 0.5).md, 0.0);
  EXPECT_EQ(comfort_score(0.0, 3.0, 10.0, 0.5, 0.5).md, 1.0);
}

TEST(Trajectory, Examples) {
  EXPECT_EQ(trajectory_score(0.0, 10.0), 1.0);
  EXPECT_EQ(trajectory_score(1.0, 10.0), 0.0);
  EXPECT_NEAR(trajectory_score(0.01765, 10.0), 0.8369, 5e-5);
  EXPECT_NEAR(trajectory_score(0.01765, 10.0), 0.837, 0.001);
}

TEST(Efficiency, Examples) {
  EXPECT_EQ(efficiency_score(8.0, 8.0), 1.0);
  EXPECT_NEAR(efficiency_score(13.686, 8.0), 0.5845, 5e-5);
  EXPECT_NEAR(efficiency_score(13.686, 8.0), 0.585, 0.001);
  EXPECT_EQ(efficiency_score(5.0, 8.0), 1.0);
}

ScoringConfig low_cfg() { return ScoringConfig::for_preset(DensityPreset::Low); }

TEST(Comprehensive, SfmLowDensityRow) {
  const BatchMetrics m{0.598, 0.014, 0.388, 31.88, 0.00796, 0.415, 0.025};
  const auto s = comprehensive_score(m, low_cfg());
  // Hand evaluation of each term:
  //   F_saf = 1/(1+(0.28)^4) = 0.993891, F_suc = 0.598,
  //   F_comf = 0.5*0.923192 + 0.5*0.83 = 0.876596,
  //   F_traj = 0.975^10 = 0.776330, F_effic = 8/31.88 = 0.250941.
  EXPECT_NEAR(s.f_saf, 0.993891, 1e-6);
  EXPECT_NEAR(s.f_comf, 0.876596, 1e-6);
  EXPECT_NEAR(s.f_traj, 0.776330, 1e-6);
  EXPECT_NEAR(s.f_effic, 0.250941, 1e-6);
  EXPECT_NEAR(s.comprehensive, 0.79178, 1e-5);
  EXPECT_NEAR(s.comprehensive, 0.791, 0.002);
}

TEST(Comprehensive, PrecomputedSubScores) {
  ScoreBreakdown s;
  s.f_saf = 0.516;
  s.f_suc = 0.902;
  s.f_comf = 0.606;
  s.f_traj = 0.919;
  s.f_effic = 0.596;
  apply_weights(s, ScoreWeights{});
  EXPECT_NEAR(s.comprehensive, 0.40 * 0.516 + 0.25 * 0.902 + 0.15 * 0.606 + 0.12 * 0.919 + 0.08 * 0.596, 1e-12);
  EXPECT_NEAR(s.comprehensive, 0.681, 0.001);
}

TEST(Comprehensive, AllOnes) {
  const BatchMetrics m{1.0, 0.0, 0.0, 8.0, 0.0, 0.5, 0.0};
  EXPECT_NEAR(comprehensive_score(m, low_cfg()).comprehensive, 1.0, 1e-12);
}

TEST(Comprehensive, NoSuccessFlagsEfficiency) {
  const BatchMetrics m{0.0, 0.5, 0.5, 0.0, 0.1, 0.2, 0.1};
  const auto s = comprehensive_score(m, low_cfg());
  EXPECT_TRUE(s.efficiency_undefined);
  EXPECT_EQ(s.f_effic, 0.0);
  EXPECT_FALSE(comprehensive_score(BatchMetrics{0.5, 0.5, 0.0, 9.0, 0, 0, 0}, low_cfg()).efficiency_undefined);
}

TEST(Comprehensive, PresetDefaults) {
  EXPECT_EQ(ScoringConfig::for_preset(DensityPreset::Low).tau_S, 0.05);
  EXPECT_EQ(ScoringConfig::for_preset(DensityPreset::High).tau_S, 0.1);
  const auto c = low_cfg();
  EXPECT_EQ(c.beta, 4.0);
  EXPECT_EQ(c.gamma, 10.0);
  EXPECT_EQ(c.lambda_comf, 0.5);
  EXPECT_EQ(c.tau_md_min, 0.5);
  EXPECT_EQ(c.t_star, 8.0);
}

TEST(Weights, Validation) {
  EXPECT_NO_THROW(validate_weights(ScoreWeights{}));
  EXPECT_NO_THROW(validate_weights(ScoreWeights{0.4, 0.3, 0.1, 0.1, 0.1}));
  const ScoreWeights bad[] = {
      {0.40, 0.25, 0.15, 0.12, 0.09},  // sum
      {0.25, 0.40, 0.15, 0.12, 0.08},  // saf <= suc
      {0.40, 0.15, 0.25, 0.12, 0.08},  // suc <= comf
      {0.40, 0.25, 0.12, 0.15, 0.08},  // comf < traj
      {0.40, 0.25, 0.15, 0.08, 0.12},  // traj < effic
      {0.60, 0.45, 0.0, 0.0, -0.05},   // negative
  };
  for (const auto &w : bad) {
    try {
      validate_weights(w);
      ADD_FAILURE() << "accepted " << w.saf << "," << w.suc << "," << w.comf << "," << w.traj << "," << w.effic;
    } catch (const Error &e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidWeights);
    }
  }
  ScoringConfig cfg;
  cfg.weights = bad[0];
  EXPECT_THROW(comprehensive_score(BatchMetrics{1, 0, 0, 8, 0, 0.5, 0}, cfg), Error);
}

BatchMetrics random_metrics(std::mt19937_64 &gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BatchMetrics m;
  m.sr = u(gen);
  m.cr = (1.0 - m.sr) * u(gen);
  m.tr = 1.0 - m.sr - m.cr;
  m.at = 4.0 + 30.0 * u(gen);
  m.dr = u(gen);
  m.md = -0.2 + u(gen);
  m.cdr = u(gen);
  return m;
}

TEST(Properties, RangeAndDotProduct) {
  std::mt19937_64 gen(3);
  for (int i = 0; i < 10000; ++i) {
    const auto m = random_metrics(gen);
    const auto cfg = ScoringConfig::for_preset(i % 2 ? DensityPreset::High : DensityPreset::Low);
    const auto s = comprehensive_score(m, cfg);
    for (double v : {s.f_saf, s.f_suc, s.f_comf, s.f_traj, s.f_effic, s.f_comf_dn, s.f_comf_md, s.comprehensive}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    const auto &w = cfg.weights;
    const double dot = w.saf * s.f_saf + w.suc * s.f_suc + w.comf * s.f_comf + w.traj * s.f_traj + w.effic * s.f_effic;
    EXPECT_NEAR(s.comprehensive, dot, 1e-12);
  }
}

TEST(Properties, Monotonicity) {
  for (int i = 0; i < 999; ++i) {
    const double a = i / 1000.0, b = (i + 1) / 1000.0;
    EXPECT_GT(safety_score(a, 0.05, 4.0), safety_score(b, 0.05, 4.0));
    EXPECT_LT(success_score(a), success_score(b));
    EXPECT_GT(comfort_score(a, 0.3, 10.0, 0.5, 0.5).dn, comfort_score(b, 0.3, 10.0, 0.5, 0.5).dn);
    EXPECT_LE(comfort_score(0.1, a, 10.0, 0.5, 0.5).md, comfort_score(0.1, b, 10.0, 0.5, 0.5).md);
    EXPECT_GT(trajectory_score(a, 10.0), trajectory_score(b, 10.0));
    EXPECT_GE(efficiency_score(1.0 + 40 * a, 8.0), efficiency_score(1.0 + 40 * b, 8.0));
  }
  // Raising any one component score never lowers the index.
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    ScoreBreakdown s{u(gen), u(gen), u(gen), u(gen), u(gen)};
    apply_weights(s, ScoreWeights{});
    for (double ScoreBreakdown::*f : {&ScoreBreakdown::f_saf, &ScoreBreakdown::f_suc, &ScoreBreakdown::f_comf,
                                      &ScoreBreakdown::f_traj, &ScoreBreakdown::f_effic}) {
      ScoreBreakdown t = s;
      t.*f = std::min(1.0, t.*f + 0.1 * u(gen));
      apply_weights(t, ScoreWeights{});
      EXPECT_GE(t.comprehensive, s.comprehensive);
    }
  }
}

}  // namespace
}  // namespace crowdbench
