// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors
//
// Discrete curvature of sampled 2D paths and the curvature-discontinuity
// ratio built on top of it.

#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace crowdbench {

struct Trajectory {
  std::vector<Point2> points;
  double dt{0.25};  // seconds per sample
};

struct CurvatureWindow {
  double kappa1{0.0};
  double kappa2{0.0};
  double delta{0.0};
  bool degenerate{false};
};

/// Threshold on |kappa2 - kappa1| above which a four-point window counts as
/// a curvature break. The default ln 2 coincides with the reward-shaping
/// trigger 1 - exp(-|dk|) > 0.5.
inline const double kDefaultCurvatureThreshold = std::log(2.0);

struct SmoothnessConfig {
  double tau{kDefaultCurvatureThreshold};  // 1/m
  double eps_len{1e-6};                    // m
};

struct CurvatureSample {
  double kappa{0.0};
  bool degenerate{false};
};

/// Circumcircle curvature through three points, with the degeneracy flag set
/// when any pairwise distance falls below eps_len (kappa is then 0).
CurvatureSample circumcircle_curvature_checked(const Point2 &p1, const Point2 &p2,
                                               const Point2 &p3, double eps_len);

/// kappa = 2|cross| / (d12 d23 d13); 0 for degenerate triples.
double circumcircle_curvature(const Point2 &p1, const Point2 &p2, const Point2 &p3,
                              double eps_len = 1e-6);

/// One window per four consecutive points (N - 3 in total).
/// Throws Error{InsufficientPoints} when fewer than four points are given.
std::vector<CurvatureWindow> curvature_windows(std::span<const Point2> points,
                                               const SmoothnessConfig &cfg);
std::vector<CurvatureWindow> curvature_windows(const Trajectory &traj,
                                               const SmoothnessConfig &cfg);

/// Fraction of windows that are non-degenerate with delta >= tau. Degenerate
/// windows stay in the denominator.
double discontinuity_ratio(std::span<const Point2> points, const SmoothnessConfig &cfg);
double discontinuity_ratio(const Trajectory &traj, const SmoothnessConfig &cfg);

double discontinuity_ratio_from_windows(std::span<const CurvatureWindow> windows, double tau);

/// lambda * (1 - exp(-|dk|)) when that mapped value strictly exceeds tau_c, else 0.
double smoothness_penalty(double delta_kappa, double lambda, double tau_c);

/// Reads a `t,x,y` CSV (header required). dt is taken from the first two
/// timestamps and must be uniform.
Trajectory load_trajectory_csv(const std::string &path);

}  // namespace crowdbench
