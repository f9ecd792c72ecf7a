// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors

#include "trajmetric.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "errors.hpp"

namespace crowdbench {

CurvatureSample circumcircle_curvature_checked(const Point2 &p1, const Point2 &p2,
                                               const Point2 &p3, double eps_len) {
  const double d12 = distance(p1, p2);
  const double d23 = distance(p2, p3);
  const double d13 = distance(p1, p3);
  if (d12 < eps_len || d23 < eps_len || d13 < eps_len) {
    return {0.0, true};
  }
  const double cross = (p2.x - p1.x) * (p3.y - p1.y) - (p2.y - p1.y) * (p3.x - p1.x);
  return {2.0 * std::abs(cross) / (d12 * d23 * d13), false};
}

double circumcircle_curvature(const Point2 &p1, const Point2 &p2, const Point2 &p3,
                              double eps_len) {
  return circumcircle_curvature_checked(p1, p2, p3, eps_len).kappa;
}

std::vector<CurvatureWindow> curvature_windows(std::span<const Point2> points,
                                               const SmoothnessConfig &cfg) {
  if (points.size() < 4) {
    throw Error(ErrorCode::InsufficientPoints,
                "curvature windows need at least 4 points, got " + std::to_string(points.size()));
  }
  std::vector<CurvatureWindow> windows;
  windows.reserve(points.size() - 3);

  // Each curvature is shared by two neighbouring windows.
  CurvatureSample prev = circumcircle_curvature_checked(points[0], points[1], points[2], cfg.eps_len);
  for (std::size_t i = 0; i + 3 < points.size(); ++i) {
    const CurvatureSample next =
        circumcircle_curvature_checked(points[i + 1], points[i + 2], points[i + 3], cfg.eps_len);
    windows.push_back({prev.kappa, next.kappa, std::abs(next.kappa - prev.kappa),
                       prev.degenerate || next.degenerate});
    prev = next;
  }
  return windows;
}

std::vector<CurvatureWindow> curvature_windows(const Trajectory &traj, const SmoothnessConfig &cfg) {
  return curvature_windows(std::span<const Point2>(traj.points), cfg);
}

double discontinuity_ratio_from_windows(std::span<const CurvatureWindow> windows, double tau) {
  if (windows.empty()) {
    throw Error(ErrorCode::InsufficientPoints, "no curvature windows");
  }
  std::size_t breaks = 0;
  for (const auto &w : windows) {
    if (!w.degenerate && w.delta >= tau) {
      ++breaks;
    }
  }
  return static_cast<double>(breaks) / static_cast<double>(windows.size());
}

double discontinuity_ratio(std::span<const Point2> points, const SmoothnessConfig &cfg) {
  const auto windows = curvature_windows(points, cfg);
  return discontinuity_ratio_from_windows(windows, cfg.tau);
}

double discontinuity_ratio(const Trajectory &traj, const SmoothnessConfig &cfg) {
  return discontinuity_ratio(std::span<const Point2>(traj.points), cfg);
}

double smoothness_penalty(double delta_kappa, double lambda, double tau_c) {
  const double mapped = 1.0 - std::exp(-std::abs(delta_kappa));
  return mapped > tau_c ? lambda * mapped : 0.0;
}

namespace {

std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
  }
  return cells;
}

double parse_number(const std::string &cell, const std::string &path, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size() || !std::isfinite(v)) {
      throw std::invalid_argument(cell);
    }
    return v;
  } catch (const std::exception &) {
    throw Error(ErrorCode::Config,
                path + ":" + std::to_string(line_no) + ": not a finite number: '" + cell + "'");
  }
}

}  // namespace

Trajectory load_trajectory_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open trajectory file: " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::Config, path + ": empty file, expected header t,x,y");
  }
  const auto header = split_csv_line(line);
  if (header.size() != 3 || header[0] != "t" || header[1] != "x" || header[2] != "y") {
    throw Error(ErrorCode::Config, path + ": header must be 't,x,y'");
  }

  Trajectory traj;
  std::vector<double> times;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    const auto cells = split_csv_line(line);
    if (cells.size() != 3) {
      throw Error(ErrorCode::Config, path + ":" + std::to_string(line_no) + ": expected 3 columns");
    }
    times.push_back(parse_number(cells[0], path, line_no));
    traj.points.push_back({parse_number(cells[1], path, line_no), parse_number(cells[2], path, line_no)});
  }

  if (times.size() >= 2) {
    traj.dt = times[1] - times[0];
    if (!(traj.dt > 0.0)) {
      throw Error(ErrorCode::Config, path + ": timestamps must be strictly increasing");
    }
    for (std::size_t i = 2; i < times.size(); ++i) {
      const double step = times[i] - times[i - 1];
      if (std::abs(step - traj.dt) > 1e-6 * std::max(1.0, traj.dt)) {
        throw Error(ErrorCode::Config, path + ": non-uniform sampling at row " + std::to_string(i + 1));
      }
    }
  }
  return traj;
}

}  // namespace crowdbench
