// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors

#pragma once

#include <cmath>

namespace crowdbench {

struct Vec2 {
  double x{0.0};
  double y{0.0};

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(const Vec2 &o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2 &o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2 &operator+=(const Vec2 &o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2 &) const = default;
};

constexpr Vec2 operator*(double s, const Vec2 &v) { return {v.x * s, v.y * s}; }

using Point2 = Vec2;

constexpr double dot(const Vec2 &a, const Vec2 &b) { return a.x * b.x + a.y * b.y; }

/// z-component of the 3D cross product.
constexpr double det(const Vec2 &a, const Vec2 &b) { return a.x * b.y - a.y * b.x; }

constexpr double abs_sq(const Vec2 &v) { return dot(v, v); }

inline double norm(const Vec2 &v) { return std::hypot(v.x, v.y); }

inline double distance(const Vec2 &a, const Vec2 &b) { return norm(b - a); }

/// Unit vector along v, or the zero vector when |v| is (numerically) zero.
inline Vec2 normalized(const Vec2 &v) {
  const double n = norm(v);
  return n > 0.0 ? v / n : Vec2{};
}

/// Scales v down to length max_len if it is longer; direction is preserved.
inline Vec2 clamp_length(const Vec2 &v, double max_len) {
  const double n = norm(v);
  if (n > max_len && n > 0.0) {
    return v * (max_len / n);
  }
  return v;
}

inline bool is_finite(const Vec2 &v) { return std::isfinite(v.x) && std::isfinite(v.y); }

}  // namespace crowdbench
