// Synthetic contour data shared by the tests.
#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "closedloft/loft.hpp"

namespace fixture {

using closedloft::Index;
using closedloft::Points;
constexpr double pi = std::numbers::pi;

inline Points ellipse(Index n, double a, double b, double z = 0.0, double phase = 0.0) {
  Points p(n, 3);
  for (Index i = 0; i < n; ++i) {
    const double th = phase + 2.0 * pi * static_cast<double>(i) / static_cast<double>(n);
    p.row(i) << a * std::cos(th), b * std::sin(th), z;
  }
  return p;
}

inline Points circle(Index n, double r = 1.0, double z = 0.0) { return ellipse(n, r, r, z); }

inline Points unit_square() {
  Points p(4, 3);
  p << 0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0;
  return p;
}

/// Alternating outer/inner radius: 2k points.
inline Points star(Index n = 20, double outer = 1.0, double inner = 0.45) {
  Points p(n, 3);
  for (Index i = 0; i < n; ++i) {
    const double th = 2.0 * pi * static_cast<double>(i) / static_cast<double>(n);
    const double r = i % 2 == 0 ? outer : inner;
    p.row(i) << r * std::cos(th), r * std::sin(th), 0.0;
  }
  return p;
}

/// Ring with radius R (1 + 0.1 cos 2θ) at height z, uneven angular spacing.
inline Points tube_ring(Index n, double radius, double z, double twist, double wobble = 0.0) {
  Points p(n, 3);
  for (Index j = 0; j < n; ++j) {
    const double s = static_cast<double>(j) / static_cast<double>(n);
    const double th = twist + 2.0 * pi * (s + 0.03 * std::sin(2.0 * pi * s));
    const double r = radius * (1.0 + 0.1 * std::cos(2.0 * th)) * (1.0 + wobble);
    p.row(j) << r * std::cos(th), r * std::sin(th), z;
  }
  return p;
}

/// 10 rows with 16-32 points each, varying radius, rising heights.
inline closedloft::ContourRows tube() {
  const Index sizes[] = {16, 20, 24, 28, 32, 18, 22, 26, 30, 17};
  closedloft::ContourRows rows;
  for (int i = 0; i < 10; ++i) {
    const double radius = 1.0 + 0.25 * std::sin(0.6 * i);
    rows.rows.push_back(tube_ring(sizes[i], radius, 0.4 * i + 0.02 * i * i, 0.05 * i));
  }
  return rows;
}

/// 40 rows with per-point radial noise.
inline closedloft::ContourRows noisy_tube(unsigned seed = 7) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(16, 32);
  std::uniform_real_distribution<double> noise(-0.03, 0.03);
  closedloft::ContourRows rows;
  for (int i = 0; i < 40; ++i) {
    const Index n = size(rng);
    Points p = tube_ring(n, 1.0 + 0.2 * std::sin(0.3 * i), 0.25 * i, 0.02 * i);
    for (Index j = 0; j < n; ++j) {
      const double f = 1.0 + noise(rng);
      p(j, 0) *= f;
      p(j, 1) *= f;
    }
    rows.rows.push_back(std::move(p));
  }
  return rows;
}

/// Rows of one size whose chord parameters coincide (uniform scalings).
inline closedloft::ContourRows equal_rows(Index rows_count = 6, Index n = 20) {
  closedloft::ContourRows rows;
  for (Index i = 0; i < rows_count; ++i)
    rows.rows.push_back(ellipse(n, 1.3 * (1.0 + 0.2 * std::sin(0.8 * i)), 1.0 * (1.0 + 0.2 * std::sin(0.8 * i)),
                                0.5 * static_cast<double>(i)));
  return rows;
}

}  // namespace fixture
