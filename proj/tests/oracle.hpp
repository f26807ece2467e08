#pragma once

// Test-only oracles, independent of the enumeration/quadrature paths they
// check: a naive full-box lattice scan, a Bessel J0 power series, and an
// arc-length perimeter quadrature.

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "latproj/lattice.hpp"

namespace latproj::testing {

// Every nonzero lattice point in the bounding box passing the membership
// predicate, by exhaustive scan.
inline std::vector<std::array<std::int64_t, 4>> brute_force_points(const CountRequest& req) {
  std::int64_t B = bounding_halfwidth(req);
  const int n = req.body.n;
  std::vector<std::array<std::int64_t, 4>> pts;
  std::array<std::int64_t, 4> N{0, 0, 0, 0};
  auto scan = [&](auto&& self, int d) -> void {
    if (d == n) {
      bool zero = true;
      for (int i = 0; i < n; ++i) zero = zero && N[static_cast<std::size_t>(i)] == 0;
      if (!zero && lattice_member(req, N)) pts.push_back(N);
      return;
    }
    for (std::int64_t v = -B; v <= B; ++v) {
      N[static_cast<std::size_t>(d)] = v;
      self(self, d + 1);
    }
  };
  scan(scan, 0);
  return pts;
}

inline double brute_force_weighted(const CountRequest& req) {
  double s = 0.0;
  for (const auto& N : brute_force_points(req)) {
    if (!req.weight) {
      s += 1.0;
    } else {
      Vec v{};
      for (int i = 0; i < req.body.n; ++i) v[static_cast<std::size_t>(i)] = static_cast<double>(N[static_cast<std::size_t>(i)]);
      s += req.weight(req.rotation.apply(v));
    }
  }
  return s;
}

// J0 by its power series; accurate in double for |x| up to ~15.
inline double bessel_j0_series(double x) {
  double term = 1.0, sum = 1.0;
  double q = x * x / 4.0;
  for (int m = 1; m < 60; ++m) {
    term *= -q / (static_cast<double>(m) * m);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Arc length of the curve t -> (a cos t, b sin t) by fine trapezoid.
inline double ellipse_perimeter(double a, double b, int nodes = 1 << 20) {
  double h = 2.0 * 3.14159265358979323846 / nodes;
  double s = 0.0;
  for (int i = 0; i < nodes; ++i) {
    double t = h * i;
    double dx = -a * std::sin(t), dy = b * std::cos(t);
    s += std::sqrt(dx * dx + dy * dy);
  }
  return s * h;
}

}  // namespace latproj::testing
