#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace latproj {

// Fixed-capacity vector for dimensions 2..4; the active dimension is carried
// by the surrounding object (body, rule, ...). Unused slots stay zero.
using Vec = std::array<double, 4>;

inline Vec make_vec(double x, double y) { return {x, y, 0.0, 0.0}; }
inline Vec make_vec(double x, double y, double z) { return {x, y, z, 0.0}; }

inline double dot(const Vec& a, const Vec& b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a, int n) { return std::sqrt(dot(a, a, n)); }

inline Vec scaled(const Vec& a, double t, int n) {
  Vec r{};
  for (int i = 0; i < n; ++i) r[i] = a[i] * t;
  return r;
}

inline Vec normalized(const Vec& a, int n) {
  return scaled(a, 1.0 / norm(a, n), n);
}

inline Vec unit_from_angle(double theta) {
  return {std::cos(theta), std::sin(theta), 0.0, 0.0};
}

}  // namespace latproj
