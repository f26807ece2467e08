#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "latproj/geometry.hpp"

namespace latproj {

struct QuadratureRule {
  int n = 2;
  std::vector<Vec> nodes;      // unit vectors
  std::vector<double> weights; // positive, summing to |S^{n-1}|
  std::string order_tag;
};

// Periodic composite trapezoid on the circle; spectrally accurate for smooth
// integrands.
QuadratureRule circle_rule(int count = 4096);
// Product Gauss-Legendre (polar) x trapezoid (azimuthal) on S^2.
QuadratureRule sphere_rule(int n_polar = 128, int n_azimuth = 256);
QuadratureRule default_rule(int n);
// default_rule, except polygons get composite Gauss-Legendre split at the
// vertex directions (their densities are only piecewise smooth).
QuadratureRule body_adapted_rule(const StarBody& body);

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights);

double sphere_integral(const std::function<double(const Vec&)>& integrand,
                       const QuadratureRule& rule);
// Integral of f(theta) m(theta) over S^{n-1}.
double sphere_integral(const SphereField& f, const SphereField& m, const QuadratureRule& rule);

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

// Monte Carlo integral of F over the body (hit test gauge <= 1), seeded and
// counter-based so results are reproducible per (seed, samples).
MonteCarloEstimate body_integral(const std::function<double(const Vec&)>& F,
                                 const StarBody& body, std::int64_t samples,
                                 std::uint64_t seed);

// Exact radial route: integral over D of F equals (1/n) integral of f m.
double body_integral_exact(const SphereField& f, const SphereField& m, const QuadratureRule& rule);

struct IdentityCheck {
  double lhs = 0.0;      // Monte Carlo body integral
  double rhs = 0.0;      // (1/n) quadrature integral
  double std_error = 0.0;
  double rel_discrepancy = 0.0;
  double sigmas = 0.0;   // |lhs - rhs| in Monte Carlo standard errors
};

IdentityCheck verify_identity(const SphereField& f, const SphereField& m, const StarBody& body,
                              std::int64_t samples, std::uint64_t seed);

}  // namespace latproj
