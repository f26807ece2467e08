#include "latproj/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "latproj/rng.hpp"

namespace latproj {

QuadratureRule circle_rule(int count) {
  if (count < 4) throw std::invalid_argument("circle_rule: need >= 4 nodes");
  QuadratureRule rule;
  rule.n = 2;
  rule.order_tag = "trapezoid[" + std::to_string(count) + "]";
  double w = 2.0 * std::numbers::pi / count;
  rule.nodes.reserve(static_cast<std::size_t>(count));
  rule.weights.assign(static_cast<std::size_t>(count), w);
  for (int i = 0; i < count; ++i)
    rule.nodes.push_back(unit_from_angle(2.0 * std::numbers::pi * i / count));
  return rule;
}

void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(count), 0.0);
  weights.assign(static_cast<std::size_t>(count), 0.0);
  for (int i = 0; i < count; ++i) {
    // Newton iteration from the Chebyshev-based initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < count; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = count * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[static_cast<std::size_t>(i)] = x;
    weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

QuadratureRule sphere_rule(int n_polar, int n_azimuth) {
  if (n_polar < 2 || n_azimuth < 4) throw std::invalid_argument("sphere_rule: rule too small");
  QuadratureRule rule;
  rule.n = 3;
  rule.order_tag =
      "gauss-legendre[" + std::to_string(n_polar) + "]x trapezoid[" + std::to_string(n_azimuth) + "]";
  std::vector<double> gn, gw;
  gauss_legendre(n_polar, gn, gw);  // z = cos(polar) on [-1,1]
  double wphi = 2.0 * std::numbers::pi / n_azimuth;
  for (int i = 0; i < n_polar; ++i) {
    double z = gn[static_cast<std::size_t>(i)];
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (int j = 0; j < n_azimuth; ++j) {
      double phi = 2.0 * std::numbers::pi * j / n_azimuth;
      rule.nodes.push_back(make_vec(r * std::cos(phi), r * std::sin(phi), z));
      rule.weights.push_back(gw[static_cast<std::size_t>(i)] * wphi);
    }
  }
  return rule;
}

QuadratureRule default_rule(int n) {
  if (n == 2) return circle_rule();
  if (n == 3) return sphere_rule();
  throw std::invalid_argument("default_rule: only n = 2, 3 supported");
}

QuadratureRule body_adapted_rule(const StarBody& body) {
  if (body.n != 2 || body.family != Family::Polygon) return default_rule(body.n);
  // Polygon densities have kinks exactly at the vertex directions; the
  // trapezoid rule then stalls at O(h^2). Composite Gauss-Legendre on the
  // smooth arcs between vertices restores spectral accuracy.
  std::vector<double> angles;
  for (const Vec& v : polygon_vertices(body)) angles.push_back(std::atan2(v[1], v[0]));
  std::sort(angles.begin(), angles.end());
  std::vector<double> gx, gw;
  gauss_legendre(64, gx, gw);
  QuadratureRule rule;
  rule.n = 2;
  rule.order_tag = "per-arc-gl64";
  for (std::size_t i = 0; i < angles.size(); ++i) {
    double a = angles[i];
    double b = i + 1 < angles.size() ? angles[i + 1] : angles[0] + 2.0 * std::numbers::pi;
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t j = 0; j < gx.size(); ++j) {
      rule.nodes.push_back(unit_from_angle(mid + half * gx[j]));
      rule.weights.push_back(half * gw[j]);
    }
  }
  return rule;
}

double sphere_integral(const std::function<double(const Vec&)>& integrand,
                       const QuadratureRule& rule) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    double y = rule.weights[i] * integrand(rule.nodes[i]) - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

double sphere_integral(const SphereField& f, const SphereField& m, const QuadratureRule& rule) {
  return sphere_integral([&](const Vec& u) { return f.eval(u) * m.eval(u); }, rule);
}

MonteCarloEstimate body_integral(const std::function<double(const Vec&)>& F, const StarBody& body,
                                 std::int64_t samples, std::uint64_t seed) {
  if (samples <= 0) throw std::invalid_argument("body_integral: samples must be > 0");
  const int n = body.n;
  const double half = body.max_radius * (1.0 + 1e-12);
  double vol = 1.0;
  for (int i = 0; i < n; ++i) vol *= 2.0 * half;
  CounterRng rng{seed};
  double s = 0.0, comp = 0.0, s2 = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    Vec x{};
    for (int d = 0; d < n; ++d)
      x[static_cast<std::size_t>(d)] =
          rng.uniform(static_cast<std::uint64_t>(i) * 4 + static_cast<std::uint64_t>(d), -half, half);
    double v = 0.0;
    double g = body.gauge(x);
    if (g > 0.0 && g <= 1.0) v = F(x);
    double y = v - comp;
    double t = s + y;
    comp = (t - s) - y;
    s = t;
    s2 += v * v;
  }
  double mean = s / static_cast<double>(samples);
  double var = std::max(0.0, s2 / static_cast<double>(samples) - mean * mean);
  MonteCarloEstimate est;
  est.value = vol * mean;
  est.std_error = vol * std::sqrt(var / static_cast<double>(samples));
  est.samples = samples;
  return est;
}

double body_integral_exact(const SphereField& f, const SphereField& m, const QuadratureRule& rule) {
  return sphere_integral(f, m, rule) / rule.n;
}

IdentityCheck verify_identity(const SphereField& f, const SphereField& m, const StarBody& body,
                              std::int64_t samples, std::uint64_t seed) {
  auto F = homogeneous_extension(f, body.n);
  auto Fsafe = [&F](const Vec& x) { return F(x); };
  MonteCarloEstimate mc = body_integral(Fsafe, body, samples, seed);
  double rhs = body_integral_exact(f, m, default_rule(body.n));
  IdentityCheck chk;
  chk.lhs = mc.value;
  chk.rhs = rhs;
  chk.std_error = mc.std_error;
  chk.rel_discrepancy = rhs != 0.0 ? std::abs(mc.value - rhs) / std::abs(rhs)
                                   : std::abs(mc.value - rhs);
  chk.sigmas = mc.std_error > 0.0 ? std::abs(mc.value - rhs) / mc.std_error
                                  : (mc.value == rhs ? 0.0 : std::numeric_limits<double>::infinity());
  return chk;
}

}  // namespace latproj
