#include "latproj/fourier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "latproj/lattice.hpp"

namespace latproj {

namespace {

using cplx = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

int initial_nodes(const StarBody& body, const Vec& y, const TransformBudget& budget) {
  double periods = norm(y, 2) * 2.0 * body.max_radius;
  double want = std::max(512.0, 64.0 * (periods + 1.0));
  int n = 512;
  while (n < want && n < budget.max_nodes) n *= 2;
  return n;
}

void check_frequency(const Vec& y, const TransformBudget& budget) {
  if (norm(y, 2) > budget.r_max)
    throw BudgetError("fourier transform frequency |y| exceeds budget r_max=" +
                      std::to_string(budget.r_max));
}

double radial_angle(const StarBody& body, double t) {
  return body.radial_at(unit_from_angle(t));
}

cplx surface_sum(const StarBody& body, const SphereField& g, const Vec& y, int nodes) {
  const double h = kTwoPi / nodes;
  const double dh = 1e-5;  // central-difference step for r'(t)
  double sre = 0.0, cre = 0.0, sim = 0.0, cim = 0.0;  // compensated
  for (int i = 0; i < nodes; ++i) {
    double t = h * i;
    Vec u = unit_from_angle(t);
    double r = body.radial_at(u);
    double rp = (radial_angle(body, t + dh) - radial_angle(body, t - dh)) / (2.0 * dh);
    double speed = std::sqrt(r * r + rp * rp);
    double phase = kTwoPi * r * dot(u, y, 2);
    double amp = g.eval(u) * speed;
    double re = amp * std::cos(phase), im = amp * std::sin(phase);
    double yk = re - cre, tk = sre + yk; cre = (tk - sre) - yk; sre = tk;
    yk = im - cim; tk = sim + yk; cim = (tk - sim) - yk; sim = tk;
  }
  return cplx(sre * h, sim * h);
}

// integral of s exp(i a s) ds over [c, d]; closed form with a Taylor branch
// near a = 0 where the closed form cancels catastrophically.
cplx radial_factor(double a, double c, double d) {
  if (std::abs(a) * d < 1e-3) {
    cplx sum = 0.0;
    cplx ia_pow = 1.0;
    double fact = 1.0;
    for (int m2 = 0; m2 < 10; ++m2) {
      sum += ia_pow / fact * (std::pow(d, m2 + 2) - std::pow(c, m2 + 2)) / (m2 + 2.0);
      ia_pow *= cplx(0.0, a);
      fact *= (m2 + 1.0);
    }
    return sum;
  }
  auto anti = [a](double s) {
    return std::exp(cplx(0.0, a * s)) * cplx(1.0 / (a * a), -s / a);
  };
  return anti(d) - anti(c);
}

cplx shell_sum(const StarBody& body, const SphereField& f, const Vec& y, int nodes) {
  const double h = kTwoPi / nodes;
  double sre = 0.0, cre = 0.0, sim = 0.0, cim = 0.0;
  for (int i = 0; i < nodes; ++i) {
    Vec u = unit_from_angle(h * i);
    double r = body.radial_at(u);
    double a = kTwoPi * dot(u, y, 2);
    cplx v = f.eval(u) * radial_factor(a, 0.5 * r, r);
    double yk = v.real() - cre, tk = sre + yk; cre = (tk - sre) - yk; sre = tk;
    yk = v.imag() - cim; tk = sim + yk; cim = (tk - sim) - yk; sim = tk;
  }
  return cplx(sre * h, sim * h);
}

template <typename Eval>
cplx doubled_until_stable(Eval&& eval, int n0, const TransformBudget& budget) {
  cplx prev = eval(n0);
  for (int n = 2 * n0; n <= budget.max_nodes; n *= 2) {
    cplx cur = eval(n);
    double scale = std::max(std::abs(cur), 1e-6);
    if (std::abs(cur - prev) <= budget.rel_tol * scale) return cur;
    prev = cur;
  }
  throw BudgetError("fourier transform did not stabilize within the node budget");
}

}  // namespace

cplx surface_transform(const StarBody& body, const SphereField& g, const Vec& y,
                       const TransformBudget& budget) {
  if (body.n != 2) throw std::invalid_argument("surface_transform: n = 2 curves only");
  check_frequency(y, budget);
  return doubled_until_stable([&](int n) { return surface_sum(body, g, y, n); },
                              initial_nodes(body, y, budget), budget);
}

cplx shell_transform(const StarBody& body, const SphereField& f, const Vec& y,
                     const TransformBudget& budget) {
  if (body.n != 2) throw std::invalid_argument("shell_transform: n = 2 only");
  check_frequency(y, budget);
  return doubled_until_stable([&](int n) { return shell_sum(body, f, y, n); },
                              initial_nodes(body, y, budget), budget);
}

std::vector<double> transform_r_grid(double r_min, double r_max, double step) {
  if (!(r_min > 0.0) || !(r_max > r_min)) throw std::invalid_argument("transform_r_grid: bad range");
  std::vector<double> grid;
  for (double r = r_min; r <= r_max + 1e-12; r += step) grid.push_back(r);
  return grid;
}

double fit_local_maxima_slope(std::span<const double> r, std::span<const double> magnitude) {
  if (r.size() != magnitude.size() || r.size() < 3)
    throw std::invalid_argument("fit_local_maxima_slope: need matching samples");
  std::vector<std::pair<double, double>> maxima;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    if (magnitude[i] > 0.0 && magnitude[i] >= magnitude[i - 1] && magnitude[i] >= magnitude[i + 1])
      maxima.emplace_back(r[i], magnitude[i]);
  }
  // Oscillation-free profiles have no interior maxima; fall back to all points.
  if (maxima.size() < 4) {
    maxima.clear();
    for (std::size_t i = 0; i < r.size(); ++i)
      if (magnitude[i] > 0.0) maxima.emplace_back(r[i], magnitude[i]);
  }
  if (maxima.size() < 2) throw std::invalid_argument("fit_local_maxima_slope: no usable points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& [rr, v] : maxima) {
    double x = std::log(rr), yv = std::log(v);
    sx += x; sy += yv; sxx += x * x; sxy += x * yv;
  }
  double np = static_cast<double>(maxima.size());
  return (np * sxy - sx * sy) / (np * sxx - sx * sx);
}

DecayProfile decay_profile(const StarBody& body, const SphereField& g, const Vec& direction,
                           std::span<const double> r_grid, TransformKind kind,
                           const TransformBudget& budget) {
  if (r_grid.size() >= 2 && !(r_grid.back() >= 2.0 * r_grid.front()))
    throw std::invalid_argument("decay_profile: r grid must span at least one octave");
  DecayProfile prof;
  prof.direction = normalized(direction, 2);
  prof.kind = kind;
  for (int i = 0; i < 2; ++i)
    if (std::abs(prof.direction[static_cast<std::size_t>(i)]) < 1e-12) ++prof.j_vanishing;
  for (double rr : r_grid) {
    Vec y = scaled(prof.direction, rr, 2);
    cplx v = kind == TransformKind::Surface ? surface_transform(body, g, y, budget)
                                            : shell_transform(body, g, y, budget);
    prof.r_grid.push_back(rr);
    prof.magnitudes.push_back(std::abs(v));
    prof.lambda_sup = std::max(prof.lambda_sup, std::pow(rr, 1.5) * std::abs(v));
  }
  prof.fitted_alpha = fit_local_maxima_slope(prof.r_grid, prof.magnitudes);
  return prof;
}

std::vector<DecayProfile> decay_sweep(const StarBody& body, const SphereField& g,
                                      std::span<const Vec> directions,
                                      std::span<const double> r_grid, TransformKind kind,
                                      const TransformBudget& budget) {
  std::vector<DecayProfile> out;
  for (const Vec& d : directions) out.push_back(decay_profile(body, g, d, r_grid, kind, budget));
  return out;
}

}  // namespace latproj
