#include "latproj/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "latproj/rng.hpp"

namespace latproj {

ResidualSeries residual_series(const StarBody& body, const SphereField& f, const SphereField& m,
                               std::span<const double> rho_grid, const Rotation& rotation,
                               int workers, std::optional<double> precomputed_target) {
  for (std::size_t i = 1; i < rho_grid.size(); ++i)
    if (!(rho_grid[i] > rho_grid[i - 1]))
      throw std::invalid_argument("residual_series: rho grid must be strictly increasing");

  double target = precomputed_target ? *precomputed_target
                                     : sphere_integral(f, m, body_adapted_rule(body));

  // F == 1 keeps the fast interval-count path.
  bool unit = f.constant && *f.constant == 1.0;

  ResidualSeries series;
  series.body_desc = body.descriptor;
  series.target = target;
  CountRequest req;
  req.body = body;
  req.rotation = rotation;
  if (!unit) req.weight = homogeneous_extension(f, body.n);
  for (double rho : rho_grid) {
    req.rho = rho;
    CountResult cr = weighted_count(req, workers);
    ResidualRecord rec;
    rec.rho = rho;
    rec.rotation_id = rotation.id;
    rec.weighted_count = cr.weighted_count;
    rec.discrete_value = discrete_measure_value(cr, body.n);
    rec.target = target;
    rec.residual = target - rec.discrete_value;
    rec.boundary_hits = cr.boundary_hits;
    series.records.push_back(std::move(rec));
  }
  return series;
}

ExponentFit fit_envelope_exponent(std::span<const double> rho, std::span<const double> abs_residual,
                                  double target, FitWindow window, FitMethod method) {
  if (rho.size() != abs_residual.size())
    throw std::invalid_argument("fit_envelope_exponent: length mismatch");
  double floor = 1e-13 * std::abs(target);
  ExponentFit fit;
  fit.window = window;
  fit.method = method;
  std::vector<std::pair<double, double>> pts;  // (rho, |R|)
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho[i] < window.rho_min || rho[i] > window.rho_max) continue;
    double r = abs_residual[i];
    if (r <= floor || r <= 0.0) {
      ++fit.floor_dropped;
      continue;
    }
    pts.emplace_back(rho[i], r);
  }
  if (pts.size() < 8)
    throw std::invalid_argument("fit_envelope_exponent: only " + std::to_string(pts.size()) +
                                " usable points in window (need >= 8)");

  std::vector<std::pair<double, double>> fitted;
  if (method == FitMethod::AllPoints) {
    fitted = pts;
  } else {
    // Per-dyadic-block maxima of |R|, keyed by floor(log2 rho).
    std::map<int, std::pair<double, double>> blocks;
    for (auto& [r, v] : pts) {
      int b = static_cast<int>(std::floor(std::log2(r)));
      auto it = blocks.find(b);
      if (it == blocks.end() || v > it->second.second) blocks[b] = {r, v};
    }
    for (auto& [b, rv] : blocks) fitted.push_back(rv);
  }
  if (fitted.size() < 2) throw std::invalid_argument("fit_envelope_exponent: too few blocks");

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (auto& [r, v] : fitted) {
    double x = std::log(r), y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  double np = static_cast<double>(fitted.size());
  double den = np * sxx - sx * sx;
  fit.slope = (np * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / np;
  double ss_tot = syy - sy * sy / np;
  double ss_res = 0.0;
  for (auto& [r, v] : fitted) {
    double e = std::log(v) - (fit.intercept + fit.slope * std::log(r));
    ss_res += e * e;
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.points_used = static_cast<int>(fitted.size());
  return fit;
}

ExponentFit fit_envelope_exponent(const ResidualSeries& series, FitWindow window, FitMethod method) {
  std::vector<double> rho, absr;
  for (const auto& rec : series.records) {
    rho.push_back(rec.rho);
    absr.push_back(std::abs(rec.residual));
  }
  return fit_envelope_exponent(rho, absr, series.target, window, method);
}

TheoryExponents theory_exponents(int n, const std::string& family, std::optional<int> k) {
  if (n < 2) throw std::invalid_argument("theory_exponents: n must be >= 2");
  TheoryExponents t;
  t.n = n;
  t.family = family;
  t.positive_curvature_exp = -2.0 * n / (n + 1.0);
  t.polygon_rational_exp = (n - 1.0) - n;  // count error of true order rho^{n-1}
  t.polygon_algebraic_exp = -static_cast<double>(n);        // eps - n with eps -> 0+
  if (family == "superellipsoid") {
    if (!k) throw std::invalid_argument("theory_exponents: superellipsoid requires k");
    t.k = k;
    double kk = static_cast<double>(*k);
    t.A = (2.0 * kk - 1.0) * (n - 1.0) / (2.0 * kk);
    t.B = n * (n - 1.0) / (n + 1.0);
    t.superellipsoid_exp = t.A - n;
    t.beta = (kk - 1.0) / (2.0 * kk - 1.0);
    for (int j = 0; j < n; ++j) t.alpha.push_back(j / (2.0 * kk) + (n - j - 1.0) / 2.0);
    t.best_possible = t.A > t.B;
  } else if (family != "positive-curvature" && family != "polygon-rational" &&
             family != "polygon-algebraic") {
    throw std::invalid_argument("theory_exponents: unknown family '" + family + "'");
  }
  return t;
}

Rotation haar_rotation(int n, std::uint64_t seed, std::uint64_t index) {
  CounterRng rng{seed};
  if (n == 2) {
    double theta = rng.uniform(index, 0.0, 2.0 * std::numbers::pi);
    return Rotation::angle2d(theta, "haar2d[" + std::to_string(index) + "]");
  }
  if (n == 3) {
    // Uniform unit quaternion from four gaussians.
    auto [a, b] = rng.gaussian_pair(2 * index);
    auto [c, d] = rng.gaussian_pair(2 * index + 1);
    double q0 = a, q1 = b, q2 = c, q3 = d;
    double nn = std::sqrt(q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3);
    q0 /= nn; q1 /= nn; q2 /= nn; q3 /= nn;
    std::array<double, 16> m{};
    m[0] = 1 - 2 * (q2 * q2 + q3 * q3);
    m[1] = 2 * (q1 * q2 - q0 * q3);
    m[2] = 2 * (q1 * q3 + q0 * q2);
    m[4] = 2 * (q1 * q2 + q0 * q3);
    m[5] = 1 - 2 * (q1 * q1 + q3 * q3);
    m[6] = 2 * (q2 * q3 - q0 * q1);
    m[8] = 2 * (q1 * q3 - q0 * q2);
    m[9] = 2 * (q2 * q3 + q0 * q1);
    m[10] = 1 - 2 * (q1 * q1 + q2 * q2);
    // Quaternion products drift from exact orthogonality by a few ulp; a
    // single Gram-Schmidt pass pins the 1e-12 contract.
    for (int i = 0; i < 3; ++i) {
      for (int p = 0; p < i; ++p) {
        double d2 = 0;
        for (int j = 0; j < 3; ++j) d2 += m[static_cast<std::size_t>(4 * i + j)] * m[static_cast<std::size_t>(4 * p + j)];
        for (int j = 0; j < 3; ++j) m[static_cast<std::size_t>(4 * i + j)] -= d2 * m[static_cast<std::size_t>(4 * p + j)];
      }
      double nr = 0;
      for (int j = 0; j < 3; ++j) nr += m[static_cast<std::size_t>(4 * i + j)] * m[static_cast<std::size_t>(4 * i + j)];
      nr = std::sqrt(nr);
      for (int j = 0; j < 3; ++j) m[static_cast<std::size_t>(4 * i + j)] /= nr;
    }
    return Rotation::from_matrix(3, m, "haar3d[" + std::to_string(index) + "]");
  }
  throw std::invalid_argument("haar_rotation: n must be 2 or 3");
}

RotationAverage rotation_average(const StarBody& body, const SphereField& f, const SphereField& m,
                                 std::span<const double> rho_grid, int num_rotations,
                                 std::uint64_t seed, int workers) {
  if (num_rotations < 1) throw std::invalid_argument("rotation_average: need >= 1 rotation");
  if (body.n != 2 && body.n != 3)
    throw std::invalid_argument("rotation_average: n must be 2 or 3");
  double target = sphere_integral(f, m, body_adapted_rule(body));
  RotationAverage avg;
  avg.target = target;
  avg.num_rotations = num_rotations;
  avg.rho.assign(rho_grid.begin(), rho_grid.end());
  std::vector<double> sum(rho_grid.size(), 0.0);
  for (int g = 0; g < num_rotations; ++g) {
    Rotation rot = haar_rotation(body.n, seed, static_cast<std::uint64_t>(g));
    ResidualSeries s = residual_series(body, f, m, rho_grid, rot, workers, target);
    for (std::size_t i = 0; i < rho_grid.size(); ++i) sum[i] += std::abs(s.records[i].residual);
    avg.per_rotation.push_back(std::move(s));
  }
  double K = static_cast<double>(num_rotations);
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    double mean = sum[i] / K;
    avg.mean_abs_residual.push_back(mean);
    // Two-pass variance: exact zero when every rotation sees the same |R|.
    double ss = 0.0;
    for (const auto& s : avg.per_rotation) {
      double d = std::abs(s.records[i].residual) - mean;
      ss += d * d;
    }
    double var = num_rotations > 1 ? ss / (K - 1.0) : 0.0;
    avg.std_error.push_back(std::sqrt(var / K));
  }
  avg.fit = fit_envelope_exponent(avg.rho, avg.mean_abs_residual, target,
                                  FitWindow{avg.rho.front(), avg.rho.back()},
                                  FitMethod::DyadicEnvelope);
  return avg;
}

std::vector<double> rho_grid_geometric(double start, double stop, int per_octave,
                                       std::uint64_t jitter_seed) {
  if (!(start > 0.0) || !(stop > start))
    throw std::invalid_argument("rho_grid_geometric: need 0 < start < stop");
  if (per_octave < 1) throw std::invalid_argument("rho_grid_geometric: per_octave must be >= 1");
  CounterRng rng{jitter_seed};
  std::vector<double> grid;
  double ratio = std::pow(2.0, 1.0 / per_octave);
  int count = static_cast<int>(std::floor(std::log2(stop / start) * per_octave + 1e-9)) + 1;
  for (int j = 0; j < count; ++j) {
    double g = start * std::pow(2.0, static_cast<double>(j) / per_octave);
    double spacing = g * (ratio - 1.0);
    // Jitter within half the local spacing keeps the grid strictly increasing.
    double r = g + 0.5 * spacing * (rng.uniform(static_cast<std::uint64_t>(j)) - 0.5);
    grid.push_back(r);
  }
  return grid;
}

}  // namespace latproj
