#include "latproj/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "latproj/rng.hpp"

namespace latproj {

namespace {

std::string dir_string(const Vec& u, int n) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < n; ++i) os << (i ? ", " : "") << u[static_cast<std::size_t>(i)];
  os << ")";
  return os.str();
}

}  // namespace

SphereField constant_field(double c) {
  SphereField f;
  f.eval = [c](const Vec&) { return c; };
  f.positive = c > 0.0;
  f.constant = c;
  return f;
}

SphereField field_from_angle(std::function<double(double)> g, std::string smoothness,
                             bool positive) {
  SphereField f;
  f.eval = [g = std::move(g)](const Vec& u) { return g(std::atan2(u[1], u[0])); };
  f.smoothness = std::move(smoothness);
  f.positive = positive;
  return f;
}

double StarBody::gauge(const Vec& x) const {
  double a = 0.0;
  for (int i = 0; i < n; ++i) a = std::max(a, std::abs(x[static_cast<std::size_t>(i)]));
  if (a == 0.0) return 0.0;  // homogeneity limit keeps membership total
  switch (family) {
    case Family::Ball:
      return norm(x, n);
    case Family::Ellipsoid: {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        double t = x[static_cast<std::size_t>(i)] / axes[static_cast<std::size_t>(i)];
        s += t * t;
      }
      return std::sqrt(s);
    }
    case Family::Superellipsoid: {
      // Power mean, rescaled by the max coordinate for overflow safety.
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        double t = std::abs(x[static_cast<std::size_t>(i)]) / a;
        s += std::pow(t, 2.0 * k);
      }
      return a * std::pow(s, 1.0 / (2.0 * k));
    }
    case Family::Polygon: {
      double g = 0.0;
      for (std::size_t i = 0; i < facet_normals.size(); ++i)
        g = std::max(g, dot(facet_normals[i], x, n) / facet_offsets[i]);
      return g;
    }
    case Family::Custom: {
      double r = norm(x, n);
      return r / radial.eval(scaled(x, 1.0 / r, n));
    }
  }
  return 0.0;
}

StarBody make_ball(int n) {
  if (n < 2 || n > 4) throw std::invalid_argument("ball: dimension must be in [2,4]");
  StarBody body;
  body.n = n;
  body.family = Family::Ball;
  body.radial = constant_field(1.0);
  body.max_radius = 1.0;
  body.descriptor = "ball";
  return body;
}

StarBody make_ellipsoid(std::vector<double> axes) {
  int n = static_cast<int>(axes.size());
  if (n < 2 || n > 4) throw std::invalid_argument("ellipsoid: need 2..4 axes");
  for (double a : axes)
    if (!(a > 0.0)) throw std::invalid_argument("ellipsoid: axes must be positive");
  StarBody body;
  body.n = n;
  body.family = Family::Ellipsoid;
  body.axes = std::move(axes);
  body.max_radius = *std::max_element(body.axes.begin(), body.axes.end());
  {
    std::vector<double> ax = body.axes;
    body.radial.eval = [ax, n](const Vec& u) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        double t = u[static_cast<std::size_t>(i)] / ax[static_cast<std::size_t>(i)];
        s += t * t;
      }
      return 1.0 / std::sqrt(s);
    };
    body.radial.positive = true;
  }
  std::ostringstream os;
  os << "ellipsoid[";
  for (int i = 0; i < n; ++i) os << (i ? "," : "") << body.axes[static_cast<std::size_t>(i)];
  os << "]";
  body.descriptor = os.str();
  return body;
}

StarBody make_superellipsoid(int n, int k) {
  if (n < 2 || n > 4) throw std::invalid_argument("superellipsoid: dimension must be in [2,4]");
  if (k < 1) throw std::invalid_argument("superellipsoid: k must be >= 1");
  StarBody body;
  body.n = n;
  body.family = Family::Superellipsoid;
  body.k = k;
  body.radial.eval = [n, k](const Vec& u) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::pow(std::abs(u[static_cast<std::size_t>(i)]), 2.0 * k);
    return std::pow(s, -1.0 / (2.0 * k));
  };
  body.radial.positive = true;
  // Max radial sits on the diagonal: n^{(k-1)/(2k)}.
  body.max_radius = std::pow(static_cast<double>(n), (k - 1.0) / (2.0 * k));
  body.descriptor = "superellipsoid[k=" + std::to_string(k) + "]";
  return body;
}

StarBody make_polygon(std::vector<Vec> normals, std::vector<double> offsets) {
  if (normals.size() != offsets.size() || normals.size() < 3)
    throw std::invalid_argument("polygon: need >= 3 matching normals/offsets");
  StarBody body;
  body.n = 2;
  body.family = Family::Polygon;
  for (std::size_t i = 0; i < normals.size(); ++i) {
    if (!(offsets[i] > 0.0))
      throw std::invalid_argument("polygon: offsets must be positive (origin interior)");
    double nn = norm(normals[i], 2);
    if (!(nn > 0.0)) throw std::invalid_argument("polygon: zero normal");
    body.facet_normals.push_back(scaled(normals[i], 1.0 / nn, 2));
    body.facet_offsets.push_back(offsets[i]);
  }
  // Sort facets by normal angle so adjacent intersections give the vertices.
  std::vector<std::size_t> order(body.facet_normals.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::atan2(body.facet_normals[a][1], body.facet_normals[a][0]) <
           std::atan2(body.facet_normals[b][1], body.facet_normals[b][0]);
  });
  std::vector<Vec> ns;
  std::vector<double> os_;
  for (std::size_t i : order) {
    ns.push_back(body.facet_normals[i]);
    os_.push_back(body.facet_offsets[i]);
  }
  body.facet_normals = std::move(ns);
  body.facet_offsets = std::move(os_);

  struct Capture {
    std::vector<Vec> ns;
    std::vector<double> os;
  };
  auto cap = std::make_shared<Capture>(Capture{body.facet_normals, body.facet_offsets});
  body.radial.eval = [cap](const Vec& u) {
    double g = 0.0;
    for (std::size_t i = 0; i < cap->ns.size(); ++i)
      g = std::max(g, dot(cap->ns[i], u, 2) / cap->os[i]);
    return 1.0 / g;
  };
  body.radial.positive = true;
  body.radial.smoothness = "piecewise-smooth";
  double mr = 0.0;
  for (const Vec& v : polygon_vertices(body)) mr = std::max(mr, norm(v, 2));
  body.max_radius = mr;
  body.descriptor = "polygon[" + std::to_string(body.facet_normals.size()) + " facets]";
  return body;
}

StarBody make_square() {
  StarBody b = make_polygon({make_vec(1, 0), make_vec(-1, 0), make_vec(0, 1), make_vec(0, -1)},
                            {1, 1, 1, 1});
  b.descriptor = "square";
  return b;
}

std::vector<Vec> polygon_vertices(const StarBody& body) {
  if (body.family != Family::Polygon) throw std::invalid_argument("polygon_vertices: not a polygon");
  std::vector<Vec> verts;
  std::size_t m = body.facet_normals.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec& a = body.facet_normals[i];
    const Vec& b = body.facet_normals[(i + 1) % m];
    double det = a[0] * b[1] - a[1] * b[0];
    if (std::abs(det) < 1e-14) throw std::invalid_argument("polygon: adjacent facets parallel");
    double oa = body.facet_offsets[i], ob = body.facet_offsets[(i + 1) % m];
    verts.push_back(make_vec((oa * b[1] - ob * a[1]) / det, (ob * a[0] - oa * b[0]) / det));
  }
  return verts;
}

StarBody body_from_density(const SphereField& m, int n) {
  if (n < 2 || n > 4) throw std::invalid_argument("body_from_density: dimension must be in [2,4]");
  int mesh = n == 2 ? 4096 : 16384;
  for (const Vec& u : direction_mesh(n, mesh)) {
    double v = m.eval(u);
    if (!(v > 0.0))
      throw std::invalid_argument("body_from_density: non-positive density at direction " +
                                  dir_string(u, n));
  }
  StarBody body;
  body.n = n;
  body.family = Family::Custom;
  body.radial.eval = [m, n](const Vec& u) { return std::pow(m.eval(u), 1.0 / n); };
  body.radial.positive = true;
  body.radial.smoothness = m.smoothness;
  double mr = 0.0;
  for (const Vec& u : direction_mesh(n, mesh)) mr = std::max(mr, body.radial.eval(u));
  body.max_radius = mr * 1.05;  // mesh sampling slack; box only, membership uses the gauge
  body.descriptor = "density-body";
  return body;
}

Rotation Rotation::identity(int n) {
  Rotation r;
  r.n = n;
  for (int i = 0; i < n; ++i) r.m[static_cast<std::size_t>(4 * i + i)] = 1.0;
  r.is_identity = true;
  r.id = "identity";
  return r;
}

Rotation Rotation::angle2d(double theta, std::string id) {
  Rotation r;
  r.n = 2;
  r.m[0] = std::cos(theta);
  r.m[1] = -std::sin(theta);
  r.m[4] = std::sin(theta);
  r.m[5] = std::cos(theta);
  r.is_identity = theta == 0.0;
  r.id = id.empty() ? "angle=" + std::to_string(theta) : std::move(id);
  return r;
}

Rotation Rotation::from_matrix(int n, const std::array<double, 16>& m, std::string id) {
  Rotation r;
  r.n = n;
  r.m = m;
  r.is_identity = false;
  r.id = std::move(id);
  if (r.orthogonality_residual() > 1e-12)
    throw std::invalid_argument("rotation: matrix not orthogonal to 1e-12");
  if (std::abs(r.determinant() - 1.0) > 1e-12)
    throw std::invalid_argument("rotation: determinant not +1 to 1e-12");
  return r;
}

double Rotation::orthogonality_residual() const {
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int l = 0; l < n; ++l)
        s += m[static_cast<std::size_t>(4 * l + i)] * m[static_cast<std::size_t>(4 * l + j)];
      worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

double Rotation::determinant() const {
  // n <= 4: Laplace expansion via a small dense routine.
  double a[4][4];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = m[static_cast<std::size_t>(4 * i + j)];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  if (n == 3)
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  double det = 0.0;
  for (int c = 0; c < 4; ++c) {
    double sub[3][3];
    for (int i = 1; i < 4; ++i) {
      int jj = 0;
      for (int j = 0; j < 4; ++j) {
        if (j == c) continue;
        sub[i - 1][jj++] = a[i][j];
      }
    }
    double d3 = sub[0][0] * (sub[1][1] * sub[2][2] - sub[1][2] * sub[2][1]) -
                sub[0][1] * (sub[1][0] * sub[2][2] - sub[1][2] * sub[2][0]) +
                sub[0][2] * (sub[1][0] * sub[2][1] - sub[1][1] * sub[2][0]);
    det += ((c % 2) ? -1.0 : 1.0) * a[0][c] * d3;
  }
  return det;
}

std::function<double(const Vec&)> homogeneous_extension(const SphereField& f, int n) {
  return [f, n](const Vec& x) {
    double r = norm(x, n);
    if (r == 0.0) throw std::domain_error("homogeneous extension: evaluation at the origin");
    return f.eval(scaled(x, 1.0 / r, n));
  };
}

std::pair<SphereField, SphereField> positive_decomposition(const SphereField& f, int n) {
  int mesh = n == 2 ? 4096 : 16384;
  double mn = std::numeric_limits<double>::infinity();
  for (const Vec& u : direction_mesh(n, mesh)) mn = std::min(mn, f.eval(u));
  double c = std::abs(mn) + 1.0;
  SphereField plus;
  plus.eval = [f, c](const Vec& u) { return f.eval(u) + c; };
  plus.positive = true;
  plus.smoothness = f.smoothness;
  return {plus, constant_field(c)};
}

Vec outward_normal(const StarBody& body, const Vec& theta) {
  Vec x = scaled(theta, body.radial_at(theta), body.n);
  if (body.family == Family::Polygon) {
    // Active facet; ties flag a vertex direction.
    double best = -1.0, second = -1.0;
    std::size_t bi = 0;
    for (std::size_t i = 0; i < body.facet_normals.size(); ++i) {
      double v = dot(body.facet_normals[i], x, 2) / body.facet_offsets[i];
      if (v > best) {
        second = best;
        best = v;
        bi = i;
      } else if (v > second) {
        second = v;
      }
    }
    if (best - second <= 1e-9 * std::abs(best))
      throw std::domain_error("outward_normal: polygon vertex direction " + dir_string(theta, 2));
    return body.facet_normals[bi];
  }
  // Gradient of the gauge by central differences; the gauge is 1-homogeneous
  // so its gradient at the boundary point is parallel to the normal.
  double h = 1e-6 * std::max(1.0, norm(x, body.n));
  Vec g{};
  for (int i = 0; i < body.n; ++i) {
    Vec xp = x, xm = x;
    xp[static_cast<std::size_t>(i)] += h;
    xm[static_cast<std::size_t>(i)] -= h;
    g[static_cast<std::size_t>(i)] = (body.gauge(xp) - body.gauge(xm)) / (2.0 * h);
  }
  return normalized(g, body.n);
}

double radon_nikodym(const StarBody& body, const Vec& theta) {
  Vec x = scaled(theta, body.radial_at(theta), body.n);
  Vec nx = outward_normal(body, theta);
  double xn = dot(x, nx, body.n);
  if (!(xn > 0.0)) throw std::domain_error("radon_nikodym: (x, n(x)) not positive");
  return std::pow(norm(x, body.n), body.n) / xn;
}

std::vector<Vec> direction_mesh(int n, int count) {
  std::vector<Vec> mesh;
  mesh.reserve(static_cast<std::size_t>(count));
  if (n == 2) {
    for (int i = 0; i < count; ++i)
      mesh.push_back(unit_from_angle(2.0 * std::numbers::pi * (i + 0.5) / count));
  } else if (n == 3) {
    // Fibonacci sphere.
    const double ga = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      double z = 1.0 - (2.0 * i + 1.0) / count;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double phi = ga * i;
      mesh.push_back(make_vec(r * std::cos(phi), r * std::sin(phi), z));
    }
  } else {
    CounterRng rng{0xd1ec7104u};
    for (int i = 0; i < count; ++i) {
      auto [g0, g1] = rng.gaussian_pair(2 * static_cast<std::uint64_t>(i));
      auto [g2, g3] = rng.gaussian_pair(2 * static_cast<std::uint64_t>(i) + 1);
      Vec v{g0, g1, g2, g3};
      mesh.push_back(normalized(v, n));
    }
  }
  return mesh;
}

}  // namespace latproj
