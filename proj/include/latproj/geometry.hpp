#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "latproj/vec.hpp"

namespace latproj {

// Scalar function on S^{n-1}. Evaluators must be pure; geometry objects are
// immutable after construction and safe to share across workers.
struct SphereField {
  std::function<double(const Vec&)> eval;
  std::string smoothness = "smooth";  // smooth | piecewise-smooth
  bool positive = false;              // required when used as a density
  std::optional<double> constant;     // set when the field is a known constant

  double operator()(const Vec& u) const { return eval(u); }
};

SphereField constant_field(double c);
// n = 2 convenience: build a field from an angle function g(theta).
SphereField field_from_angle(std::function<double(double)> g,
                             std::string smoothness = "smooth",
                             bool positive = false);

enum class Family { Ball, Ellipsoid, Superellipsoid, Polygon, Custom };

// Compact star-shaped body with the origin interior, described by a positive
// radial function r(theta). Built-in families also carry a closed-form gauge
// so membership tests avoid transcendental round-off; the radial form is kept
// for cross-checks.
struct StarBody {
  int n = 2;
  Family family = Family::Ball;
  std::vector<double> axes;        // ellipsoid semi-axes
  int k = 2;                       // superellipsoid exponent parameter
  std::vector<Vec> facet_normals;  // polygon: outward unit normals
  std::vector<double> facet_offsets;
  SphereField radial;
  double max_radius = 1.0;
  std::string descriptor = "ball";

  // Minkowski functional: gauge(x) <= rho iff x in rho*D; gauge(0) = 0.
  double gauge(const Vec& x) const;
  double radial_at(const Vec& u) const { return radial.eval(u); }
  // True when the body is invariant under sign flips of each coordinate
  // (all centered built-ins); row scans then know the gauge minimum is at 0.
  bool axis_symmetric() const { return family != Family::Polygon && family != Family::Custom; }
};

StarBody make_ball(int n);
StarBody make_ellipsoid(std::vector<double> axes);
StarBody make_superellipsoid(int n, int k);
// n = 2 convex polygon {x : (a_i, x) <= o_i}, origin interior (o_i > 0).
// Normals are supplied as direction numbers and normalized internally;
// vertices are derived from adjacent facet intersections.
StarBody make_polygon(std::vector<Vec> normals, std::vector<double> offsets);
StarBody make_square();  // [-1,1]^2

// Body whose boundary is r = m(theta)^{1/n}. Positivity of m is validated on
// a quasi-uniform mesh; a non-positive sample rejects with the direction.
StarBody body_from_density(const SphereField& m, int n);

std::vector<Vec> polygon_vertices(const StarBody& body);

struct Rotation {
  int n = 2;
  std::array<double, 16> m{};  // row-major n x n
  std::string id = "identity";
  bool is_identity = true;

  Vec apply(const Vec& x) const {
    if (is_identity) return x;
    Vec r{};
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += m[static_cast<std::size_t>(4 * i + j)] * x[static_cast<std::size_t>(j)];
      r[static_cast<std::size_t>(i)] = s;
    }
    return r;
  }

  static Rotation identity(int n);
  static Rotation angle2d(double theta, std::string id = "");
  // Validates orthogonality and det = +1 to 1e-12.
  static Rotation from_matrix(int n, const std::array<double, 16>& m, std::string id);
  double orthogonality_residual() const;
  double determinant() const;
};

// Weight-zero homogeneous extension F(x) = f(x/|x|); throws on x = 0.
std::function<double(const Vec&)> homogeneous_extension(const SphereField& f, int n);

// f = f_plus - f_minus with both strictly positive; c = |min sampled f| + 1.
std::pair<SphereField, SphereField> positive_decomposition(const SphereField& f, int n);

// Outward unit normal to the boundary at the radial image of theta.
Vec outward_normal(const StarBody& body, const Vec& theta);

// Radon-Nikodym factor ds/dtheta of the radial map: |x|^n / (x, n(x)).
// Polygon vertices are rejected with a diagnostic.
double radon_nikodym(const StarBody& body, const Vec& theta);

// Quasi-uniform direction mesh (uniform angles for n=2, Fibonacci for n=3,
// seeded low-discrepancy normals for n=4).
std::vector<Vec> direction_mesh(int n, int count);

}  // namespace latproj
