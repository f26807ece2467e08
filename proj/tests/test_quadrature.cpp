#include <doctest.h>

#include <cmath>
#include <numbers>

#include "latproj/quadrature.hpp"
#include "oracle.hpp"

using namespace latproj;
constexpr double kPi = std::numbers::pi;

TEST_CASE("rule weights sum to the sphere measure") {
  QuadratureRule c = circle_rule();
  double sc = 0.0;
  for (double w : c.weights) sc += w;
  CHECK(sc == doctest::Approx(2 * kPi).epsilon(1e-13));

  QuadratureRule s = sphere_rule();
  double ss = 0.0;
  for (double w : s.weights) ss += w;
  CHECK(ss == doctest::Approx(4 * kPi).epsilon(1e-12));
  for (const Vec& u : s.nodes) CHECK(norm(u, 3) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("periodic trapezoid is exact on low trigonometric polynomials") {
  QuadratureRule c = circle_rule(64);
  for (int deg = 1; deg <= 8; ++deg) {
    double got = sphere_integral(
        [deg](const Vec& u) {
          double t = std::atan2(u[1], u[0]);
          return std::cos(deg * t) + std::sin(deg * t);
        },
        c);
    CHECK(std::abs(got) < 1e-12);
  }
}

TEST_CASE("cos^2 integrates to pi, checked against a fine Riemann oracle") {
  auto integrand = [](const Vec& u) { return u[0] * u[0]; };
  double got = sphere_integral(integrand, circle_rule());
  CHECK(got == doctest::Approx(kPi).epsilon(1e-13));
  // Independent oracle: midpoint Riemann sum with 10^6 nodes.
  double h = 2 * kPi / 1.0e6;
  double s = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    double t = (i + 0.5) * h;
    s += std::cos(t) * std::cos(t);
  }
  CHECK(got == doctest::Approx(s * h).epsilon(1e-10));
}

TEST_CASE("sphere rule integrates z^2 to 4pi/3") {
  double got = sphere_integral([](const Vec& u) { return u[2] * u[2]; }, sphere_rule());
  CHECK(got == doctest::Approx(4 * kPi / 3).epsilon(1e-12));
}

TEST_CASE("polygon-adapted rule resolves kinked densities") {
  // The square's density r(theta)^2 has kinks at the vertex directions;
  // its integral is twice the square's area, exactly 8.
  StarBody sq = make_square();
  QuadratureRule rule = body_adapted_rule(sq);
  SphereField m;
  SphereField radial = sq.radial;
  m.eval = [radial](const Vec& u) { double r = radial.eval(u); return r * r; };
  double got = sphere_integral(constant_field(1.0), m, rule);
  CHECK(got == doctest::Approx(8.0).epsilon(1e-13));
  // Smooth bodies fall back to the default rule.
  CHECK(body_adapted_rule(make_ball(2)).nodes.size() == default_rule(2).nodes.size());
}

TEST_CASE("gauss-legendre nodes") {
  std::vector<double> x, w;
  gauss_legendre(16, x, w);
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += w[i];
    s2 += w[i] * x[i] * x[i];
  }
  CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("monte carlo disk area approximates pi") {
  StarBody disk = make_ball(2);
  MonteCarloEstimate est = body_integral([](const Vec&) { return 1.0; }, disk, 2'000'000, 7);
  CHECK(std::abs(est.value - kPi) < 4 * est.std_error);
  CHECK(est.std_error < 5e-3);
  // Reproducible per seed.
  MonteCarloEstimate again = body_integral([](const Vec&) { return 1.0; }, disk, 2'000'000, 7);
  CHECK(est.value == again.value);
}

TEST_CASE("radial identity: integral over D of F = (1/n) integral of f m") {
  SUBCASE("f = 1, m = 1 on the disk: both sides pi") {
    double rhs = body_integral_exact(constant_field(1.0), constant_field(1.0), circle_rule());
    CHECK(rhs == doctest::Approx(kPi).epsilon(1e-13));
  }
  SUBCASE("f = u1^2 on the disk: both sides pi/2") {
    SphereField f;
    f.eval = [](const Vec& u) { return u[0] * u[0]; };
    double rhs = body_integral_exact(f, constant_field(1.0), circle_rule());
    CHECK(rhs == doctest::Approx(kPi / 2).epsilon(1e-13));
    StarBody disk = make_ball(2);
    IdentityCheck chk = verify_identity(f, constant_field(1.0), disk, 4'000'000, 11);
    CHECK(chk.rhs == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(chk.sigmas < 3.0);
  }
  SUBCASE("non-constant density body") {
    SphereField m = field_from_angle([](double t) { return 1.0 + 0.5 * std::cos(t); }, "smooth", true);
    StarBody body = body_from_density(m, 2);
    SphereField f;
    f.eval = [](const Vec& u) { return 1.0 + 0.25 * u[1]; };
    IdentityCheck chk = verify_identity(f, m, body, 4'000'000, 23);
    CHECK(chk.sigmas < 3.0);
    CHECK(chk.rel_discrepancy < 1e-2);
  }
}
