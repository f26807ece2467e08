#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latproj/geometry.hpp"
#include "latproj/lattice.hpp"
#include "latproj/quadrature.hpp"

namespace latproj {

struct ResidualRecord {
  double rho = 0.0;
  std::string rotation_id;
  double weighted_count = 0.0;
  double discrete_value = 0.0;
  double target = 0.0;
  double residual = 0.0;  // target - discrete_value, exact by construction
  std::int64_t boundary_hits = 0;
};

struct ResidualSeries {
  std::vector<ResidualRecord> records;
  std::string body_desc, f_desc, m_desc;
  double target = 0.0;
};

// One record per rho; the target integral is computed once (or supplied).
ResidualSeries residual_series(const StarBody& body, const SphereField& f, const SphereField& m,
                               std::span<const double> rho_grid, const Rotation& rotation,
                               int workers = 1, std::optional<double> precomputed_target = {});

enum class FitMethod { AllPoints, DyadicEnvelope };

struct FitWindow {
  double rho_min = 0.0, rho_max = 0.0;
};

struct ExponentFit {
  double slope = 0.0, intercept = 0.0, r_squared = 0.0;
  FitWindow window;
  FitMethod method = FitMethod::DyadicEnvelope;
  int floor_dropped = 0;  // points discarded by the |R| floor
  int points_used = 0;
};

// Log-log least squares of |R| against rho; the dyadic-envelope method fits
// per-dyadic-block maxima, matching the envelope semantics of the asymptotic
// bounds. Points with |R| < 1e-13 |target| are dropped and counted.
ExponentFit fit_envelope_exponent(const ResidualSeries& series, FitWindow window, FitMethod method);
ExponentFit fit_envelope_exponent(std::span<const double> rho, std::span<const double> abs_residual,
                                  double target, FitWindow window, FitMethod method);

struct TheoryExponents {
  int n = 2;
  std::string family;
  std::optional<int> k;
  double positive_curvature_exp = 0.0;  // -2n/(n+1)
  // Superellipsoid (Theorem-B) data, present when k is set:
  double A = 0.0, B = 0.0;
  double superellipsoid_exp = 0.0;  // A - n
  std::vector<double> alpha;        // alpha_j = j/(2k) + (n-j-1)/2, j = 0..n-1
  double beta = 0.0;                // (k-1)/(2k-1)
  bool best_possible = false;       // A > B
  double polygon_rational_exp = 0.0;   // (n-1) - n
  double polygon_algebraic_exp = 0.0;  // eps - n with eps -> 0+
};

// family in {positive-curvature, superellipsoid, polygon-rational,
// polygon-algebraic}; superellipsoid requires k.
TheoryExponents theory_exponents(int n, const std::string& family, std::optional<int> k = {});

struct RotationAverage {
  std::vector<double> rho;
  std::vector<double> mean_abs_residual;
  std::vector<double> std_error;
  std::vector<ResidualSeries> per_rotation;
  ExponentFit fit;
  double target = 0.0;
  int num_rotations = 0;
};

// Haar-distributed rotation ensemble (uniform angle for n = 2, uniform unit
// quaternion for n = 3); per-rho sample means of |R| with an envelope fit.
RotationAverage rotation_average(const StarBody& body, const SphereField& f, const SphereField& m,
                                 std::span<const double> rho_grid, int num_rotations,
                                 std::uint64_t seed, int workers = 1);

Rotation haar_rotation(int n, std::uint64_t seed, std::uint64_t index);

// Geometric rho grid with a seeded half-spacing jitter, avoiding systematic
// boundary ties at integer or rational rho.
std::vector<double> rho_grid_geometric(double start, double stop, int per_octave,
                                       std::uint64_t jitter_seed);

}  // namespace latproj
