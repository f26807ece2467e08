#pragma once

#include <complex>
#include <span>
#include <vector>

#include "latproj/geometry.hpp"

namespace latproj {

struct TransformBudget {
  double r_max = 512.0;      // largest admissible |y|
  int max_nodes = 1 << 22;   // angular quadrature cap
  double rel_tol = 1e-8;     // node-doubling convergence target
};

// Arc-length Fourier transform of g over the boundary curve (n = 2):
// integral over dD of g(x) exp(2 pi i (x, y)) ds.
std::complex<double> surface_transform(const StarBody& body, const SphereField& g, const Vec& y,
                                       const TransformBudget& budget = {});

// Transform over the shell D - (1/2)D weighted by the homogeneous extension
// of f; the radial factor integrates in closed form, so only the angular
// quadrature is oscillation-resolved.
std::complex<double> shell_transform(const StarBody& body, const SphereField& f, const Vec& y,
                                     const TransformBudget& budget = {});

enum class TransformKind { Surface, Shell };

struct DecayProfile {
  Vec direction{};
  std::vector<double> r_grid;
  std::vector<double> magnitudes;
  double fitted_alpha = 0.0;  // slope of log|Psi| on local maxima
  TransformKind kind = TransformKind::Surface;
  int j_vanishing = 0;        // vanishing coordinates of the direction
  double lambda_sup = 0.0;    // max over grid of r^{(n+1)/2} |Psi|
};

DecayProfile decay_profile(const StarBody& body, const SphereField& g, const Vec& direction,
                           std::span<const double> r_grid, TransformKind kind,
                           const TransformBudget& budget = {});

std::vector<DecayProfile> decay_sweep(const StarBody& body, const SphereField& g,
                                      std::span<const Vec> directions,
                                      std::span<const double> r_grid, TransformKind kind,
                                      const TransformBudget& budget = {});

// Linear r grid fine enough to resolve the oscillation lobes.
std::vector<double> transform_r_grid(double r_min, double r_max, double step = 0.2);

// Log-log slope fitted on strict local maxima of the magnitude samples.
double fit_local_maxima_slope(std::span<const double> r, std::span<const double> magnitude);

}  // namespace latproj
