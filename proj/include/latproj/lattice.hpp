#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "latproj/geometry.hpp"

namespace latproj {

// Enumeration would exceed the configured budget; never silently truncated.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CountRequest {
  StarBody body;
  double rho = 1.0;
  Rotation rotation = Rotation::identity(2);
  // Weight-zero homogeneous weight F; empty means F == 1 (unit weights).
  std::function<double(const Vec&)> weight;
  double include_tol = 1e-12;   // member iff gauge(gamma N) <= rho*(1+include_tol)
  double boundary_band = 1e-9;  // |gauge - rho| <= band*rho counts as a boundary hit
  std::int64_t row_budget = std::int64_t{1} << 31;
};

struct CountResult {
  double rho = 0.0;
  std::string rotation_id;
  double weighted_count = 0.0;
  std::int64_t point_count = 0;
  std::int64_t boundary_hits = 0;
};

struct Slab {
  std::int64_t lo = 0, hi = -1;  // outer-coordinate range, inclusive; lo > hi is empty
};

struct SlabSum {
  double weighted = 0.0;
  std::int64_t points = 0;
  std::int64_t boundary_hits = 0;
};

// Membership predicate shared by the scanline enumerator and the brute-force
// oracle. Unrotated superellipsoids take the exact integer path
// sum N_i^{2k} <= floor(rho^{2k}) when representable.
bool lattice_member(const CountRequest& req, const std::array<std::int64_t, 4>& N);

// Half-width of the integer bounding box containing rho*D for any rotation.
std::int64_t bounding_halfwidth(const CountRequest& req);

// Sum of F(gamma N) over nonzero lattice points with gauge(gamma N) within
// rho*(1+tol); deterministic for fixed slab partition, independent of workers.
CountResult weighted_count(const CountRequest& req, int workers = 1);

double discrete_measure_value(const CountResult& result, int n);

// Partial sum over one outer-coordinate slab (compensated accumulation).
SlabSum enumerate_slab(const CountRequest& req, const Slab& slab);

// Combines slab sums after checking the slabs partition the box; overlap or
// gaps are rejected. Reduction order is fixed by slab index.
CountResult combine_slabs(const CountRequest& req, std::span<const Slab> slabs);

// All included points (small rho only); used for inclusion-set comparisons.
std::vector<std::array<std::int64_t, 4>> enumerate_points(const CountRequest& req);

}  // namespace latproj
