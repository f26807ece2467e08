#include "latproj/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace latproj {

namespace {

struct Kahan {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

double pairwise_reduce(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 0) return 0.0;
  if (hi - lo == 1) return v[lo];
  std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_reduce(v, lo, mid) + pairwise_reduce(v, mid, hi);
}

constexpr long double kInt128Limit = 8.5070591730234616e37L;  // 2^126

// Row scanner: the gauge restricted to a lattice row is convex, so the
// included integers form an interval found by bisection on the membership
// predicate; the real minimizer seeds the search.
struct Scanner {
  const CountRequest* req;
  int n;
  std::int64_t B;
  bool fast_sym;  // unrotated centered family: row minimum is at x = 0
  bool int_fast;  // exact integer superellipsoid membership
  int two_k = 0;
  unsigned __int128 Q = 0;
  double t_in, t_plus, t_minus;
  bool unit_weight;

  explicit Scanner(const CountRequest& r) : req(&r), n(r.body.n) {
    B = bounding_halfwidth(r);
    fast_sym = r.rotation.is_identity && r.body.axis_symmetric();
    int_fast = false;
    if (r.body.family == Family::Superellipsoid && r.rotation.is_identity) {
      two_k = 2 * r.body.k;
      long double q = powl(static_cast<long double>(r.rho), static_cast<long double>(two_k));
      if (q < kInt128Limit) {
        int_fast = true;
        Q = static_cast<unsigned __int128>(floorl(q));
      }
    }
    t_in = r.rho * (1.0 + r.include_tol);
    t_plus = r.rho * (1.0 + r.boundary_band);
    t_minus = r.rho * (1.0 - r.boundary_band);
    unit_weight = !static_cast<bool>(r.weight);
  }

  double gauge_real(double x, const std::array<std::int64_t, 4>& tail) const {
    Vec v{x, 0, 0, 0};
    for (int i = 1; i < n; ++i) v[static_cast<std::size_t>(i)] = static_cast<double>(tail[static_cast<std::size_t>(i)]);
    return req->body.gauge(req->rotation.apply(v));
  }

  bool member(std::int64_t x, const std::array<std::int64_t, 4>& tail) const {
    if (int_fast) {
      unsigned __int128 s = 0;
      for (int i = 0; i < n; ++i) {
        unsigned __int128 c = static_cast<unsigned __int128>(
            i == 0 ? (x < 0 ? -x : x) : (tail[static_cast<std::size_t>(i)] < 0 ? -tail[static_cast<std::size_t>(i)] : tail[static_cast<std::size_t>(i)]));
        if (c == 0) continue;
        unsigned __int128 t = 1;
        for (int j = 0; j < two_k; ++j) {
          if (t > Q / c) return false;  // term alone already exceeds Q
          t *= c;
        }
        if (s > Q - t) return false;
        s += t;
      }
      return s <= Q;
    }
    return gauge_real(static_cast<double>(x), tail) <= t_in;
  }

  template <typename Pred>
  std::int64_t largest_true(Pred&& p, std::int64_t known_true) const {
    if (p(B)) return B;
    std::int64_t a = known_true, b = B;  // p(a) true, p(b) false
    while (b - a > 1) {
      std::int64_t m = a + (b - a) / 2;
      if (p(m)) a = m; else b = m;
    }
    return a;
  }

  template <typename Pred>
  std::int64_t smallest_true(Pred&& p, std::int64_t known_true) const {
    if (p(-B)) return -B;
    std::int64_t a = -B, b = known_true;  // p(a) false, p(b) true
    while (b - a > 1) {
      std::int64_t m = a + (b - a) / 2;
      if (p(m)) b = m; else a = m;
    }
    return b;
  }

  // Bracket of width <= 0.5 containing a real minimizer of the row gauge.
  std::pair<double, double> argmin_bracket(const std::array<std::int64_t, 4>& tail) const {
    if (fast_sym) return {0.0, 0.0};
    double a = -static_cast<double>(B) - 1.0, b = static_cast<double>(B) + 1.0;
    int it = 0;
    while (b - a > 0.5 && it++ < 300) {
      double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
      if (gauge_real(m1, tail) <= gauge_real(m2, tail)) b = m2; else a = m1;
    }
    return {a, b};
  }

  // Number of integers x in the row with gauge <= t, given the argmin window.
  std::int64_t count_below(double t, std::int64_t wlo, std::int64_t whi,
                           const std::array<std::int64_t, 4>& tail) const {
    auto pred = [&](std::int64_t x) { return gauge_real(static_cast<double>(x), tail) <= t; };
    std::int64_t seed = B + 1;
    for (std::int64_t x = wlo; x <= whi; ++x)
      if (pred(x)) { seed = x; break; }
    if (seed > B) return 0;
    return largest_true(pred, seed) - smallest_true(pred, seed) + 1;
  }

  void scan_row(const std::array<std::int64_t, 4>& tail, Kahan& wsum, std::int64_t& points,
                std::int64_t& hits,
                std::vector<std::array<std::int64_t, 4>>* collect = nullptr) const {
    // Quick reject: every point in the row has |x| >= |tail|, and
    // gauge >= |x| / max_radius.
    double tn2 = 0.0;
    for (int i = 1; i < n; ++i) {
      double c = static_cast<double>(tail[static_cast<std::size_t>(i)]);
      tn2 += c * c;
    }
    if (std::sqrt(tn2) > t_plus * req->body.max_radius) return;

    auto [wa, wb] = argmin_bracket(tail);
    std::int64_t wlo = static_cast<std::int64_t>(std::floor(wa)) - 1;
    std::int64_t whi = static_cast<std::int64_t>(std::ceil(wb)) + 1;
    wlo = std::max(wlo, -B);
    whi = std::min(whi, B);

    std::int64_t seed = B + 1;
    for (std::int64_t x = wlo; x <= whi; ++x)
      if (member(x, tail)) { seed = x; break; }

    bool tail_zero = true;
    for (int i = 1; i < n; ++i) tail_zero = tail_zero && tail[static_cast<std::size_t>(i)] == 0;

    if (seed <= B) {
      auto pred = [&](std::int64_t x) { return member(x, tail); };
      std::int64_t hi = largest_true(pred, seed);
      std::int64_t lo = smallest_true(pred, seed);
      std::int64_t cnt = hi - lo + 1;
      bool has_origin = tail_zero && lo <= 0 && 0 <= hi;
      if (has_origin) --cnt;  // N = 0 never included
      points += cnt;
      if (unit_weight) {
        wsum.add(static_cast<double>(cnt));
      } else {
        for (std::int64_t x = lo; x <= hi; ++x) {
          if (tail_zero && x == 0) continue;
          Vec v{static_cast<double>(x), 0, 0, 0};
          for (int i = 1; i < n; ++i) v[static_cast<std::size_t>(i)] = static_cast<double>(tail[static_cast<std::size_t>(i)]);
          wsum.add(req->weight(req->rotation.apply(v)));
        }
      }
      if (collect) {
        for (std::int64_t x = lo; x <= hi; ++x) {
          if (tail_zero && x == 0) continue;
          std::array<std::int64_t, 4> N = tail;
          N[0] = x;
          collect->push_back(N);
        }
      }
    }
    hits += count_below(t_plus, wlo, whi, tail) - count_below(t_minus, wlo, whi, tail);
  }
};

void check_budget(const CountRequest& req, std::int64_t B) {
  double rows = 1.0;
  for (int i = 1; i < req.body.n; ++i) rows *= 2.0 * static_cast<double>(B) + 1.0;
  if (rows > static_cast<double>(req.row_budget))
    throw BudgetError("lattice enumeration budget exceeded: rho=" + std::to_string(req.rho) +
                      " needs ~" + std::to_string(rows) + " rows (budget " +
                      std::to_string(req.row_budget) + ")");
}

SlabSum scan_slab(const Scanner& sc, const Slab& slab,
                  std::vector<std::array<std::int64_t, 4>>* collect = nullptr) {
  Kahan wsum;
  SlabSum out;
  const int n = sc.n;
  for (std::int64_t o = slab.lo; o <= slab.hi; ++o) {
    std::array<std::int64_t, 4> tail{0, 0, 0, 0};
    tail[static_cast<std::size_t>(n - 1)] = o;
    if (n == 2) {
      sc.scan_row(tail, wsum, out.points, out.boundary_hits, collect);
    } else if (n == 3) {
      for (std::int64_t y = -sc.B; y <= sc.B; ++y) {
        tail[1] = y;
        sc.scan_row(tail, wsum, out.points, out.boundary_hits, collect);
      }
    } else {
      for (std::int64_t z = -sc.B; z <= sc.B; ++z) {
        tail[2] = z;
        for (std::int64_t y = -sc.B; y <= sc.B; ++y) {
          tail[1] = y;
          sc.scan_row(tail, wsum, out.points, out.boundary_hits, collect);
        }
      }
    }
  }
  out.weighted = wsum.sum;
  return out;
}

}  // namespace

bool lattice_member(const CountRequest& req, const std::array<std::int64_t, 4>& N) {
  Scanner sc(req);
  std::array<std::int64_t, 4> tail = N;
  return sc.member(N[0], tail);
}

std::int64_t bounding_halfwidth(const CountRequest& req) {
  if (!(req.rho >= 0.0)) throw std::invalid_argument("weighted_count: rho must be >= 0");
  double r = req.rho * req.body.max_radius * (1.0 + 1e-9) + 1.0;
  if (r > 2.1e9) throw BudgetError("bounding box half-width exceeds enumeration budget");
  return static_cast<std::int64_t>(std::ceil(r));
}

CountResult weighted_count(const CountRequest& req, int workers) {
  if (req.body.n < 2 || req.body.n > 4)
    throw std::invalid_argument("weighted_count: dimension must be in {2,3,4}");
  if (req.rotation.n != req.body.n)
    throw std::invalid_argument("weighted_count: rotation dimension mismatch");
  Scanner sc(req);
  check_budget(req, sc.B);

  // Fixed slab partition (64 outer values per slab) independent of workers.
  constexpr std::int64_t kSlabSize = 64;
  std::vector<Slab> slabs;
  for (std::int64_t lo = -sc.B; lo <= sc.B; lo += kSlabSize)
    slabs.push_back({lo, std::min(lo + kSlabSize - 1, sc.B)});

  std::vector<SlabSum> sums(slabs.size());
  int nw = std::max(1, workers);
  if (nw == 1 || slabs.size() == 1) {
    for (std::size_t i = 0; i < slabs.size(); ++i) sums[i] = scan_slab(sc, slabs[i]);
  } else {
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= slabs.size()) return;
        sums[i] = scan_slab(sc, slabs[i]);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < nw; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  CountResult res;
  res.rho = req.rho;
  res.rotation_id = req.rotation.id;
  std::vector<double> w(sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) {
    w[i] = sums[i].weighted;
    res.point_count += sums[i].points;
    res.boundary_hits += sums[i].boundary_hits;
  }
  res.weighted_count = sc.unit_weight ? static_cast<double>(res.point_count)
                                      : pairwise_reduce(w, 0, w.size());
  return res;
}

double discrete_measure_value(const CountResult& result, int n) {
  if (!(result.rho > 0.0)) throw std::invalid_argument("discrete_measure_value: rho must be > 0");
  return static_cast<double>(n) / std::pow(result.rho, n) * result.weighted_count;
}

SlabSum enumerate_slab(const CountRequest& req, const Slab& slab) {
  Scanner sc(req);
  if (slab.lo > slab.hi) return {};
  check_budget(req, sc.B);
  Slab clipped{std::max(slab.lo, -sc.B), std::min(slab.hi, sc.B)};
  if (clipped.lo > clipped.hi) return {};
  return scan_slab(sc, clipped);
}

CountResult combine_slabs(const CountRequest& req, std::span<const Slab> slabs) {
  Scanner sc(req);
  std::vector<Slab> nonempty;
  for (const Slab& s : slabs)
    if (s.lo <= s.hi) nonempty.push_back(s);
  std::vector<Slab> sorted = nonempty;
  std::sort(sorted.begin(), sorted.end(), [](const Slab& a, const Slab& b) { return a.lo < b.lo; });
  std::int64_t cursor = -sc.B;
  for (const Slab& s : sorted) {
    if (s.lo < cursor) throw std::invalid_argument("combine_slabs: overlapping slabs");
    if (s.lo > cursor) throw std::invalid_argument("combine_slabs: gap in slab partition");
    cursor = s.hi + 1;
  }
  if (cursor != sc.B + 1) throw std::invalid_argument("combine_slabs: slabs do not cover the box");

  CountResult res;
  res.rho = req.rho;
  res.rotation_id = req.rotation.id;
  std::vector<double> w;
  for (const Slab& s : nonempty) {
    SlabSum sum = scan_slab(sc, s);
    w.push_back(sum.weighted);
    res.point_count += sum.points;
    res.boundary_hits += sum.boundary_hits;
  }
  res.weighted_count = sc.unit_weight ? static_cast<double>(res.point_count)
                                      : pairwise_reduce(w, 0, w.size());
  return res;
}

std::vector<std::array<std::int64_t, 4>> enumerate_points(const CountRequest& req) {
  Scanner sc(req);
  check_budget(req, sc.B);
  std::vector<std::array<std::int64_t, 4>> pts;
  scan_slab(sc, Slab{-sc.B, sc.B}, &pts);
  return pts;
}

}  // namespace latproj
