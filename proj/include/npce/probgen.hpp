#pragma once

// Seeded instance generation. Reproducibility contract: all randomness comes
// from one SplitMix64 stream per instance, consumed in the documented order,
// so the same GenSpec always produces bit-identical numbers, in any
// implementation of these formulas.
//
// Stream order for planted_instance:
//   1. balance matrix A: entries row-major; per entry one inclusion draw,
//      plus one value draw if the entry is kept (see random_productive);
//   2. technology matrix B: same scheme;
//   3. production matrix P: 2 sweeps of adjacent Givens angles (skipped
//      entirely when the spread is zero);
//   4. consumption matrix C (as -spd): same;
//   5. factor matrix R: same;
//   6. planted point: 2n+m uniform draws in [0.5, 5);
//   7. boundary planting only: one Fisher-Yates shuffle of 0..2n+m-1
//      (indices drawn high to low via next_below), then one slack draw in
//      [0.5, 2) per zeroed component, in ascending component order;
//   8. planting "none" only: 2n+m offset draws uniform in [-2, 2).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "npce/instance.hpp"

namespace npce {

// SplitMix64: state advances by the golden-gamma constant, output is the
// mixed state. next_double maps the top 53 bits onto [0, 1).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

 private:
  std::uint64_t state_;
};

enum class Planting { None, Interior, Boundary };

struct GenSpec {
  int n = 1;
  int m = 1;
  std::uint64_t seed = 0;
  double density = 0.5;
  double alpha = 1.0;  // target modulus of p
  double beta = 1.0;   // target modulus of c
  double gamma = 1.0;  // target modulus of r
  Planting planting = Planting::Interior;
  double boundary_fraction = 0.25;  // share of components planted at zero
  double spread_ratio = 3.0;        // eigenvalue spread relative to the modulus
};

namespace detail {

// Nonnegative n×n matrix, no zero row or column (the cyclic superdiagonal
// (i, (i+1) mod n) is always kept), values in [0.1, 1), then scaled so the
// largest row sum is exactly 0.9, which bounds the spectral radius by 0.9.
inline Matrix random_productive_from(int n, double density, SplitMix64& rng) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double u = rng.next_double();
      const bool keep = (j == (i + 1) % n) || u < density;
      if (keep) a(i, j) = 0.1 + 0.9 * rng.next_double();
    }
  double max_row_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += a(i, j);
    max_row_sum = std::max(max_row_sum, s);
  }
  a *= 0.9 / max_row_sum;
  return a;
}

// m×n nonnegative matrix with forced entries (i, i mod n) and (j mod m, j)
// covering every row and column.
inline Matrix random_technology_from(int m, int n, double density, SplitMix64& rng) {
  Matrix b(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      const double u = rng.next_double();
      const bool keep = (j == i % n) || (i == j % m) || u < density;
      if (keep) b(i, j) = 0.1 + 0.9 * rng.next_double();
    }
  return b;
}

// Symmetric positive definite matrix with spectrum exactly [base, base+spread]
// (evenly spaced diagonal, then two sweeps of seeded adjacent Givens
// rotations, which preserve the eigenvalues). A zero spread short-circuits to
// base·I and consumes no draws.
inline Matrix rotated_spd_from(int dim, double base, double spread, SplitMix64& rng) {
  Matrix s(dim, dim);
  for (int k = 0; k < dim; ++k)
    s(k, k) = base + (dim > 1 ? spread * k / (dim - 1) : 0.0);
  if (spread == 0.0 || dim == 1) return s;
  for (int pass = 0; pass < 2; ++pass) {
    for (int i = 0; i + 1 < dim; ++i) {
      const double angle = 2.0 * M_PI * rng.next_double();
      const double c = std::cos(angle);
      const double sn = std::sin(angle);
      const int j = i + 1;
      for (int k = 0; k < dim; ++k) {
        const double ski = s(k, i);
        const double skj = s(k, j);
        s(k, i) = c * ski - sn * skj;
        s(k, j) = sn * ski + c * skj;
      }
      for (int k = 0; k < dim; ++k) {
        const double sik = s(i, k);
        const double sjk = s(j, k);
        s(i, k) = c * sik - sn * sjk;
        s(j, k) = sn * sik + c * sjk;
      }
    }
  }
  // rotations applied both sides; symmetrize away the last-bit drift
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      const double v = 0.5 * (s(i, j) + s(j, i));
      s(i, j) = v;
      s(j, i) = v;
    }
  return s;
}

}  // namespace detail

inline Matrix random_productive(int n, double density, std::uint64_t seed) {
  if (n < 1) throw DimensionMismatch("random_productive: n must be positive");
  SplitMix64 rng(seed);
  return detail::random_productive_from(n, density, rng);
}

// Offsets that plant the equilibrium: q = (I-A)ᵀλ* - Bᵀv* - Px*,
// d = (I-A)x* - Cλ*, s = Bx* - Rv* give g(y*) = 0; each zeroed component
// then gets its offset shifted so the matching g-component equals minus the
// requested slack, preserving complementarity.
inline OperatorTriple plant_offsets(const Economy& eco, const Matrix& p, const Matrix& c,
                                    const Matrix& r, const Point& ystar,
                                    const std::vector<int>& zero_set, const Vec& slacks) {
  const int n = eco.n;
  const int m = eco.m;
  if (zero_set.size() != slacks.size())
    throw DimensionMismatch("plant_offsets: one slack per zeroed component");
  const Vec at_lambda = matvec_transpose(eco.balance, ystar.lambda);
  const Vec ax = matvec(eco.balance, ystar.x);
  const Vec bt_v = matvec_transpose(eco.technology, ystar.v);
  const Vec bx = matvec(eco.technology, ystar.x);
  const Vec px = matvec(p, ystar.x);
  const Vec cl = matvec(c, ystar.lambda);
  const Vec rv = matvec(r, ystar.v);
  Vec q(n), d(n), s(m);
  for (int j = 0; j < n; ++j) q[j] = (ystar.lambda[j] - at_lambda[j]) - bt_v[j] - px[j];
  for (int j = 0; j < n; ++j) d[j] = (ystar.x[j] - ax[j]) - cl[j];
  for (int i = 0; i < m; ++i) s[i] = bx[i] - rv[i];
  const Vec flat = ystar.flatten();
  for (size_t k = 0; k < zero_set.size(); ++k) {
    const int idx = zero_set[k];
    if (flat[idx] != 0.0)
      throw BadModuli("plant_offsets: zeroed component " + std::to_string(idx) + " is not zero");
    const double slack = slacks[k];
    if (idx < n)
      q[idx] += slack;
    else if (idx < 2 * n)
      d[idx - n] -= slack;
    else
      s[idx - 2 * n] += slack;
  }
  return OperatorTriple{{p, q}, {c, d}, {r, s}};
}

inline Instance planted_instance(const GenSpec& spec) {
  if (spec.n < 1 || spec.m < 1) throw DimensionMismatch("planted_instance: n, m must be positive");
  if (spec.planting != Planting::None &&
      (spec.alpha <= 0.0 || spec.beta <= 0.0 || spec.gamma <= 0.0))
    throw BadModuli("planted_instance: planting needs strictly positive target moduli");

  SplitMix64 rng(spec.seed);
  const Matrix a = detail::random_productive_from(spec.n, spec.density, rng);
  const Matrix b = detail::random_technology_from(spec.m, spec.n, spec.density, rng);
  const Economy eco = validate_economy(a, b);

  const Matrix p = detail::rotated_spd_from(spec.n, spec.alpha, spec.spread_ratio * spec.alpha, rng);
  Matrix c = detail::rotated_spd_from(spec.n, spec.beta, spec.spread_ratio * spec.beta, rng);
  c *= -1.0;
  const Matrix r = detail::rotated_spd_from(spec.m, spec.gamma, spec.spread_ratio * spec.gamma, rng);

  const int d = 2 * spec.n + spec.m;
  Instance inst;
  inst.eco = eco;
  inst.meta.seed = spec.seed;
  inst.meta.generator_version = "npce-probgen-1";

  if (spec.planting == Planting::None) {
    Vec offsets(d);
    // stream step 8: y* draws are skipped, offsets drawn instead
    for (int k = 0; k < d; ++k) offsets[k] = -2.0 + 4.0 * rng.next_double();
    Vec q(offsets.begin(), offsets.begin() + spec.n);
    Vec dd(offsets.begin() + spec.n, offsets.begin() + 2 * spec.n);
    Vec s(offsets.begin() + 2 * spec.n, offsets.end());
    inst.ops = OperatorTriple{{p, q}, {c, dd}, {r, s}};
    inst.meta.notes = "random offsets, no planted point";
    return inst;
  }

  Vec flat(d);
  for (int k = 0; k < d; ++k) flat[k] = 0.5 + 4.5 * rng.next_double();
  std::vector<int> zero_set;
  Vec slacks;
  if (spec.planting == Planting::Boundary) {
    int count = static_cast<int>(std::lround(spec.boundary_fraction * d));
    count = std::max(1, std::min(count, d));
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    for (int i = d - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i + 1)));
      std::swap(order[i], order[j]);
    }
    zero_set.assign(order.begin(), order.begin() + count);
    std::sort(zero_set.begin(), zero_set.end());
    for (int idx : zero_set) {
      flat[idx] = 0.0;
      slacks.push_back(0.5 + 1.5 * rng.next_double());
    }
  }
  const Point ystar = Point::unflatten(flat, spec.n, spec.m);
  inst.ops = plant_offsets(eco, p, c, r, ystar, zero_set, slacks);
  inst.planted = ystar;
  inst.meta.notes =
      "affine operators; nonnegative operator range holds near the planted point only";
  return inst;
}

// delta = 0 family: zero curvature everywhere, g reduces to its skew bilinear
// part plus the given offsets. Callers are responsible for offsets that admit
// a solution; reference::r3() is the shipped default.
inline Instance monotone_only_instance(int n, int m, std::uint64_t seed, const Vec& q,
                                       const Vec& d, const Vec& s) {
  if (static_cast<int>(q.size()) != n || static_cast<int>(d.size()) != n ||
      static_cast<int>(s.size()) != m)
    throw DimensionMismatch("monotone_only_instance: offset lengths must be n, n, m");
  SplitMix64 rng(seed);
  const Matrix a = detail::random_productive_from(n, 0.5, rng);
  const Matrix b = detail::random_technology_from(m, n, 0.5, rng);
  Instance inst;
  inst.eco = validate_economy(a, b);
  inst.ops = OperatorTriple{{Matrix(n, n), q}, {Matrix(n, n), d}, {Matrix(m, m), s}};
  inst.meta.seed = seed;
  inst.meta.generator_version = "npce-probgen-1";
  inst.meta.notes = "monotone-only: zero curvature, delta = 0";
  return inst;
}

// ---------------------------------------------------------------------------
// Reference instances used throughout the tests and the docs. All three share
// the one-product, one-factor economy A = [0.5], B = [1].

namespace reference {

// Interior equilibrium at (20/9, 80/9, 11/9):
//   p(x) = x + 1, c(λ) = 10 - λ, r(v) = v + 1.
inline Instance r1() {
  Instance inst;
  inst.eco = validate_economy(Matrix::from_rows({{0.5}}), Matrix::from_rows({{1.0}}));
  inst.ops = OperatorTriple{{Matrix::from_rows({{1.0}}), {1.0}},
                            {Matrix::from_rows({{-1.0}}), {10.0}},
                            {Matrix::from_rows({{1.0}}), {1.0}}};
  inst.planted = Point{{20.0 / 9.0}, {80.0 / 9.0}, {11.0 / 9.0}};
  inst.meta.generator_version = "npce-reference";
  inst.meta.notes = "interior reference instance";
  return inst;
}

// Boundary equilibrium at (3.2, 8.4, 0): same as r1 except the factor supply
// offset is 5, which leaves a factor slack of -1.8 against a zero price.
inline Instance r2() {
  Instance inst = r1();
  inst.ops.factor_supply.offset = {5.0};
  inst.planted = Point{{3.2}, {8.4}, {0.0}};
  inst.meta.notes = "boundary reference instance";
  return inst;
}

// Monotone-only instance (delta = 0): p ≡ 1, c ≡ 1, r ≡ 2. The solution set
// is the ray {x = 2, 0.5·λ - v = 1, v >= 0}; no single planted point.
inline Instance r3() {
  Instance inst;
  inst.eco = validate_economy(Matrix::from_rows({{0.5}}), Matrix::from_rows({{1.0}}));
  inst.ops = OperatorTriple{{Matrix(1, 1), {1.0}}, {Matrix(1, 1), {1.0}}, {Matrix(1, 1), {2.0}}};
  inst.meta.generator_version = "npce-reference";
  inst.meta.notes = "monotone-only reference instance; solution ray {x=2, 0.5*lambda-v=1}";
  return inst;
}

// Euclidean distance from a point to r3's solution ray.
inline double r3_ray_distance(const Point& y) {
  const double x = y.x[0];
  const double lambda = y.lambda[0];
  const double v = y.v[0];
  const double w = std::max((2.0 * (lambda - 2.0) + v) / 5.0, 0.0);
  const double dl = lambda - (2.0 + 2.0 * w);
  const double dv = v - w;
  return std::sqrt((x - 2.0) * (x - 2.0) + dl * dl + dv * dv);
}

}  // namespace reference

}  // namespace npce
