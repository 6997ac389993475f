#pragma once

// The variational-inequality core: the composite variable y = (x, lambda, v),
// the pseudo-gradient g, projection onto the nonnegative orthant, the natural
// residual, and the equilibrium certificate (feasibility, complementarity,
// budget identity, per-constraint table).

#include <algorithm>
#include <cmath>
#include <vector>

#include "npce/operators.hpp"

namespace npce {

struct Point {
  Vec x;       // production quantities, length n
  Vec lambda;  // product prices, length n
  Vec v;       // factor prices, length m

  static Point zeros(int n, int m) {
    return Point{Vec(n, 0.0), Vec(n, 0.0), Vec(m, 0.0)};
  }

  static Point ones(int n, int m) {
    return Point{Vec(n, 1.0), Vec(n, 1.0), Vec(m, 1.0)};
  }

  int n() const { return static_cast<int>(x.size()); }
  int m() const { return static_cast<int>(v.size()); }

  // stacked as (x, lambda, v)
  Vec flatten() const {
    Vec out;
    out.reserve(x.size() + lambda.size() + v.size());
    out.insert(out.end(), x.begin(), x.end());
    out.insert(out.end(), lambda.begin(), lambda.end());
    out.insert(out.end(), v.begin(), v.end());
    return out;
  }

  static Point unflatten(const Vec& flat, int n, int m) {
    if (static_cast<int>(flat.size()) != 2 * n + m)
      throw DimensionMismatch("Point::unflatten: length is not 2n+m");
    Point p;
    p.x.assign(flat.begin(), flat.begin() + n);
    p.lambda.assign(flat.begin() + n, flat.begin() + 2 * n);
    p.v.assign(flat.begin() + 2 * n, flat.end());
    return p;
  }
};

inline double distance(const Point& a, const Point& b) {
  return distance(a.flatten(), b.flatten());
}

// g(y) = ((I-A)ᵀλ - p(x) - Bᵀv; c(λ) - (I-A)x; Bx - r(v)), stacked in the
// same (x, λ, v) order as Point::flatten.
inline Vec pseudo_gradient(const Economy& eco, const OperatorTriple& ops, const Point& y) {
  const int n = eco.n;
  const int m = eco.m;
  if (y.n() != n || static_cast<int>(y.lambda.size()) != n || y.m() != m)
    throw DimensionMismatch("pseudo_gradient: point does not match economy");
  const Vec px = eval(ops.production_cost, y.x);
  const Vec cl = eval(ops.consumption, y.lambda);
  const Vec rv = eval(ops.factor_supply, y.v);
  const Vec at_lambda = matvec_transpose(eco.balance, y.lambda);  // Aᵀλ
  const Vec ax = matvec(eco.balance, y.x);
  const Vec bt_v = matvec_transpose(eco.technology, y.v);  // Bᵀv
  const Vec bx = matvec(eco.technology, y.x);
  Vec g(2 * n + m);
  for (int j = 0; j < n; ++j) g[j] = (y.lambda[j] - at_lambda[j]) - px[j] - bt_v[j];
  for (int j = 0; j < n; ++j) g[n + j] = cl[j] - (y.x[j] - ax[j]);
  for (int i = 0; i < m; ++i) g[2 * n + i] = bx[i] - rv[i];
  return g;
}

/// Componentwise clamp at zero, reassembled into a Point.
inline Point project_onto_omega(const Vec& raw, int n, int m) {
  if (static_cast<int>(raw.size()) != 2 * n + m)
    throw DimensionMismatch("project_onto_omega: length is not 2n+m");
  Vec clipped(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) clipped[i] = std::max(raw[i], 0.0);
  return Point::unflatten(clipped, n, m);
}

// ‖y - P_Ω(y + t·g(y))‖; zero exactly at VI solutions, for every t > 0.
inline double natural_residual(const Economy& eco, const OperatorTriple& ops, const Point& y,
                               double t) {
  if (!(t > 0.0)) throw NonpositiveStep("natural_residual: step must be positive");
  const Vec flat = y.flatten();
  const Vec g = pseudo_gradient(eco, ops, y);
  const Point moved = project_onto_omega(add_scaled(flat, t, g), eco.n, eco.m);
  return distance(flat, moved.flatten());
}

struct ComplementarityRow {
  int index = 0;        // position in the flattened (x, λ, v) order
  double slack = 0.0;   // the g-component; nonpositive at equilibrium
  double multiplier = 0.0;
  double product = 0.0;
};

struct Certificate {
  double feasibility_violation = 0.0;  // max(0, max_k g_k(y))
  double complementarity_gap = 0.0;    // |<y, g(y)>|
  double budget_gap = 0.0;             // |<c(λ),λ> - <p(x),x> - <r(v),v>|
  double natural_residual = 0.0;       // at the reference step below
  double reference_step = 0.0;
  std::vector<ComplementarityRow> per_constraint;
};

// Reference step for certificates: the default PGP step when delta > 0, else
// 1/(2L). Recorded inside the certificate so runs stay comparable.
inline double certificate_reference_step(const ModulusBundle& mb) {
  if (mb.delta > 0.0) return mb.delta / (mb.lipschitz * mb.lipschitz);
  return 0.5 / mb.lipschitz;
}

inline Certificate certify(const Economy& eco, const OperatorTriple& ops, const Point& y,
                           double t0) {
  const Vec g = pseudo_gradient(eco, ops, y);
  const Vec flat = y.flatten();
  Certificate cert;
  cert.reference_step = t0;
  for (double gk : g) cert.feasibility_violation = std::max(cert.feasibility_violation, gk);
  cert.feasibility_violation = std::max(cert.feasibility_violation, 0.0);
  cert.complementarity_gap = std::abs(dot(flat, g));
  const Vec px = eval(ops.production_cost, y.x);
  const Vec cl = eval(ops.consumption, y.lambda);
  const Vec rv = eval(ops.factor_supply, y.v);
  cert.budget_gap = std::abs(dot(cl, y.lambda) - dot(px, y.x) - dot(rv, y.v));
  cert.natural_residual = natural_residual(eco, ops, y, t0);
  cert.per_constraint.reserve(flat.size());
  for (size_t k = 0; k < flat.size(); ++k)
    cert.per_constraint.push_back(
        {static_cast<int>(k), g[k], flat[k], flat[k] * g[k]});
  return cert;
}

}  // namespace npce
