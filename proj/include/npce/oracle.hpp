#pragma once

// Ground-truth solver for tiny affine instances. Enumerates every active set
// of the equivalent linear complementarity problem y >= 0, g(y) <= 0,
// <y, g(y)> = 0: fix a subset of components at zero, solve the linear system
// g_i(y) = 0 on the rest, and keep the candidate when the free part is
// nonnegative and the fixed components have nonpositive g. Exists purely to
// validate the iterative solvers at desk scale.

#include <algorithm>
#include <cmath>
#include <vector>

#include "npce/vi_core.hpp"

namespace npce {

inline constexpr int kOracleDimensionCap = 16;
inline constexpr double kOracleDefaultTol = 1e-9;
inline constexpr double kOracleDedupDistance = 1e-8;

struct OracleSolution {
  std::vector<Point> points;
  std::vector<std::vector<int>> active_sets;  // flat indices fixed at zero
  std::vector<Certificate> residuals;
};

inline OracleSolution enumerate_equilibria(const Economy& eco, const OperatorTriple& ops,
                                           double tol = kOracleDefaultTol) {
  const int d = 2 * eco.n + eco.m;
  if (d > kOracleDimensionCap)
    throw TooLarge("enumerate_equilibria: 2n+m = " + std::to_string(d) + " exceeds the cap of " +
                   std::to_string(kOracleDimensionCap));
  const Matrix jac = pseudo_gradient_jacobian(eco, ops);
  const Vec g0 = pseudo_gradient(eco, ops, Point::zeros(eco.n, eco.m));

  struct Candidate {
    std::vector<int> active;
    Vec y;
  };
  std::vector<Candidate> candidates;

  const auto residual_of = [&](const Vec& y) {
    Vec g = matvec(jac, y);
    for (int i = 0; i < d; ++i) g[i] += g0[i];
    return g;
  };

  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    std::vector<int> active;
    std::vector<int> free_idx;
    for (int i = 0; i < d; ++i)
      (mask & (1u << i)) ? active.push_back(i) : free_idx.push_back(i);

    Vec y(d, 0.0);
    if (!free_idx.empty()) {
      const int f = static_cast<int>(free_idx.size());
      Matrix sub(f, f);
      Vec rhs(f);
      for (int i = 0; i < f; ++i) {
        rhs[i] = -g0[free_idx[i]];
        for (int j = 0; j < f; ++j) sub(i, j) = jac(free_idx[i], free_idx[j]);
      }
      const LuDecomposition lu = lu_factor(sub);
      if (lu.singular || lu.condition_estimate() > kSingularConditionCap) continue;
      Vec yf = lu.solve(rhs);
      // one step of iterative refinement so the acceptance check below is not
      // polluted by solver residue on mildly conditioned subsystems
      {
        Vec res(f);
        for (int i = 0; i < f; ++i) {
          double s = rhs[i];
          for (int j = 0; j < f; ++j) s -= sub(i, j) * yf[j];
          res[i] = s;
        }
        const Vec corr = lu.solve(res);
        for (int i = 0; i < f; ++i) yf[i] += corr[i];
      }
      bool nonneg = true;
      for (double v : yf) nonneg = nonneg && v >= -tol;
      if (!nonneg) continue;
      for (int i = 0; i < f; ++i) y[free_idx[i]] = std::max(yf[i], 0.0);
    }
    const Vec g = residual_of(y);
    bool feasible = true;
    for (int i = 0; i < d; ++i) feasible = feasible && g[i] <= tol;
    if (!feasible) continue;
    candidates.push_back({std::move(active), std::move(y)});
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.active < b.active; });

  OracleSolution sol;
  ModulusBundle mb = modulus_bundle(eco, ops);
  const double t0 = certificate_reference_step(mb);
  for (auto& cand : candidates) {
    bool duplicate = false;
    for (const Point& seen : sol.points)
      duplicate = duplicate || distance(seen.flatten(), cand.y) <= kOracleDedupDistance;
    if (duplicate) continue;
    Point p = Point::unflatten(cand.y, eco.n, eco.m);
    sol.residuals.push_back(certify(eco, ops, p, t0));
    sol.points.push_back(std::move(p));
    sol.active_sets.push_back(std::move(cand.active));
  }
  return sol;
}

struct CrossValidation {
  bool ok = false;
  double distance_to_nearest = 0.0;
  int nearest_index = -1;
  bool used_certificate_branch = false;
  Certificate certificate;
};

// A solver output validates against the oracle when it lands within tol of an
// enumerated point. When uniqueness is not guaranteed (delta = 0) or the
// enumeration found several points, a point anywhere on the solution set is
// acceptable, so certificate gaps at or below tol also pass.
inline CrossValidation cross_validate(const Economy& eco, const OperatorTriple& ops,
                                      const Point& solver_point, double tol) {
  const OracleSolution sol = enumerate_equilibria(eco, ops);
  const ModulusBundle mb = modulus_bundle(eco, ops);
  CrossValidation cv;
  cv.distance_to_nearest = std::numeric_limits<double>::infinity();
  const Vec flat = solver_point.flatten();
  for (size_t i = 0; i < sol.points.size(); ++i) {
    const double dist = distance(flat, sol.points[i].flatten());
    if (dist < cv.distance_to_nearest) {
      cv.distance_to_nearest = dist;
      cv.nearest_index = static_cast<int>(i);
    }
  }
  cv.certificate = certify(eco, ops, solver_point, certificate_reference_step(mb));
  if (cv.distance_to_nearest <= tol) {
    cv.ok = true;
    return cv;
  }
  if (mb.delta <= 0.0 || sol.points.size() > 1) {
    cv.used_certificate_branch = true;
    cv.ok = cv.certificate.feasibility_violation <= tol &&
            cv.certificate.complementarity_gap <= tol && cv.certificate.budget_gap <= tol &&
            cv.certificate.natural_residual <= tol;
  }
  return cv;
}

}  // namespace npce
