#pragma once

// The two projection methods. PGP takes a single projected pseudo-gradient
// step per iteration and contracts linearly when all three operators are
// strongly monotone. EPG is the extragradient variant: a prediction step
// followed by a correction that re-evaluates g at the predictor, which keeps
// it convergent for merely monotone operators at steps below 1/(sqrt(2)L).
//
// Stopping rule: the natural residual at the method's own step, evaluated at
// the current iterate before stepping, so the returned point is the one the
// residual certifies.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "npce/vi_core.hpp"

namespace npce {

enum class Method { Pgp, Epg };

inline const char* method_name(Method m) { return m == Method::Pgp ? "pgp" : "epg"; }

struct SolverConfig {
  Method method = Method::Pgp;
  std::optional<double> step;   // empty = auto (theoretically optimal)
  double tol = 1e-8;            // natural-residual stop threshold
  long max_iters = 200000;
  long log_every = 1;
  std::optional<Point> start;   // empty = all-ones start
};

struct ResidualSample {
  long iter = 0;
  double residual = 0.0;
  std::optional<double> dist_to_reference;
};

struct RateCertificate {
  Method method = Method::Pgp;
  double t = 0.0;
  double q = 0.0;  // predicted per-step contraction of ‖y_s - y*‖
  double kappa = 0.0;
  std::string formula_id;
};

struct SolveResult {
  Point final;
  long iterations = 0;
  bool converged = false;
  std::vector<ResidualSample> residual_history;
  double step_used = 0.0;
  std::optional<double> theoretical_ratio;
  Certificate certificate;
  Point start;
};

// Admissibility: PGP needs 0 < t < 2·delta/L² (when delta > 0); EPG needs
// 0 < t < 1/(sqrt(2)·L). A fixed PGP step with delta = 0 is accepted without
// any convergence guarantee since the bound degenerates to an empty interval.
inline void check_step_admissible(Method method, double t, const ModulusBundle& mb) {
  if (!(t > 0.0)) throw NonpositiveStep("step must be positive");
  if (method == Method::Pgp) {
    if (mb.delta > 0.0 && t >= 2.0 * mb.delta / (mb.lipschitz * mb.lipschitz))
      throw StepInadmissible("pgp step " + std::to_string(t) + " is not below 2*delta/L^2");
  } else {
    if (t >= 1.0 / (std::sqrt(2.0) * mb.lipschitz))
      throw StepInadmissible("epg step " + std::to_string(t) + " is not below 1/(sqrt(2)*L)");
  }
}

// PGP: t = delta/L² (the ratio minimizer). EPG: t = 1/(2L) when delta > 0,
// else 0.99/(sqrt(2)L), the monotone-only bound with a safety factor keeping
// the step strictly inside the open interval.
inline double default_step(Method method, const ModulusBundle& mb) {
  if (method == Method::Pgp) {
    if (!(mb.delta > 0.0))
      throw ZeroDelta("pgp auto step needs delta > 0; pass a fixed step or use epg");
    return mb.delta / (mb.lipschitz * mb.lipschitz);
  }
  if (mb.delta > 0.0) return 0.5 / mb.lipschitz;
  return 0.99 / (std::sqrt(2.0) * mb.lipschitz);
}

/// One projected pseudo-gradient step y ← P_Ω(y + t·g(y)).
inline Point pgp_step(const Economy& eco, const OperatorTriple& ops, const Point& y, double t) {
  if (!(t > 0.0)) throw NonpositiveStep("pgp_step: step must be positive");
  const Vec g = pseudo_gradient(eco, ops, y);
  return project_onto_omega(add_scaled(y.flatten(), t, g), eco.n, eco.m);
}

/// Predictor ŷ = P_Ω(y + t·g(y)), corrector y⁺ = P_Ω(y + t·g(ŷ)).
inline std::pair<Point, Point> epg_step(const Economy& eco, const OperatorTriple& ops,
                                        const Point& y, double t) {
  if (!(t > 0.0)) throw NonpositiveStep("epg_step: step must be positive");
  const Vec flat = y.flatten();
  const Vec g = pseudo_gradient(eco, ops, y);
  const Point predictor = project_onto_omega(add_scaled(flat, t, g), eco.n, eco.m);
  const Vec g_hat = pseudo_gradient(eco, ops, predictor);
  const Point corrector = project_onto_omega(add_scaled(flat, t, g_hat), eco.n, eco.m);
  return {predictor, corrector};
}

// Predicted per-step contraction of the distance to the equilibrium.
//   PGP: q(t) = sqrt(1 - 2t·delta + t²L²).
//   EPG: the square root of q(t) = 1 - 2·delta·t + 4(delta·t)²/nu(t) with
//        nu(t) = 1 + 2·delta·t - 2(tL)², since that bound contracts squared
//        norms.
inline RateCertificate rate_certificate(Method method, double t, const ModulusBundle& mb) {
  if (!(mb.delta > 0.0)) throw ZeroDelta("rate_certificate: delta is zero");
  check_step_admissible(method, t, mb);
  RateCertificate rc;
  rc.method = method;
  rc.t = t;
  rc.kappa = mb.kappa;
  if (method == Method::Pgp) {
    rc.q = std::sqrt(1.0 - 2.0 * t * mb.delta + t * t * mb.lipschitz * mb.lipschitz);
    rc.formula_id = "pgp-linear";
  } else {
    const double dt = mb.delta * t;
    const double tl = t * mb.lipschitz;
    const double nu = 1.0 + 2.0 * dt - 2.0 * tl * tl;
    rc.q = std::sqrt(1.0 - 2.0 * dt + 4.0 * dt * dt / nu);
    rc.formula_id = "epg-linear";
  }
  return rc;
}

// Runs the configured method until the natural residual at the method's step
// drops to tol or max_iters steps were taken. Hitting the cap is not an
// error: the result reports converged = false with the full history.
// `reference` (the planted equilibrium, when known) only feeds the
// distance-to-reference column of the history.
inline SolveResult solve(const Economy& eco, const OperatorTriple& ops, const SolverConfig& cfg,
                         const std::optional<Point>& reference = std::nullopt) {
  const ModulusBundle mb = modulus_bundle(eco, ops);
  double t = 0.0;
  if (cfg.step) {
    check_step_admissible(cfg.method, *cfg.step, mb);
    t = *cfg.step;
  } else {
    t = default_step(cfg.method, mb);
  }
  const long log_every = cfg.log_every > 0 ? cfg.log_every : 1;

  Point y = cfg.start ? project_onto_omega(cfg.start->flatten(), eco.n, eco.m)
                      : Point::ones(eco.n, eco.m);
  SolveResult res;
  res.start = y;
  res.step_used = t;

  const auto record = [&](long iter, double residual) {
    ResidualSample s{iter, residual, std::nullopt};
    if (reference) s.dist_to_reference = distance(y, *reference);
    res.residual_history.push_back(s);
  };

  long iter = 0;
  for (;;) {
    const Vec flat = y.flatten();
    const Vec g = pseudo_gradient(eco, ops, y);
    const Point candidate = project_onto_omega(add_scaled(flat, t, g), eco.n, eco.m);
    const double residual = distance(flat, candidate.flatten());
    const bool done = residual <= cfg.tol || iter >= cfg.max_iters;
    if (iter % log_every == 0 || done) record(iter, residual);
    if (residual <= cfg.tol) {
      res.converged = true;
      break;
    }
    if (iter >= cfg.max_iters) break;
    if (cfg.method == Method::Pgp) {
      y = candidate;  // the candidate is exactly the PGP update
    } else {
      const Vec g_hat = pseudo_gradient(eco, ops, candidate);
      y = project_onto_omega(add_scaled(flat, t, g_hat), eco.n, eco.m);
    }
    ++iter;
  }

  res.final = y;
  res.iterations = iter;
  res.certificate = certify(eco, ops, y, certificate_reference_step(mb));
  if (mb.delta > 0.0) res.theoretical_ratio = rate_certificate(cfg.method, t, mb).q;
  return res;
}

}  // namespace npce
