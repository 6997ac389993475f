#include "npce/solvers.hpp"

#include <gtest/gtest.h>

#include "npce/probgen.hpp"
#include "support/test_support.hpp"

using npce::Method;
using npce::Point;
using npce::Vec;

namespace {

npce::SolverConfig config(Method method, double tol = 1e-10) {
  npce::SolverConfig cfg;
  cfg.method = method;
  cfg.tol = tol;
  return cfg;
}

}  // namespace

TEST(Solvers, DefaultSteps) {
  const npce::Instance r1 = npce::reference::r1();
  const npce::ModulusBundle mb = npce::modulus_bundle(r1.eco, r1.ops);
  EXPECT_NEAR(npce::default_step(Method::Pgp, mb), 4.0 / 9.0, 1e-9);
  EXPECT_NEAR(npce::default_step(Method::Epg, mb), 1.0 / 3.0, 1e-9);

  const npce::Instance r3 = npce::reference::r3();
  const npce::ModulusBundle mb3 = npce::modulus_bundle(r3.eco, r3.ops);
  EXPECT_THROW(npce::default_step(Method::Pgp, mb3), npce::ZeroDelta);
  EXPECT_NEAR(npce::default_step(Method::Epg, mb3), 0.99 / (std::sqrt(2.0) * std::sqrt(1.25)),
              1e-9);
}

TEST(Solvers, StepAdmissibility) {
  const npce::Instance r1 = npce::reference::r1();
  const npce::ModulusBundle mb = npce::modulus_bundle(r1.eco, r1.ops);
  EXPECT_NO_THROW(npce::check_step_admissible(Method::Pgp, 0.8, mb));  // 2*delta/L^2 = 8/9
  EXPECT_THROW(npce::check_step_admissible(Method::Pgp, 1.0, mb), npce::StepInadmissible);
  EXPECT_NO_THROW(npce::check_step_admissible(Method::Epg, 0.4, mb));  // 1/(sqrt2*L) = 0.4714
  EXPECT_THROW(npce::check_step_admissible(Method::Epg, 0.5, mb), npce::StepInadmissible);
  EXPECT_THROW(npce::check_step_admissible(Method::Pgp, 0.0, mb), npce::NonpositiveStep);
}

TEST(Solvers, PgpStepHandValues) {
  const npce::Instance r1 = npce::reference::r1();
  const Point star = *r1.planted;
  const Point fixed = npce::pgp_step(r1.eco, r1.ops, star, 4.0 / 9.0);
  EXPECT_LE(npce::distance(fixed, star), 1e-12);

  const Point from_zero = npce::pgp_step(r1.eco, r1.ops, Point::zeros(1, 1), 4.0 / 9.0);
  EXPECT_EQ(from_zero.x[0], 0.0);
  EXPECT_NEAR(from_zero.lambda[0], 40.0 / 9.0, 1e-14);
  EXPECT_EQ(from_zero.v[0], 0.0);

  const Point from_ones = npce::pgp_step(r1.eco, r1.ops, Point{{1.0}, {1.0}, {1.0}}, 4.0 / 9.0);
  EXPECT_EQ(from_ones.x[0], 0.0);
  EXPECT_NEAR(from_ones.lambda[0], 43.0 / 9.0, 1e-14);
  EXPECT_NEAR(from_ones.v[0], 5.0 / 9.0, 1e-14);
}

TEST(Solvers, EpgStepHandValues) {
  const npce::Instance r1 = npce::reference::r1();
  const Point star = *r1.planted;
  const auto [pred, corr] = npce::epg_step(r1.eco, r1.ops, star, 1.0 / 3.0);
  EXPECT_LE(npce::distance(pred, star), 1e-12);
  EXPECT_LE(npce::distance(corr, star), 1e-12);

  const auto [pred0, corr0] = npce::epg_step(r1.eco, r1.ops, Point::zeros(1, 1), 1.0 / 3.0);
  EXPECT_EQ(pred0.x[0], 0.0);
  EXPECT_NEAR(pred0.lambda[0], 10.0 / 3.0, 1e-14);
  EXPECT_EQ(pred0.v[0], 0.0);
  EXPECT_NEAR(corr0.x[0], 2.0 / 9.0, 1e-14);
  EXPECT_NEAR(corr0.lambda[0], 20.0 / 9.0, 1e-14);
  EXPECT_EQ(corr0.v[0], 0.0);

  const npce::Instance r3 = npce::reference::r3();
  const Point on_ray{{2.0}, {4.0}, {1.0}};
  const auto [p3, c3] = npce::epg_step(r3.eco, r3.ops, on_ray, 0.5);
  EXPECT_LE(npce::distance(p3, on_ray), 1e-14);
  EXPECT_LE(npce::distance(c3, on_ray), 1e-14);
}

TEST(Solvers, SolveReferenceInstances) {
  const npce::Instance r1 = npce::reference::r1();
  const npce::SolveResult pgp = npce::solve(r1.eco, r1.ops, config(Method::Pgp), r1.planted);
  EXPECT_TRUE(pgp.converged);
  EXPECT_LE(npce::distance(pgp.final, *r1.planted), 1e-8);
  EXPECT_LE(pgp.certificate.natural_residual, 1e-9);
  // converged means the returned point itself meets the stop threshold
  EXPECT_LE(npce::natural_residual(r1.eco, r1.ops, pgp.final, pgp.step_used), 1e-10);

  const npce::Instance r2 = npce::reference::r2();
  const npce::SolveResult epg = npce::solve(r2.eco, r2.ops, config(Method::Epg), r2.planted);
  EXPECT_TRUE(epg.converged);
  EXPECT_LE(npce::distance(epg.final, *r2.planted), 1e-8);

  const npce::Instance r3 = npce::reference::r3();
  const npce::SolveResult mono = npce::solve(r3.eco, r3.ops, config(Method::Epg, 1e-8));
  EXPECT_TRUE(mono.converged);
  EXPECT_LE(npce::reference::r3_ray_distance(mono.final), 1e-6);
  EXPECT_FALSE(mono.theoretical_ratio.has_value());
}

TEST(Solvers, RateCertificates) {
  const npce::Instance r1 = npce::reference::r1();
  const npce::ModulusBundle mb = npce::modulus_bundle(r1.eco, r1.ops);
  const npce::RateCertificate pgp = npce::rate_certificate(Method::Pgp, 4.0 / 9.0, mb);
  EXPECT_NEAR(pgp.q, std::sqrt(5.0) / 3.0, 1e-9);  // sqrt(1 - kappa^2)
  const npce::RateCertificate epg = npce::rate_certificate(Method::Epg, 1.0 / 3.0, mb);
  EXPECT_NEAR(epg.q, std::sqrt(5.0 / 7.0), 1e-9);  // sqrt((1+kappa)/(1+2kappa))
  // q(t) -> 1 as t -> 0+
  EXPECT_GT(npce::rate_certificate(Method::Pgp, 1e-9, mb).q, 1.0 - 1e-8);
  EXPECT_LT(npce::rate_certificate(Method::Pgp, 1e-9, mb).q, 1.0);

  const npce::Instance r3 = npce::reference::r3();
  EXPECT_THROW(npce::rate_certificate(Method::Pgp, 0.1, npce::modulus_bundle(r3.eco, r3.ops)),
               npce::ZeroDelta);

  // admissible steps keep q strictly inside (0, 1)
  for (double frac : {0.05, 0.3, 0.6, 0.95}) {
    const double t_pgp = frac * 2.0 * mb.delta / (mb.lipschitz * mb.lipschitz);
    const double q1 = npce::rate_certificate(Method::Pgp, t_pgp, mb).q;
    EXPECT_GT(q1, 0.0);
    EXPECT_LT(q1, 1.0);
    const double t_epg = frac / (std::sqrt(2.0) * mb.lipschitz);
    const double q2 = npce::rate_certificate(Method::Epg, t_epg, mb).q;
    EXPECT_GT(q2, 0.0);
    EXPECT_LT(q2, 1.0);
  }
}

TEST(Solvers, PerIterationContraction) {
  for (std::uint64_t seed : {3ull, 4ull}) {
    npce::GenSpec spec;
    spec.n = 2;
    spec.m = 2;
    spec.seed = seed;
    const npce::Instance inst = npce::planted_instance(spec);
    const npce::ModulusBundle mb = npce::modulus_bundle(inst.eco, inst.ops);

    const npce::SolveResult pgp =
        npce::solve(inst.eco, inst.ops, config(Method::Pgp, 1e-7), inst.planted);
    const double q_pgp = npce::rate_certificate(Method::Pgp, pgp.step_used, mb).q;
    for (size_t k = 1; k < pgp.residual_history.size(); ++k) {
      const double prev = *pgp.residual_history[k - 1].dist_to_reference;
      const double cur = *pgp.residual_history[k].dist_to_reference;
      if (prev <= 1e-11) continue;
      EXPECT_LE(cur, q_pgp * prev + 1e-12);
    }

    const npce::SolveResult epg =
        npce::solve(inst.eco, inst.ops, config(Method::Epg, 1e-7), inst.planted);
    const npce::RateCertificate rc = npce::rate_certificate(Method::Epg, epg.step_used, mb);
    const double q_sq = rc.q * rc.q;  // the squared-norm ratio
    for (size_t k = 1; k < epg.residual_history.size(); ++k) {
      const double prev = *epg.residual_history[k - 1].dist_to_reference;
      const double cur = *epg.residual_history[k].dist_to_reference;
      if (prev <= 1e-11) continue;
      EXPECT_LE(cur * cur, q_sq * prev * prev + 1e-12);
    }
  }
}

TEST(Solvers, FejerMonotonicityOnTheRay) {
  const npce::Instance r3 = npce::reference::r3();
  const npce::ModulusBundle mb = npce::modulus_bundle(r3.eco, r3.ops);
  const double t = npce::default_step(Method::Epg, mb);
  Point y{{1.0}, {1.0}, {1.0}};
  double dist = npce::reference::r3_ray_distance(y);
  for (int s = 0; s < 2000; ++s) {
    y = npce::epg_step(r3.eco, r3.ops, y, t).second;
    const double next = npce::reference::r3_ray_distance(y);
    EXPECT_LE(next, dist + 1e-12);
    dist = next;
  }
  EXPECT_LE(dist, 1e-6);
}

TEST(Solvers, ResidualSummability) {
  const npce::Instance r1 = npce::reference::r1();
  for (Method method : {Method::Pgp, Method::Epg}) {
    const npce::SolveResult res = npce::solve(r1.eco, r1.ops, config(method, 1e-9));
    ASSERT_TRUE(res.converged);
    ASSERT_GE(res.residual_history.size(), 2u);
    EXPECT_LT(res.residual_history.back().residual, res.residual_history.front().residual);
    EXPECT_LE(res.residual_history.back().residual, 1e-9);
  }
}

TEST(Solvers, DeterministicHistories) {
  npce::GenSpec spec;
  spec.n = 3;
  spec.m = 1;
  spec.seed = 17;
  const npce::Instance inst = npce::planted_instance(spec);
  const npce::SolveResult a = npce::solve(inst.eco, inst.ops, config(Method::Epg), inst.planted);
  const npce::SolveResult b = npce::solve(inst.eco, inst.ops, config(Method::Epg), inst.planted);
  ASSERT_EQ(a.residual_history.size(), b.residual_history.size());
  for (size_t k = 0; k < a.residual_history.size(); ++k) {
    EXPECT_EQ(a.residual_history[k].iter, b.residual_history[k].iter);
    EXPECT_EQ(a.residual_history[k].residual, b.residual_history[k].residual);
    EXPECT_EQ(*a.residual_history[k].dist_to_reference, *b.residual_history[k].dist_to_reference);
  }
  EXPECT_EQ(a.final.flatten(), b.final.flatten());
}

TEST(Solvers, IterationCapIsNotAnError) {
  const npce::Instance r1 = npce::reference::r1();
  npce::SolverConfig cfg = config(Method::Pgp, 1e-12);
  cfg.max_iters = 3;
  const npce::SolveResult res = npce::solve(r1.eco, r1.ops, cfg);
  EXPECT_FALSE(res.converged);
  EXPECT_EQ(res.iterations, 3);
  EXPECT_EQ(res.residual_history.back().iter, 3);
}

TEST(Solvers, HistoryRespectsLogEvery) {
  const npce::Instance r1 = npce::reference::r1();
  npce::SolverConfig cfg = config(Method::Pgp, 1e-10);
  cfg.log_every = 10;
  const npce::SolveResult res = npce::solve(r1.eco, r1.ops, cfg);
  ASSERT_GE(res.residual_history.size(), 2u);
  for (size_t k = 0; k + 1 < res.residual_history.size(); ++k) {
    EXPECT_EQ(res.residual_history[k].iter % 10, 0);
    EXPECT_LT(res.residual_history[k].iter, res.residual_history[k + 1].iter);
  }
  EXPECT_EQ(res.residual_history.back().iter, res.iterations);
}

// with delta = 0 the pgp admissibility interval is empty, so explicit fixed
// steps are accepted without any guarantee; hitting the cap is not an error
TEST(Solvers, PgpFixedStepOnMonotoneOnlyInstanceIsAccepted) {
  const npce::Instance r3 = npce::reference::r3();
  npce::SolverConfig cfg = config(Method::Pgp, 1e-8);
  cfg.step = 0.1;
  cfg.max_iters = 500;
  const npce::SolveResult res = npce::solve(r3.eco, r3.ops, cfg);
  EXPECT_FALSE(res.converged);  // pgp does not contract the skew system
  EXPECT_EQ(res.iterations, 500);
}

TEST(Solvers, FixedStepRunsAndStartIsRecorded) {
  const npce::Instance r1 = npce::reference::r1();
  npce::SolverConfig cfg = config(Method::Pgp, 1e-9);
  cfg.step = 0.3;
  cfg.start = Point{{0.0}, {5.0}, {0.0}};
  const npce::SolveResult res = npce::solve(r1.eco, r1.ops, cfg, r1.planted);
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.step_used, 0.3);
  EXPECT_EQ(res.start.lambda[0], 5.0);
  EXPECT_LE(npce::distance(res.final, *r1.planted), 1e-7);
}
