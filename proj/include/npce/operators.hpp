#pragma once

// Affine production / consumption / factor operators and the constants that
// drive step selection: strong-monotonicity moduli from the symmetric parts,
// the Lipschitz constant of the assembled pseudo-gradient, and the condition
// number kappa = delta / L.

#include <algorithm>
#include <cmath>
#include <string>

#include "npce/economy.hpp"
#include "npce/linalg.hpp"

namespace npce {

inline constexpr double kSignClampTol = 1e-10;

// u -> matrix·u + offset
struct AffineOperator {
  Matrix matrix;
  Vec offset;

  int dim() const { return matrix.rows(); }
};

inline Vec eval(const AffineOperator& op, const Vec& u) {
  if (static_cast<int>(u.size()) != op.matrix.cols() ||
      op.offset.size() != static_cast<size_t>(op.matrix.rows()))
    throw DimensionMismatch("affine eval: size mismatch");
  Vec out = matvec(op.matrix, u);
  for (size_t i = 0; i < out.size(); ++i) out[i] += op.offset[i];
  return out;
}

// p maps output to per-unit production cost (monotone increasing),
// c maps product prices to consumption (monotone decreasing),
// r maps factor prices to factor availability (monotone increasing).
struct OperatorTriple {
  AffineOperator production_cost;  // dim n
  AffineOperator consumption;      // dim n
  AffineOperator factor_supply;    // dim m
};

enum class Orientation { Increasing, Decreasing };

// Strong-monotonicity modulus of an affine map: the smallest eigenvalue of the
// symmetric part for increasing operators, minus the largest for decreasing
// ones. Values within kSignClampTol below zero clamp to zero; anything worse
// is the wrong monotonicity class.
inline double monotonicity_modulus(const AffineOperator& op, Orientation orientation) {
  const Vec eig = symmetric_eigenvalues(symmetric_part(op.matrix));
  const double modulus = orientation == Orientation::Increasing ? eig.front() : -eig.back();
  if (modulus < -kSignClampTol)
    throw WrongSign("monotonicity_modulus: operator violates its monotonicity class by " +
                    std::to_string(-modulus));
  return std::max(modulus, 0.0);
}

// Jacobian of the pseudo-gradient g for the affine family:
//   [ -P        (I-A)ᵀ   -Bᵀ ]
//   [ -(I-A)    C         0  ]
//   [  B        0        -R  ]
inline Matrix pseudo_gradient_jacobian(const Economy& eco, const OperatorTriple& ops) {
  const int n = eco.n;
  const int m = eco.m;
  if (ops.production_cost.dim() != n || ops.consumption.dim() != n || ops.factor_supply.dim() != m)
    throw DimensionMismatch("pseudo_gradient_jacobian: operator dims do not match economy");
  const int d = 2 * n + m;
  Matrix jac(d, d);
  const Matrix& a = eco.balance;
  const Matrix& b = eco.technology;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      jac(i, j) = -ops.production_cost.matrix(i, j);
      jac(i, n + j) = (i == j ? 1.0 : 0.0) - a(j, i);        // (I-A)ᵀ
      jac(n + i, j) = -((i == j ? 1.0 : 0.0) - a(i, j));     // -(I-A)
      jac(n + i, n + j) = ops.consumption.matrix(i, j);
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      jac(j, 2 * n + i) = -b(i, j);  // -Bᵀ
      jac(2 * n + i, j) = b(i, j);
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) jac(2 * n + i, 2 * n + j) = -ops.factor_supply.matrix(i, j);
  return jac;
}

/// Lipschitz constant of g: the spectral norm of its Jacobian (exact for the
/// affine family; offsets play no part).
inline double lipschitz_of_g(const Economy& eco, const OperatorTriple& ops) {
  return spectral_norm(pseudo_gradient_jacobian(eco, ops));
}

struct ModulusBundle {
  double alpha = 0.0;      // modulus of p
  double beta = 0.0;       // modulus of c
  double gamma = 0.0;      // modulus of r
  double delta = 0.0;      // min{alpha, beta, gamma}
  double lipschitz = 0.0;  // L of the assembled g
  double kappa = 0.0;      // delta / L
};

inline ModulusBundle modulus_bundle(const Economy& eco, const OperatorTriple& ops) {
  ModulusBundle mb;
  mb.alpha = monotonicity_modulus(ops.production_cost, Orientation::Increasing);
  mb.beta = monotonicity_modulus(ops.consumption, Orientation::Decreasing);
  mb.gamma = monotonicity_modulus(ops.factor_supply, Orientation::Increasing);
  mb.delta = std::min({mb.alpha, mb.beta, mb.gamma});
  mb.lipschitz = lipschitz_of_g(eco, ops);
  mb.kappa = mb.delta / mb.lipschitz;
  return mb;
}

}  // namespace npce
