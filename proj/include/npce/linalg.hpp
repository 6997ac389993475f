#pragma once

// Dense row-major kernels shared by all modules: vector arithmetic, LU with
// partial pivoting, power iteration for spectral quantities, and a cyclic
// Jacobi sweep for symmetric eigenvalues. Everything is double precision and
// sized for desk-scale problems (a few thousand unknowns at most).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "npce/errors.hpp"

namespace npce {

using Vec = std::vector<double>;

inline constexpr int kPowerIterationCap = 10000;
inline constexpr double kPowerIterationTol = 1e-12;
inline constexpr double kPowerIterationResidualTol = 1e-9;
inline constexpr int kDenseFallbackDim = 512;
inline constexpr int kJacobiSweepCap = 64;
inline constexpr double kJacobiTol = 1e-12;
inline constexpr double kSingularConditionCap = 1e12;

class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

  static Matrix identity(int n) {
    Matrix eye(n, n);
    for (int i = 0; i < n; ++i) eye(i, i) = 1.0;
    return eye;
  }

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
    Matrix out(r, c);
    int i = 0;
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != c)
        throw DimensionMismatch("from_rows: ragged initializer");
      int j = 0;
      for (double v : row) out(i, j++) = v;
      ++i;
    }
    return out;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  Vec& data() { return data_; }
  const Vec& data() const { return data_; }

  Matrix transposed() const {
    Matrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  Matrix& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  Vec data_;
};

inline bool operator==(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a.data() == b.data();
}

// ---------------------------------------------------------------------------
// Vector arithmetic

inline double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot: length mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec sub(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("sub: length mismatch");
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

// a + t*b
inline Vec add_scaled(const Vec& a, double t, const Vec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("add_scaled: length mismatch");
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * b[i];
  return out;
}

inline double distance(const Vec& a, const Vec& b) { return norm(sub(a, b)); }

inline Vec matvec(const Matrix& a, const Vec& x) {
  if (static_cast<int>(x.size()) != a.cols()) throw DimensionMismatch("matvec: size mismatch");
  Vec y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

// aᵀx without materializing the transpose
inline Vec matvec_transpose(const Matrix& a, const Vec& x) {
  if (static_cast<int>(x.size()) != a.rows())
    throw DimensionMismatch("matvec_transpose: size mismatch");
  Vec y(a.cols(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    const double xi = x[i];
    for (int j = 0; j < a.cols(); ++j) y[j] += a(i, j) * xi;
  }
  return y;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matmul: size mismatch");
  Matrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

inline double max_abs_entry(const Matrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

inline Matrix symmetric_part(const Matrix& a) {
  if (!a.square()) throw DimensionMismatch("symmetric_part: matrix must be square");
  Matrix s(a.rows(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.rows(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

// ---------------------------------------------------------------------------
// LU with partial pivoting

struct LuDecomposition {
  Matrix lu;
  std::vector<int> perm;  // row i of lu holds original row perm[i]
  bool singular = false;
  double min_pivot = 0.0;
  double max_pivot = 0.0;

  // cheap proxy: diagonal pivot ratio
  double condition_estimate() const {
    if (singular || min_pivot == 0.0) return std::numeric_limits<double>::infinity();
    return max_pivot / min_pivot;
  }

  Vec solve(const Vec& rhs) const {
    const int n = lu.rows();
    if (singular) throw SingularMatrix("lu solve: factorization is singular");
    if (static_cast<int>(rhs.size()) != n) throw DimensionMismatch("lu solve: size mismatch");
    Vec y(n);
    for (int i = 0; i < n; ++i) {
      double s = rhs[perm[i]];
      for (int j = 0; j < i; ++j) s -= lu(i, j) * y[j];
      y[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = y[i];
      for (int j = i + 1; j < n; ++j) s -= lu(i, j) * y[j];
      y[i] = s / lu(i, i);
    }
    return y;
  }
};

inline LuDecomposition lu_factor(const Matrix& a) {
  if (!a.square()) throw DimensionMismatch("lu_factor: matrix must be square");
  const int n = a.rows();
  LuDecomposition d;
  d.lu = a;
  d.perm.resize(n);
  std::iota(d.perm.begin(), d.perm.end(), 0);
  d.min_pivot = std::numeric_limits<double>::infinity();
  d.max_pivot = 0.0;
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(d.lu(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(d.lu(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0 || !std::isfinite(best)) {
      d.singular = true;
      d.min_pivot = 0.0;
      return d;
    }
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(d.lu(k, j), d.lu(p, j));
      std::swap(d.perm[k], d.perm[p]);
    }
    d.min_pivot = std::min(d.min_pivot, best);
    d.max_pivot = std::max(d.max_pivot, best);
    const double inv = 1.0 / d.lu(k, k);
    for (int i = k + 1; i < n; ++i) {
      const double lik = d.lu(i, k) * inv;
      d.lu(i, k) = lik;
      if (lik == 0.0) continue;
      for (int j = k + 1; j < n; ++j) d.lu(i, j) -= lik * d.lu(k, j);
    }
  }
  return d;
}

inline Matrix invert(const Matrix& a) {
  const int n = a.rows();
  const LuDecomposition d = lu_factor(a);
  if (d.singular) throw SingularMatrix("invert: singular matrix");
  Matrix out(n, n);
  Vec e(n, 0.0);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    const Vec col = d.solve(e);
    e[j] = 0.0;
    for (int i = 0; i < n; ++i) out(i, j) = col[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Power iteration

struct SpectralEstimate {
  double value = 0.0;
  int iterations = 0;
};

namespace detail_linalg {

// Repeated squaring of A + I with Frobenius renormalization. Squaring drives
// the dominant eigenspace out of any cluster or Jordan chain that defeats the
// plain iteration; forty squarings apply the operator 2^40 times.
inline double perron_root_by_squaring(const Matrix& a) {
  const int n = a.rows();
  Matrix m = Matrix::identity(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) += a(i, j);
  const Matrix shifted = m;
  for (int pass = 0; pass < 40; ++pass) {
    m = matmul(m, m);
    double fro = 0.0;
    for (double v : m.data()) fro += v * v;
    fro = std::sqrt(fro);
    if (fro == 0.0) return 0.0;
    for (double& v : m.data()) v /= fro;
  }
  Vec v = matvec(m, Vec(n, 1.0));
  const double vn = norm(v);
  if (vn == 0.0) return 0.0;
  for (double& x : v) x /= vn;
  return norm(matvec(shifted, v)) - 1.0;
}

}  // namespace detail_linalg

// Perron root of a nonnegative square matrix. Iterates on A + I: the shift
// keeps the dominant eigenvalue strictly separated in modulus (nonnegative A
// can carry a -rho eigenvalue, e.g. bipartite patterns, which makes the
// unshifted estimate oscillate), while rho(A + I) = rho(A) + 1 exactly.
// Convergence needs both a settled estimate and a small eigen-residual; runs
// that hit the cap fall back to matrix squaring at desk scale.
inline SpectralEstimate spectral_radius_nonneg(const Matrix& a) {
  if (!a.square()) throw DimensionMismatch("spectral_radius_nonneg: matrix must be square");
  const int n = a.rows();
  Vec v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double prev = -1.0;
  for (int it = 1; it <= kPowerIterationCap; ++it) {
    Vec w = matvec(a, v);
    for (int i = 0; i < n; ++i) w[i] += v[i];
    const double len = norm(w);
    if (len == 0.0) return {0.0, it};
    const double est = len - 1.0;
    double resid = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = w[i] - len * v[i];
      resid += r * r;
    }
    resid = std::sqrt(resid);
    for (int i = 0; i < n; ++i) v[i] = w[i] / len;
    if (it > 1 && std::abs(est - prev) <= kPowerIterationTol * std::max(1.0, std::abs(est)) &&
        resid <= kPowerIterationResidualTol * len)
      return {est, it};
    prev = est;
  }
  if (n <= kDenseFallbackDim)
    return {detail_linalg::perron_root_by_squaring(a), kPowerIterationCap};
  throw PowerIterationStall("spectral_radius_nonneg: no convergence within iteration cap");
}

// Largest singular value via power iteration on MᵀM (never formed; two
// matvecs per pass, Rayleigh quotient as the estimate). The eigen-residual
// certifies the estimate to ~1e-9 relative; clustered spectra that defeat the
// iteration fall back to Jacobi on the explicit MᵀM at desk scale.
inline Vec symmetric_eigenvalues(Matrix s);

inline double spectral_norm(const Matrix& a) {
  if (max_abs_entry(a) == 0.0) return 0.0;
  const int n = a.cols();
  Vec v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double prev = -1.0;
  bool retried = false;
  for (int it = 1; it <= kPowerIterationCap; ++it) {
    const Vec w = matvec(a, v);
    Vec z = matvec_transpose(a, w);
    const double rayleigh = dot(v, z);
    const double est = std::sqrt(std::max(rayleigh, 0.0));
    const double zn = norm(z);
    if (zn == 0.0) {
      if (!retried) {
        // start vector was annihilated; fall back to a fixed ramp once
        for (int i = 0; i < n; ++i) v[i] = static_cast<double>(i + 1);
        const double vn = norm(v);
        for (int i = 0; i < n; ++i) v[i] /= vn;
        retried = true;
        prev = -1.0;
        continue;
      }
      return 0.0;
    }
    double resid = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = z[i] - rayleigh * v[i];
      resid += r * r;
    }
    resid = std::sqrt(resid);
    for (int i = 0; i < n; ++i) v[i] = z[i] / zn;
    if (it > 1 && std::abs(est - prev) <= kPowerIterationTol * std::max(1.0, est) &&
        resid <= kPowerIterationResidualTol * std::max(rayleigh, 1e-300))
      return est;
    prev = est;
  }
  if (n <= kDenseFallbackDim) {
    Matrix gram(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < a.rows(); ++k) s += a(k, i) * a(k, j);
        gram(i, j) = s;
        gram(j, i) = s;
      }
    const Vec eig = symmetric_eigenvalues(gram);
    return std::sqrt(std::max(eig.back(), 0.0));
  }
  throw PowerIterationStall("spectral_norm: no convergence within iteration cap");
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi for symmetric eigenvalues

inline Vec symmetric_eigenvalues(Matrix s) {
  if (!s.square()) throw DimensionMismatch("symmetric_eigenvalues: matrix must be square");
  const int n = s.rows();
  if (n == 1) return {s(0, 0)};
  double scale = 0.0;
  for (double v : s.data()) scale += v * v;
  scale = std::sqrt(scale);
  const double stop = kJacobiTol * std::max(1.0, scale);
  for (int sweep = 0; sweep < kJacobiSweepCap; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += 2.0 * s(p, q) * s(p, q);
    if (std::sqrt(off) <= stop) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = s(p, q);
        if (std::abs(apq) <= stop / (n * n)) continue;
        const double theta = (s(q, q) - s(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        const double app = s(p, p);
        const double aqq = s(q, q);
        s(p, p) = c * c * app - 2.0 * sn * c * apq + sn * sn * aqq;
        s(q, q) = sn * sn * app + 2.0 * sn * c * apq + c * c * aqq;
        s(p, q) = 0.0;
        s(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = s(k, p);
          const double akq = s(k, q);
          s(k, p) = c * akp - sn * akq;
          s(p, k) = s(k, p);
          s(k, q) = sn * akp + c * akq;
          s(q, k) = s(k, q);
        }
      }
    }
  }
  Vec eig(n);
  for (int i = 0; i < n; ++i) eig[i] = s(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace npce
