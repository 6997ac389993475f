#pragma once

// The fixed linear structure of the economy: an n×n balance matrix (how much
// of each product goes into producing one unit of every other product) and an
// m×n technology matrix (factor requirements per unit produced). Validation
// certifies productivity through the spectral radius, which for nonnegative
// matrices is equivalent to the Leontief inverse existing and being
// nonnegative.

#include <cmath>
#include <optional>

#include "npce/linalg.hpp"

namespace npce {

inline constexpr double kProductivityRhoTol = 1e-9;
inline constexpr double kInverseEntryTol = 1e-10;

struct Economy {
  int n = 0;          // product count
  int m = 0;          // factor count
  Matrix balance;     // n×n, entries >= 0, spectral radius < 1
  Matrix technology;  // m×n, entries >= 0, no zero row or column
};

struct ProductivityReport {
  double spectral_radius = 0.0;
  bool is_productive = false;
  std::optional<Matrix> leontief_inverse;  // (I - A)⁻¹ when productive
  double min_inverse_entry = 0.0;
};

namespace detail {

inline void require_nonnegative_finite(const Matrix& m, const char* name) {
  for (double v : m.data()) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(name) + ": non-finite entry");
    if (v < 0.0) throw NegativeEntry(std::string(name) + ": negative entry");
  }
}

inline void require_no_zero_row_or_column(const Matrix& m, const char* name) {
  for (int i = 0; i < m.rows(); ++i) {
    bool any = false;
    for (int j = 0; j < m.cols(); ++j) any = any || m(i, j) != 0.0;
    if (!any) throw ZeroRowOrColumn(std::string(name) + ": zero row");
  }
  for (int j = 0; j < m.cols(); ++j) {
    bool any = false;
    for (int i = 0; i < m.rows(); ++i) any = any || m(i, j) != 0.0;
    if (!any) throw ZeroRowOrColumn(std::string(name) + ": zero column");
  }
}

}  // namespace detail

/// Spectral radius, productivity verdict and Leontief inverse for a square
/// nonnegative matrix.
inline ProductivityReport productivity_report(const Matrix& a) {
  if (!a.square()) throw DimensionMismatch("productivity_report: matrix must be square");
  detail::require_nonnegative_finite(a, "balance matrix");
  ProductivityReport report;
  report.spectral_radius = spectral_radius_nonneg(a).value;
  report.is_productive = report.spectral_radius < 1.0 - kProductivityRhoTol;
  if (report.is_productive) {
    const int n = a.rows();
    Matrix i_minus_a = Matrix::identity(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) i_minus_a(i, j) -= a(i, j);
    Matrix inv = invert(i_minus_a);
    double lo = std::numeric_limits<double>::infinity();
    for (double v : inv.data()) lo = std::min(lo, v);
    report.min_inverse_entry = lo;
    report.leontief_inverse = std::move(inv);
  }
  return report;
}

inline Economy validate_economy(const Matrix& a, const Matrix& b) {
  if (!a.square()) throw DimensionMismatch("validate_economy: balance matrix must be square");
  if (a.rows() < 1) throw DimensionMismatch("validate_economy: empty balance matrix");
  if (b.cols() != a.rows() || b.rows() < 1)
    throw DimensionMismatch("validate_economy: technology matrix must be m×n with m >= 1");
  detail::require_nonnegative_finite(a, "balance matrix");
  detail::require_nonnegative_finite(b, "technology matrix");
  detail::require_no_zero_row_or_column(a, "balance matrix");
  detail::require_no_zero_row_or_column(b, "technology matrix");
  const ProductivityReport report = productivity_report(a);
  if (!report.is_productive)
    throw NotProductive("validate_economy: spectral radius " +
                        std::to_string(report.spectral_radius) + " is not below 1");
  return Economy{a.rows(), b.rows(), a, b};
}

}  // namespace npce
