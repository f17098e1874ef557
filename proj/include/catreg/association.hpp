#pragma once

#include <algorithm>
#include <cmath>

#include "catreg/hypothesis.hpp"
#include "catreg/table.hpp"

namespace catreg {

struct AssociationReport {
  double pearson_c = 0.0;
  double phi = 0.0;
  double cramers_v = 0.0;
  double lambda = 1.0;
  double z_star = 0.0;
  Count n = 0;
};

namespace detail {

inline void require_n(Count n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "association measures need n >= 1");
}

}  // namespace detail

/// C_P = sqrt(z^2 / (z^2 + n)).
inline double pearson_c(double z, Count n) {
  detail::require_n(n);
  const double z2 = z * z;
  return std::sqrt(z2 / (z2 + static_cast<double>(n)));
}

/// phi = sqrt(z^2 / n), unsigned.
inline double phi_coefficient(double z, Count n) {
  detail::require_n(n);
  return std::sqrt(z * z / static_cast<double>(n));
}

/// V = sqrt(z^2 / (n (min(I, J) - 1))). For I x J tables pass z = sqrt(chi^2).
inline double cramers_v(double z, Count n, std::size_t rows, std::size_t cols) {
  detail::require_n(n);
  if (rows < 2 || cols < 2) detail::fail(ErrorCode::InvalidDims, "Cramer's V needs at least 2 rows and 2 columns");
  const auto q = static_cast<double>(std::min(rows, cols));
  return std::sqrt(z * z / (static_cast<double>(n) * (q - 1.0)));
}

/// Pearson chi-square for an I x J table with positive margins.
inline double pearson_chi_square(const ContingencyTable& t) {
  const auto n = static_cast<double>(t.total());
  for (std::size_t i = 0; i < t.rows(); ++i)
    if (t.row_total(i) == 0) detail::fail(ErrorCode::DegenerateMargin, "row total is zero");
  for (std::size_t j = 0; j < t.cols(); ++j)
    if (t.col_total(j) == 0) detail::fail(ErrorCode::DegenerateMargin, "column total is zero");
  double chi2 = 0.0;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) {
      const double expected = static_cast<double>(t.row_total(i)) * static_cast<double>(t.col_total(j)) / n;
      const double d = static_cast<double>(t(i, j)) - expected;
      chi2 += d * d / expected;
    }
  }
  return chi2;
}

/// Measures built on the regularized homogeneity statistic Z*(lambda) of a 2x2 table.
inline AssociationReport regularized_association(const ContingencyTable& t, double lambda) {
  const TestReport z = homogeneity_regularized(t, lambda);
  AssociationReport r;
  r.lambda = lambda;
  r.z_star = z.statistic;
  r.n = t.total();
  r.pearson_c = pearson_c(r.z_star, r.n);
  r.phi = phi_coefficient(r.z_star, r.n);
  r.cramers_v = cramers_v(r.z_star, r.n, 2, 2);
  return r;
}

/// Classical measures for an I x J table from Pearson's chi-square (lambda = 1).
inline AssociationReport classical_association(const ContingencyTable& t) {
  AssociationReport r;
  r.lambda = 1.0;
  r.n = t.total();
  if (t.is_2x2()) {
    r.z_star = homogeneity_z(t);
  } else {
    r.z_star = std::sqrt(pearson_chi_square(t));
  }
  r.pearson_c = pearson_c(r.z_star, r.n);
  r.phi = phi_coefficient(r.z_star, r.n);
  r.cramers_v = cramers_v(r.z_star, r.n, t.rows(), t.cols());
  return r;
}

}  // namespace catreg
