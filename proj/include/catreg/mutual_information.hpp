#pragma once

// Plug-in and regularized mutual information of a two-way table, in nats.
//
// The regularized estimate replaces every cell probability by
//   pi*_ij = lambda * n_ij / n + (1 - lambda) * t_ij
// and every margin by the matching combination of the empirical margin and
// the target margins zeta_i = sum_j t_ij, eta_j = sum_i t_ij. Cells where
// pi*_ij = 0 contribute nothing (0 log 0 = 0) and are skipped.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "catreg/error.hpp"
#include "catreg/table.hpp"

namespace catreg {

/// Shrinkage targets: a joint target t with row sums zeta and column sums eta.
class MITargetSpec {
 public:
  static constexpr double tolerance = 1e-12;

  MITargetSpec(std::size_t rows, std::size_t cols, std::vector<double> t, std::vector<double> zeta,
               std::vector<double> eta)
      : rows_(rows), cols_(cols), t_(std::move(t)), zeta_(std::move(zeta)), eta_(std::move(eta)) {
    validate();
  }

  /// Builds the spec from a joint target, deriving zeta and eta from its sums.
  static MITargetSpec from_joint(std::size_t rows, std::size_t cols, std::vector<double> t) {
    if (t.size() != rows * cols) detail::fail(ErrorCode::DimensionMismatch, "target matrix size does not match dimensions");
    std::vector<double> zeta(rows, 0.0);
    std::vector<double> eta(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        zeta[i] += t[i * cols + j];
        eta[j] += t[i * cols + j];
      }
    }
    return {rows, cols, std::move(t), std::move(zeta), std::move(eta)};
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double t(std::size_t i, std::size_t j) const { return t_[i * cols_ + j]; }
  double zeta(std::size_t i) const { return zeta_[i]; }
  double eta(std::size_t j) const { return eta_[j]; }
  std::span<const double> joint() const noexcept { return t_; }

  MITargetSpec transposed() const {
    std::vector<double> tt(t_.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) tt[j * rows_ + i] = t(i, j);
    return {cols_, rows_, std::move(tt), eta_, zeta_};
  }

 private:
  void validate() const {
    if (rows_ == 0 || cols_ == 0) detail::fail(ErrorCode::InvalidDims, "targets need at least one row and column");
    if (t_.size() != rows_ * cols_ || zeta_.size() != rows_ || eta_.size() != cols_)
      detail::fail(ErrorCode::DimensionMismatch, "target vectors do not match dimensions");
    double total = 0.0;
    for (double v : t_) {
      if (!(v >= 0.0 && v <= 1.0)) detail::fail(ErrorCode::InvalidArgument, "target cells must lie in [0, 1]");
      total += v;
    }
    if (std::fabs(total - 1.0) > tolerance) detail::fail(ErrorCode::InvalidArgument, "target cells must sum to 1");
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!(zeta_[i] >= 0.0)) detail::fail(ErrorCode::InvalidArgument, "row targets must be nonnegative");
      double s = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) s += t(i, j);
      if (std::fabs(s - zeta_[i]) > tolerance)
        detail::fail(ErrorCode::InvalidArgument, "row " + std::to_string(i + 1) + " of the target does not sum to zeta");
    }
    for (std::size_t j = 0; j < cols_; ++j) {
      if (!(eta_[j] >= 0.0)) detail::fail(ErrorCode::InvalidArgument, "column targets must be nonnegative");
      double s = 0.0;
      for (std::size_t i = 0; i < rows_; ++i) s += t(i, j);
      if (std::fabs(s - eta_[j]) > tolerance)
        detail::fail(ErrorCode::InvalidArgument, "column " + std::to_string(j + 1) + " of the target does not sum to eta");
    }
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> t_;
  std::vector<double> zeta_;
  std::vector<double> eta_;
};

struct MIResult {
  double value = 0.0;  // nats
  double lambda = 1.0;
  std::size_t cells_elided = 0;

  double bits() const noexcept { return value / std::numbers::ln2; }
};

/// t_ij = 1/(IJ), zeta_i = 1/I, eta_j = 1/J.
inline MITargetSpec uniform_targets(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) detail::fail(ErrorCode::InvalidDims, "targets need at least one row and column");
  const auto ri = static_cast<double>(rows);
  const auto cj = static_cast<double>(cols);
  return {rows, cols, std::vector<double>(rows * cols, 1.0 / (ri * cj)), std::vector<double>(rows, 1.0 / ri),
          std::vector<double>(cols, 1.0 / cj)};
}

namespace detail {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      c_ += (sum_ - t) + v;
    } else {
      c_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

inline double mi_term(double p, double row, double col) { return p * (std::log(p) - std::log(row) - std::log(col)); }

inline void require_matching(const ContingencyTable& t, const MITargetSpec& targets) {
  if (t.rows() != targets.rows() || t.cols() != targets.cols()) {
    fail(ErrorCode::DimensionMismatch, "targets are " + std::to_string(targets.rows()) + "x" +
                                           std::to_string(targets.cols()) + " but the table is " +
                                           std::to_string(t.rows()) + "x" + std::to_string(t.cols()));
  }
}

inline void require_lambda_closed(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) fail(ErrorCode::InvalidArgument, "lambda must lie in [0, 1]");
}

inline std::vector<double> row_rates(const ContingencyTable& t) {
  std::vector<double> r(t.rows());
  for (std::size_t i = 0; i < t.rows(); ++i) r[i] = static_cast<double>(t.row_total(i)) / static_cast<double>(t.total());
  return r;
}

inline std::vector<double> col_rates(const ContingencyTable& t) {
  std::vector<double> c(t.cols());
  for (std::size_t j = 0; j < t.cols(); ++j) c[j] = static_cast<double>(t.col_total(j)) / static_cast<double>(t.total());
  return c;
}

}  // namespace detail

/// Plug-in mutual information sum p_ij log(p_ij / (p_i. p_.j)) over nonzero cells.
inline double mi_mle(const ContingencyTable& t) {
  const auto n = static_cast<double>(t.total());
  const auto rows = detail::row_rates(t);
  const auto cols = detail::col_rates(t);
  detail::CompensatedSum sum;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) {
      const double p = static_cast<double>(t(i, j)) / n;
      if (p == 0.0) continue;
      sum.add(detail::mi_term(p, rows[i], cols[j]));
    }
  }
  return sum.value();
}

inline MIResult mi_regularized(const ContingencyTable& t, double lambda, const MITargetSpec& targets) {
  detail::require_matching(t, targets);
  detail::require_lambda_closed(lambda);
  const double keep = 1.0 - lambda;
  const auto n = static_cast<double>(t.total());

  std::vector<double> rows = detail::row_rates(t);
  std::vector<double> cols = detail::col_rates(t);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i] = lambda * rows[i] + keep * targets.zeta(i);
    if (!(rows[i] > 0.0)) detail::fail(ErrorCode::ZeroMargin, "regularized row margin " + std::to_string(i + 1) + " is zero");
  }
  for (std::size_t j = 0; j < cols.size(); ++j) {
    cols[j] = lambda * cols[j] + keep * targets.eta(j);
    if (!(cols[j] > 0.0)) detail::fail(ErrorCode::ZeroMargin, "regularized column margin " + std::to_string(j + 1) + " is zero");
  }

  MIResult out;
  out.lambda = lambda;
  detail::CompensatedSum sum;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) {
      const double p = lambda * (static_cast<double>(t(i, j)) / n) + keep * targets.t(i, j);
      if (p == 0.0) {
        ++out.cells_elided;
        continue;
      }
      sum.add(detail::mi_term(p, rows[i], cols[j]));
    }
  }
  out.value = sum.value();
  return out;
}

/// Checks that zero-count cells with zero target drop out of the regularized
/// sum: evaluates every cell with the 0 log 0 = 0 convention and compares with
/// the sum restricted to nonzero counts. Requires positive empirical margins
/// and t_ij = 0 wherever n_ij = 0; otherwise throws HypothesisViolated.
inline bool verify_zero_elision(const ContingencyTable& t, double lambda, const MITargetSpec& targets) {
  detail::require_matching(t, targets);
  detail::require_lambda_closed(lambda);
  for (std::size_t i = 0; i < t.rows(); ++i)
    if (t.row_total(i) == 0) detail::fail(ErrorCode::HypothesisViolated, "row " + std::to_string(i + 1) + " has no counts");
  for (std::size_t j = 0; j < t.cols(); ++j)
    if (t.col_total(j) == 0) detail::fail(ErrorCode::HypothesisViolated, "column " + std::to_string(j + 1) + " has no counts");
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j)
      if (t(i, j) == 0 && targets.t(i, j) != 0.0)
        detail::fail(ErrorCode::HypothesisViolated, "nonzero target at empty cell (" + std::to_string(i + 1) + "," +
                                                        std::to_string(j + 1) + ")");

  const double keep = 1.0 - lambda;
  const auto n = static_cast<double>(t.total());
  auto rows = detail::row_rates(t);
  auto cols = detail::col_rates(t);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = lambda * rows[i] + keep * targets.zeta(i);
  for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = lambda * cols[j] + keep * targets.eta(j);

  // p log q with 0 log q = 0 for every q, including q = 0.
  auto plogq = [](double p, double q) { return p == 0.0 ? 0.0 : p * std::log(q); };
  double full = 0.0;
  double elided = 0.0;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) {
      const double p = lambda * (static_cast<double>(t(i, j)) / n) + keep * targets.t(i, j);
      full += plogq(p, p) - plogq(p, rows[i]) - plogq(p, cols[j]);
      if (t(i, j) != 0 && p != 0.0) elided += detail::mi_term(p, rows[i], cols[j]);
    }
  }
  return std::fabs(full - elided) <= 1e-12;
}

}  // namespace catreg
