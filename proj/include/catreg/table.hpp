#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "catreg/error.hpp"

namespace catreg {

using Count = std::int64_t;

/// Immutable I x J table of nonnegative counts. Marginals are recomputed
/// from the cells on every call.
class ContingencyTable {
 public:
  /// Validates and builds a table from rectangular rows.
  /// Throws EmptyTable, NegativeCell, ZeroTotal, or InvalidArgument (ragged rows, overflow).
  static ContingencyTable from_rows(const std::vector<std::vector<Count>>& rows) {
    if (rows.empty() || rows.front().empty()) detail::fail(ErrorCode::EmptyTable, "table needs at least one row and one column");
    const std::size_t cols = rows.front().size();
    std::vector<Count> cells;
    cells.reserve(rows.size() * cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) {
        detail::fail(ErrorCode::InvalidArgument, "row " + std::to_string(i + 1) + " has " +
                                                     std::to_string(rows[i].size()) + " cells, expected " +
                                                     std::to_string(cols));
      }
      cells.insert(cells.end(), rows[i].begin(), rows[i].end());
    }
    return ContingencyTable(rows.size(), cols, std::move(cells));
  }

  static ContingencyTable from_rows(std::initializer_list<std::initializer_list<Count>> rows) {
    std::vector<std::vector<Count>> v;
    for (const auto& r : rows) v.emplace_back(r);
    return from_rows(v);
  }

  /// Row-major cells; cells.size() must equal rows * cols.
  ContingencyTable(std::size_t rows, std::size_t cols, std::vector<Count> cells)
      : rows_(rows), cols_(cols), cells_(std::move(cells)) {
    if (rows_ == 0 || cols_ == 0) detail::fail(ErrorCode::EmptyTable, "table needs at least one row and one column");
    if (cells_.size() != rows_ * cols_) detail::fail(ErrorCode::InvalidArgument, "cell count does not match dimensions");
    Count total = 0;
    for (std::size_t k = 0; k < cells_.size(); ++k) {
      if (cells_[k] < 0) {
        detail::fail(ErrorCode::NegativeCell, "cell (" + std::to_string(k / cols_ + 1) + "," +
                                                  std::to_string(k % cols_ + 1) + ") is negative");
      }
      if (cells_[k] > std::numeric_limits<Count>::max() - total) detail::fail(ErrorCode::InvalidArgument, "total count overflows");
      total += cells_[k];
    }
    if (total == 0) detail::fail(ErrorCode::ZeroTotal, "all cells are zero");
    total_ = total;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_2x2() const noexcept { return rows_ == 2 && cols_ == 2; }

  Count operator()(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j]; }
  Count total() const noexcept { return total_; }
  std::span<const Count> cells() const noexcept { return cells_; }

  Count row_total(std::size_t i) const {
    Count s = 0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j);
    return s;
  }

  Count col_total(std::size_t j) const {
    Count s = 0;
    for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, j);
    return s;
  }

  std::vector<std::vector<Count>> to_rows() const {
    std::vector<std::vector<Count>> out(rows_, std::vector<Count>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
    return out;
  }

  ContingencyTable transposed() const {
    std::vector<Count> t(cells_.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t[j * rows_ + i] = (*this)(i, j);
    return ContingencyTable(cols_, rows_, std::move(t));
  }

  friend bool operator==(const ContingencyTable&, const ContingencyTable&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Count> cells_;
  Count total_ = 0;
};

/// I x J matrix of cell probabilities summing to one.
class ProbTable {
 public:
  ProbTable(std::size_t rows, std::size_t cols, std::vector<double> probs)
      : rows_(rows), cols_(cols), probs_(std::move(probs)) {
    if (probs_.size() != rows_ * cols_) detail::fail(ErrorCode::InvalidArgument, "probability count does not match dimensions");
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return probs_[i * cols_ + j]; }
  std::span<const double> probs() const noexcept { return probs_; }

  double row_margin(std::size_t i) const {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j);
    return s;
  }

  double col_margin(std::size_t j) const {
    double s = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, j);
    return s;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> probs_;
};

/// Cell-wise maximum-likelihood probabilities n_ij / n.
inline ProbTable mle_probs(const ContingencyTable& t) {
  const auto n = static_cast<double>(t.total());
  std::vector<double> p;
  p.reserve(t.cells().size());
  for (Count c : t.cells()) p.push_back(static_cast<double>(c) / n);
  return ProbTable(t.rows(), t.cols(), std::move(p));
}

/// Removes all-zero rows and columns; remaining cells keep their order.
inline ContingencyTable drop_empty_margins(const ContingencyTable& t) {
  std::vector<std::size_t> keep_rows;
  std::vector<std::size_t> keep_cols;
  for (std::size_t i = 0; i < t.rows(); ++i)
    if (t.row_total(i) > 0) keep_rows.push_back(i);
  for (std::size_t j = 0; j < t.cols(); ++j)
    if (t.col_total(j) > 0) keep_cols.push_back(j);
  std::vector<Count> cells;
  cells.reserve(keep_rows.size() * keep_cols.size());
  for (std::size_t i : keep_rows)
    for (std::size_t j : keep_cols) cells.push_back(t(i, j));
  return ContingencyTable(keep_rows.size(), keep_cols.size(), std::move(cells));
}

namespace detail {

inline void require_2x2(const ContingencyTable& t) {
  if (!t.is_2x2()) {
    fail(ErrorCode::InvalidDims, "expected a 2x2 table, got " + std::to_string(t.rows()) + "x" + std::to_string(t.cols()));
  }
}

}  // namespace detail
}  // namespace catreg
