#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hgsp {

/// Small dense row-major matrix. Sized for kernels (k^3 <= a few hundred)
/// and per-point neighborhoods, not for large systems.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  Matrix transpose() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

Matrix multiply(const Matrix& a, const Matrix& b);

/// Largest absolute entry of a - b.
double max_abs_difference(const Matrix& a, const Matrix& b);

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column j pairs with values[j]
};

/// Cyclic Jacobi eigensolver for small symmetric matrices. Eigenvalues are
/// returned ascending (ties keep diagonal order) and each eigenvector is
/// sign-normalized with normalize_column_signs. Off-diagonal entries below
/// 1e-14 of the adjacent diagonal mass are treated as exact zeros, which
/// keeps degenerate eigenspaces aligned with the input axes instead of with
/// rounding noise.
SymmetricEigen symmetric_eigen(const Matrix& a);

/// Flips each column so its largest-magnitude entry is positive. Entries
/// within a relative 1e-9 of the maximum count as ties, resolved by lowest
/// row index.
void normalize_column_signs(Matrix& v);

}  // namespace hgsp
