#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace isda {

/// Small dense row-major matrix. Sizes here are p x p or 2p x 2p with p in
/// the dozens at most, so every operation is a straightforward loop.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> values);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] bool is_square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  [[nodiscard]] std::span<const double> data() const { return data_; }
  [[nodiscard]] std::vector<double> diagonal_values() const;

  [[nodiscard]] Matrix transpose() const;
  [[nodiscard]] double trace() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double scale);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Entrywise (Schur) product.
Matrix schur(const Matrix& a, const Matrix& b);

/// x^T A x.
double quadratic_form(const Matrix& a, std::span<const double> x);

/// Largest absolute entrywise difference.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Largest |a(i,j) - a(j,i)|.
double asymmetry(const Matrix& a);

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // columns
};

/// Cyclic Jacobi rotations on a symmetric matrix.
SymmetricEigen jacobi_eigen(const Matrix& symmetric, double tol = 1e-15, int max_sweeps = 100);

}  // namespace isda
