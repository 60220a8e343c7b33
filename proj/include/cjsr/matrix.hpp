#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "cjsr/error.hpp"

namespace cjsr {

/// Dense real matrix, row-major. Entries are validated finite on
/// construction; operations are pure functions returning new values.
class Matrix {
 public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    check_shape();
  }

  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    check_shape();
    if (data_.size() != rows_ * cols_)
      throw invalid_input("matrix entries do not match shape");
    for (double v : data_)
      if (!std::isfinite(v)) throw invalid_input("matrix entries must be finite");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r ? rows.begin()->size() : 0;
    std::vector<double> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
      if (row.size() != c) throw invalid_input("ragged rows in matrix literal");
      data.insert(data.end(), row.begin(), row.end());
    }
    return Matrix(r, c, std::move(data));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  void check_shape() const {
    if (rows_ == 0 || cols_ == 0) throw invalid_input("matrix dimensions must be positive");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw invalid_input("matrix product dimension mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

inline Matrix operator*(const Matrix& a, const Matrix& b) { return multiply(a, b); }

/// dst = a * b without allocating; dst must already have the product shape
/// and must not alias a or b.
inline void multiply_into(Matrix& dst, const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows() || dst.rows() != a.rows() || dst.cols() != b.cols())
    throw invalid_input("matrix product dimension mismatch");
  for (double& v : dst.data()) v = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) dst(i, j) += aik * b(k, j);
    }
}

inline Matrix scale(const Matrix& a, double c) {
  Matrix out = a;
  for (double& v : out.data()) v *= c;
  return out;
}

inline void scale_in_place(Matrix& a, double c) {
  for (double& v : a.data()) v *= c;
}

inline Matrix operator*(double c, const Matrix& a) { return scale(a, c); }

inline Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

/// Kronecker product: block matrix with (i,j) block a(i,j)·b.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double aij = a(i, j);
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          out(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
    }
  return out;
}

/// Ordered product S_{i0}·S_{i1}···S_{i_{n-1}} (first symbol leftmost).
/// Symbols are 0-based indices into `matrices`; the word must be nonempty
/// and all matrices square of equal dimension.
inline Matrix product_along_word(std::span<const Matrix> matrices, std::span<const int> word) {
  if (word.empty()) throw invalid_input("empty word has no product");
  const std::size_t d = matrices.empty() ? 0 : matrices.front().rows();
  for (const Matrix& m : matrices)
    if (!m.square() || m.rows() != d)
      throw invalid_input("word products need square matrices of equal dimension");
  for (int s : word)
    if (s < 0 || static_cast<std::size_t>(s) >= matrices.size())
      throw invalid_input("word symbol out of range");
  Matrix out = matrices[static_cast<std::size_t>(word[0])];
  for (std::size_t t = 1; t < word.size(); ++t)
    out = multiply(out, matrices[static_cast<std::size_t>(word[t])]);
  return out;
}

inline double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

inline double frobenius_norm(const Matrix& a) {
  // Scaled accumulation so huge entries do not overflow the sum of squares.
  const double s = max_abs(a);
  if (s == 0.0) return 0.0;
  double acc = 0.0;
  for (double v : a.data()) {
    const double t = v / s;
    acc += t * t;
  }
  return s * std::sqrt(acc);
}

/// Numerical-zero test: max-abs entry at or below 1e-12 times the given
/// scale. Products that vanish structurally are exact zeros in floating
/// point; the tolerance only guards accumulated rounding.
inline bool nearly_zero(const Matrix& a, double scale) {
  return max_abs(a) <= 1e-12 * scale;
}

}  // namespace cjsr
