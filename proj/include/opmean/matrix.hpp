#pragma once

// Dense square matrices.  `Matrix` is an arbitrary real n x n grid (used for
// congruence factors, orthogonal bases and contractions); `SymMatrix` is the
// symmetric subset every functional-calculus operation works on.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "opmean/errors.hpp"

namespace opmean {

class Matrix {
 public:
  Matrix() = default;

  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  Matrix(std::size_t n, std::vector<double> row_major) : n_(n), data_(std::move(row_major)) {
    if (data_.size() != n_ * n_) throw shape_error("Matrix: entry count does not match dimension");
  }

  Matrix(std::initializer_list<std::initializer_list<double>> rows) : n_(rows.size()) {
    data_.reserve(n_ * n_);
    for (const auto& row : rows) {
      if (row.size() != n_) throw shape_error("Matrix: rows must have length equal to the row count");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(std::span<const double> d) {
    Matrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  [[nodiscard]] std::size_t dim() const noexcept { return n_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

  [[nodiscard]] Matrix transposed() const {
    Matrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  [[nodiscard]] double max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  [[nodiscard]] double frobenius() const noexcept {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

  [[nodiscard]] bool all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    a.check_same(b);
    const std::size_t n = a.n_;
    Matrix c(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  void check_same(const Matrix& o) const {
    if (o.n_ != n_)
      throw shape_error("dimension mismatch: " + std::to_string(n_) + " vs " + std::to_string(o.n_));
  }

  std::size_t n_ = 0;
  std::vector<double> data_;
};

// Largest entrywise difference.
inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim()) throw shape_error("max_abs_diff: dimension mismatch");
  double m = 0.0;
  const auto x = a.data();
  const auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

// ||a - b||_max / ||b||_max, with the denominator floored at the smallest
// normal double so the zero matrix compares sensibly.
inline double relative_max_diff(const Matrix& a, const Matrix& b) {
  return max_abs_diff(a, b) / std::max(b.max_abs(), 2.2250738585072014e-308);
}

// Relative asymmetry accepted (and averaged away) when building a SymMatrix.
inline constexpr double kSymmetryTol = 1e-12;

// Real symmetric matrix.  Immutable after construction; entries are exactly
// symmetric and finite.
class SymMatrix {
 public:
  SymMatrix() = default;

  // Symmetrizes `m` as (m + m^T)/2.  Rejects non-finite entries and asymmetry
  // above kSymmetryTol * ||m||_max.
  explicit SymMatrix(const Matrix& m) : m_(m.dim()) {
    if (m.dim() == 0) throw shape_error("SymMatrix: dimension must be positive");
    if (!m.all_finite()) throw domain_error("SymMatrix: entries must be finite");
    const std::size_t n = m.dim();
    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) asym = std::max(asym, std::abs(m(i, j) - m(j, i)));
    if (asym > kSymmetryTol * m.max_abs())
      throw domain_error("SymMatrix: input is not symmetric (max asymmetry " + std::to_string(asym) + ")");
    for (std::size_t i = 0; i < n; ++i) {
      m_(i, i) = m(i, i);
      for (std::size_t j = i + 1; j < n; ++j) m_(i, j) = m_(j, i) = 0.5 * (m(i, j) + m(j, i));
    }
  }

  SymMatrix(std::initializer_list<std::initializer_list<double>> rows) : SymMatrix(Matrix(rows)) {}

  // Builds a matrix from `entry(i, j)` evaluated on the upper triangle only and
  // mirrored, so the result is exactly symmetric.
  template <class F>
  static SymMatrix generate(std::size_t n, F&& entry) {
    if (n == 0) throw shape_error("SymMatrix: dimension must be positive");
    SymMatrix s;
    s.m_ = Matrix(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        const double v = entry(i, j);
        if (!std::isfinite(v)) throw domain_error("SymMatrix: entries must be finite");
        s.m_(i, j) = s.m_(j, i) = v;
      }
    return s;
  }

  static SymMatrix identity(std::size_t n) { return scalar(n, 1.0); }

  static SymMatrix scalar(std::size_t n, double c) {
    return generate(n, [c](std::size_t i, std::size_t j) { return i == j ? c : 0.0; });
  }

  static SymMatrix diagonal(std::span<const double> d) {
    return generate(d.size(), [d](std::size_t i, std::size_t j) { return i == j ? d[i] : 0.0; });
  }

  [[nodiscard]] std::size_t dim() const noexcept { return m_.dim(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }
  [[nodiscard]] double max_abs() const noexcept { return m_.max_abs(); }
  [[nodiscard]] double frobenius() const noexcept { return m_.frobenius(); }

  [[nodiscard]] double trace() const noexcept {
    double t = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) t += m_(i, i);
    return t;
  }

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
    check_same(a, b);
    return generate(a.dim(), [&](std::size_t i, std::size_t j) { return a(i, j) + b(i, j); });
  }
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    check_same(a, b);
    return generate(a.dim(), [&](std::size_t i, std::size_t j) { return a(i, j) - b(i, j); });
  }
  friend SymMatrix operator*(double s, const SymMatrix& a) {
    return generate(a.dim(), [&](std::size_t i, std::size_t j) { return s * a(i, j); });
  }
  friend SymMatrix operator*(const SymMatrix& a, double s) { return s * a; }

  friend bool operator==(const SymMatrix& a, const SymMatrix& b) { return a.m_ == b.m_; }

 private:
  static void check_same(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim())
      throw shape_error("dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }

  Matrix m_;
};

inline double max_abs_diff(const SymMatrix& a, const SymMatrix& b) { return max_abs_diff(a.matrix(), b.matrix()); }
inline double relative_max_diff(const SymMatrix& a, const SymMatrix& b) {
  return relative_max_diff(a.matrix(), b.matrix());
}

// Direct sum diag(a, b).
inline SymMatrix direct_sum(const SymMatrix& a, const SymMatrix& b) {
  const std::size_t p = a.dim();
  return SymMatrix::generate(p + b.dim(), [&](std::size_t i, std::size_t j) {
    if (j < p) return a(i, j);
    if (i >= p) return b(i - p, j - p);
    return 0.0;
  });
}

// Principal submatrix on rows/columns [offset, offset + size).
inline SymMatrix principal_block(const SymMatrix& a, std::size_t offset, std::size_t size) {
  if (offset + size > a.dim() || size == 0) throw shape_error("principal_block: range out of bounds");
  return SymMatrix::generate(size, [&](std::size_t i, std::size_t j) { return a(offset + i, offset + j); });
}

}  // namespace opmean
