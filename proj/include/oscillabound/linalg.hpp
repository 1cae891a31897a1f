#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "oscillabound/poly.hpp"

namespace oscillabound {

/// Small dense row-major matrix over the rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  RationalMatrix transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols_ != b.rows_) throw ValidationError("matrix dimension mismatch");
    RationalMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  /// Exact rank by Gaussian elimination.
  std::size_t rank() const {
    RationalMatrix m = *this;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
      std::size_t piv = r;
      while (piv < rows_ && m(piv, c) == 0) ++piv;
      if (piv == rows_) continue;
      m.swap_rows(piv, r);
      for (std::size_t i = r + 1; i < rows_; ++i) {
        if (m(i, c) == 0) continue;
        const Rational f = m(i, c) / m(r, c);
        for (std::size_t j = c; j < cols_; ++j) m(i, j) -= f * m(r, j);
      }
      ++r;
    }
    return r;
  }

  Rational determinant() const {
    if (rows_ != cols_) throw ValidationError("determinant of a non-square matrix");
    RationalMatrix m = *this;
    Rational det(1);
    for (std::size_t c = 0; c < cols_; ++c) {
      std::size_t piv = c;
      while (piv < rows_ && m(piv, c) == 0) ++piv;
      if (piv == rows_) return Rational(0);
      if (piv != c) {
        m.swap_rows(piv, c);
        det = -det;
      }
      det *= m(c, c);
      for (std::size_t i = c + 1; i < rows_; ++i) {
        if (m(i, c) == 0) continue;
        const Rational f = m(i, c) / m(c, c);
        for (std::size_t j = c; j < cols_; ++j) m(i, j) -= f * m(c, j);
      }
    }
    return det;
  }

  /// Solves this * x = b exactly; nullopt when singular.
  std::optional<std::vector<Rational>> solve(const std::vector<Rational>& b) const {
    if (rows_ != cols_ || b.size() != rows_) throw ValidationError("solve: dimension mismatch");
    const std::size_t n = rows_;
    RationalMatrix m(n, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m(i, j) = (*this)(i, j);
      m(i, n) = b[i];
    }
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      while (piv < n && m(piv, c) == 0) ++piv;
      if (piv == n) return std::nullopt;
      m.swap_rows(piv, c);
      for (std::size_t i = 0; i < n; ++i) {
        if (i == c || m(i, c) == 0) continue;
        const Rational f = m(i, c) / m(c, c);
        for (std::size_t j = c; j <= n; ++j) m(i, j) -= f * m(c, j);
      }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = m(i, n) / m(i, i);
    return x;
  }

  /// Characteristic polynomial det(xI - A) by the Faddeev-LeVerrier recursion
  /// (exact over Q).
  RationalPoly characteristic_polynomial() const {
    if (rows_ != cols_) throw ValidationError("characteristic polynomial of a non-square matrix");
    const std::size_t n = rows_;
    std::vector<Rational> c(n + 1);
    c[n] = 1;
    RationalMatrix mk(n, n);  // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
      RationalMatrix next = (*this) * mk;
      for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
      mk = std::move(next);
      const RationalMatrix am = (*this) * mk;
      Rational tr(0);
      for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
      c[n - k] = -tr / static_cast<unsigned long>(k);
    }
    return RationalPoly(std::move(c));
  }

 private:
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

}  // namespace oscillabound
