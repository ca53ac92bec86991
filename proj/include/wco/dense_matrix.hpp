#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "wco/scalar.hpp"
#include "wco/surd.hpp"

namespace wco {

inline bool ring_is_zero(const Surd& x) { return x.is_zero(); }
inline bool ring_is_zero(const Rational& x) { return x == 0; }
inline bool ring_is_zero(double x) { return x == 0.0; }

/// Square dense matrix over a ring (Rational, Surd or double).
template <class R>
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), data_(n * n, R(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = R(1);
    return m;
  }

  std::size_t size() const { return n_; }
  R& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const R& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix out(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t k = 0; k < a.n_; ++k) {
        if (ring_is_zero(a(i, k))) continue;
        for (std::size_t j = 0; j < a.n_; ++j) {
          if (ring_is_zero(b(k, j))) continue;
          out(i, j) = out(i, j) + a(i, k) * b(k, j);
        }
      }
    return out;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    Matrix out(a.n_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] + b.data_[i];
    return out;
  }

  Matrix scaled(const R& c) const {
    Matrix out(n_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = c * data_[i];
    return out;
  }

  Matrix transpose() const {
    Matrix out(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  bool is_diagonal() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (i != j && !ring_is_zero((*this)(i, j))) return false;
    return true;
  }

 private:
  std::size_t n_ = 0;
  std::vector<R> data_;
};

/// Positive semidefiniteness of a symmetric matrix by LDL^T with diagonal pivoting.
///
/// At each step the largest remaining diagonal entry is the pivot. A negative
/// pivot means indefinite; a zero pivot means every remaining diagonal is <= 0,
/// so the remaining block must vanish.
template <class S>
bool is_positive_semidefinite(Matrix<S> a, double tolerance = 0.0) {
  const std::size_t n = a.size();
  std::vector<bool> done(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t p = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i] && (p == n || a(i, i) > a(p, p))) p = i;
    const int s = Field<S>::sign(a(p, p), tolerance);
    if (s < 0) return false;
    if (s == 0) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!done[i] && !done[j] && Field<S>::sign(a(i, j), tolerance) != 0) return false;
      return true;
    }
    done[p] = true;
    const S pivot = a(p, p);
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || a(i, p) == 0) continue;
      const S factor = a(i, p) / pivot;
      for (std::size_t j = 0; j < n; ++j)
        if (!done[j]) a(i, j) -= factor * a(p, j);
    }
  }
  return true;
}

}  // namespace wco
