#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <vector>

#include "wco/dense_matrix.hpp"
#include "wco/space.hpp"
#include "wco/surd.hpp"

namespace wco {

/// Ring in which the oracle multiplies operator matrices: formal roots for exact
/// systems, plain doubles otherwise.
template <class S>
struct OracleRing;

template <>
struct OracleRing<Rational> {
  using type = Surd;

  static Surd root_of_weight(const ValidatedSystem<Rational>& sys, Atom j, const Surd::Squares& squares) {
    (void)sys;
    return Surd::root(j, squares);
  }
  static Surd lift(const Rational& q) { return Surd(q); }
  static bool equals(const Surd& a, const Rational& b, double) { return a.is_rational() && a.rational() == b; }
  static Rational to_scalar(const Surd& a) { return a.rational(); }
};

template <>
struct OracleRing<double> {
  using type = double;

  static double root_of_weight(const ValidatedSystem<double>& sys, Atom j, const Surd::Squares&) { return std::sqrt(sys.usq(j)); }
  static double lift(double q) { return q; }
  static bool equals(double a, double b, double tolerance) { return Field<double>::near(a, b, tolerance); }
  static double to_scalar(double a) { return a; }
};

template <class S>
using RingOf = typename OracleRing<S>::type;

namespace detail {

template <class S>
void require_finite(const ValidatedSystem<S>& sys) {
  if (!sys.is_finite()) throw Error(ErrorKind::refuses_tail_space, "the matrix oracle needs a finite space");
}

template <class S>
Surd::Squares squares_of(const ValidatedSystem<S>& sys) {
  if constexpr (std::is_same_v<S, Rational>) return std::make_shared<const std::vector<Rational>>(sys.description().usq);
  else return nullptr;
}

}  // namespace detail

/// uC_phi in the orthonormal atom basis e_k = 1_{k} / sqrt(m_k).
///
/// Row j has its only nonzero in column phi(j), with |entry|^2 = |u_j|^2 m_j / m_{phi(j)}.
/// Squared magnitudes are kept exactly; the signed entries (taking u_j >= 0) are
/// for display.
template <class S>
struct OperatorMatrix {
  std::size_t size = 0;
  std::vector<Atom> column;
  std::vector<S> squared_entry;

  /// (M^*M)(k, k) = sum over rows landing in column k.
  std::vector<S> gram_diagonal() const {
    std::vector<S> out(size, S(0));
    for (std::size_t j = 0; j < size; ++j) out[column[j]] += squared_entry[j];
    return out;
  }

  std::vector<std::vector<double>> display() const {
    std::vector<std::vector<double>> out(size, std::vector<double>(size, 0.0));
    for (std::size_t j = 0; j < size; ++j) out[j][column[j]] = std::sqrt(Field<S>::to_double(squared_entry[j]));
    return out;
  }
};

template <class S>
OperatorMatrix<S> matrix_of(const ValidatedSystem<S>& sys) {
  detail::require_finite(sys);
  OperatorMatrix<S> m;
  m.size = sys.head_size();
  for (Atom j = 0; j < m.size; ++j) {
    m.column.push_back(sys.phi(j));
    m.squared_entry.push_back(sys.usq(j) * sys.mass(j) / sys.mass(sys.phi(j)));
  }
  return m;
}

/// (Tf)_j = u_j f_{phi(j)} as a matrix in atom coordinates, over the oracle ring.
template <class S>
Matrix<RingOf<S>> atom_operator(const ValidatedSystem<S>& sys) {
  detail::require_finite(sys);
  const auto squares = detail::squares_of(sys);
  Matrix<RingOf<S>> a(sys.head_size());
  for (Atom j = 0; j < sys.head_size(); ++j) a(j, sys.phi(j)) = OracleRing<S>::root_of_weight(sys, j, squares);
  return a;
}

/// Adjoint with respect to <f, g> = sum_k f_k g_k m_k: (A^*)(k, j) = A(j, k) m_j / m_k.
template <class S>
Matrix<RingOf<S>> weighted_adjoint(const ValidatedSystem<S>& sys, const Matrix<RingOf<S>>& a) {
  const std::size_t n = a.size();
  Matrix<RingOf<S>> out(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (!ring_is_zero(a(j, k))) out(k, j) = OracleRing<S>::lift(S(sys.mass(j) / sys.mass(k))) * a(j, k);
  return out;
}

/// B_n = sum_i (-1)^i C(n,i) (T^*)^i T^i, by explicit matrix products.
template <class S>
Matrix<RingOf<S>> binomial_gram(const ValidatedSystem<S>& sys, unsigned n) {
  const auto a = atom_operator(sys);
  const auto weights = alternating_binomials<S>(n);
  const std::size_t size = a.size();
  Matrix<RingOf<S>> power = Matrix<RingOf<S>>::identity(size);
  Matrix<RingOf<S>> out(size);
  for (unsigned i = 0; i <= n; ++i) {
    if (i > 0) power = a * power;
    const auto gram = weighted_adjoint(sys, power) * power;
    out = out + gram.scaled(OracleRing<S>::lift(weights[i]));
  }
  return out;
}

/// ||T^i f||^2 by pushing |f|^2 through the operator: |(Tg)_k|^2 = |u_k|^2 |g_{phi(k)}|^2.
template <class S>
S power_norm_sq(const ValidatedSystem<S>& sys, unsigned i, std::span<const S> f) {
  detail::require_finite(sys);
  std::vector<S> sq(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) sq[k] = f[k] * f[k];
  for (unsigned step = 0; step < i; ++step) {
    std::vector<S> next(sq.size());
    for (Atom k = 0; k < sq.size(); ++k) next[k] = sys.usq(k) * sq[sys.phi(k)];
    sq = std::move(next);
  }
  S norm(0);
  for (Atom k = 0; k < sq.size(); ++k) norm += sq[k] * sys.mass(k);
  return norm;
}

/// Theta_{T,n}(f) = sum_i (-1)^i C(n,i) ||T^i f||^2.
template <class S>
S theta(const ValidatedSystem<S>& sys, unsigned n, std::span<const S> f) {
  if (f.size() != sys.head_size()) throw Error(ErrorKind::invalid_map, "vector size does not match the space");
  const auto weights = alternating_binomials<S>(n);
  S sum(0);
  for (unsigned i = 0; i <= n; ++i) sum += weights[i] * power_norm_sq(sys, i, f);
  return sum;
}

/// <B f, f> in the m-weighted inner product, for a matrix with scalar entries.
template <class S>
S quadratic_form(const ValidatedSystem<S>& sys, const Matrix<S>& b, std::span<const S> f) {
  S sum(0);
  for (std::size_t k = 0; k < b.size(); ++k) {
    S row(0);
    for (std::size_t j = 0; j < b.size(); ++j) row += b(k, j) * f[j];
    sum += row * f[k] * sys.mass(k);
  }
  return sum;
}

/// T^*T = TT^* = I in the m-weighted inner product.
template <class S>
bool unitary_check(const ValidatedSystem<S>& sys, double tolerance = 1e-9) {
  const auto a = atom_operator(sys);
  const auto adj = weighted_adjoint(sys, a);
  auto is_identity = [&](const Matrix<RingOf<S>>& m) {
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j)
        if (!OracleRing<S>::equals(m(i, j), S(i == j ? 1 : 0), tolerance)) return false;
    return true;
  };
  return is_identity(adj * a) && is_identity(a * adj);
}

}  // namespace wco
