#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wco/calculus.hpp"
#include "wco/classify.hpp"
#include "wco/dense_matrix.hpp"
#include "wco/oracle_matrix.hpp"
#include "wco/space.hpp"

namespace wco {

/// Generator for trial `index` of a run seeded with `seed`; independent of the
/// order in which trials are evaluated.
inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

/// p/q with p, q uniform in [1, 9].
inline Rational random_positive_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> digit(1, 9);
  const int p = digit(rng);
  const int q = digit(rng);
  Rational r(p, q);
  r.canonicalize();
  return r;
}

/// Random finite system on `size` atoms: rational masses and weights p/q
/// (weight 0 with probability 1/8) and a uniformly random map.
inline WeightedSystem<Rational> random_finite_system(std::mt19937_64& rng, std::size_t size) {
  WeightedSystem<Rational> w;
  std::uniform_int_distribution<std::size_t> target(0, size - 1);
  std::uniform_int_distribution<int> eighth(0, 7);
  for (std::size_t k = 0; k < size; ++k) {
    w.masses.push_back(random_positive_rational(rng));
    w.phi.push_back(target(rng));
    const bool zero = eighth(rng) == 0;
    const Rational u = random_positive_rational(rng);
    w.usq.push_back(zero ? Rational(0) : u);
  }
  return w;
}

/// Vector with entries p/q, p in [-9, 9], q in [1, 9].
inline std::vector<Rational> random_vector(std::mt19937_64& rng, std::size_t size) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
  std::vector<Rational> f;
  for (std::size_t k = 0; k < size; ++k) {
    const int p = num(rng);
    const int q = den(rng);
    Rational r(p, q);
    r.canonicalize();
    f.push_back(r);
  }
  return f;
}

template <class S>
std::vector<S> random_vector_as(std::mt19937_64& rng, std::size_t size) {
  const auto f = random_vector(rng, size);
  if constexpr (std::is_same_v<S, Rational>) return f;
  else {
    std::vector<S> out;
    for (const auto& x : f) out.push_back(x.get_d());
    return out;
  }
}

template <class S>
struct OracleOrder {
  unsigned order = 0;
  bool expansive = false;
  bool isometry = false;
  std::vector<S> gram_diagonal;
  /// Largest Theta over the sampled vectors (and the basis witness).
  std::optional<S> max_theta;
  bool positive_theta_found = false;
  std::optional<Atom> basis_witness;  // atom whose indicator has Theta > 0
  bool classify_agrees = true;
};

template <class S>
struct OracleReport {
  std::vector<OracleOrder<S>> orders;
  unsigned trials = 0;
  std::uint64_t seed = 0;
  std::size_t mismatches = 0;
  std::vector<std::string> mismatch_details;

  bool full_agreement() const { return mismatches == 0; }
};

/// Ground-truth verdicts from explicit matrices, cross-checked against sampled
/// quadratic forms and against the pointwise criteria of `expansivity`.
///
/// Throws OracleMismatch if B_n is not diagonal, if the quadratic form disagrees
/// with Theta, or if a sampled Theta contradicts the oracle's own verdict.
template <class S>
OracleReport<S> oracle_verdicts(const ValidatedSystem<S>& sys, unsigned max_order, unsigned trials, std::uint64_t seed,
                                double tolerance = 1e-9) {
  if (!sys.is_finite()) throw Error(ErrorKind::refuses_tail_space, "oracle runs on finite spaces only");
  const std::size_t size = sys.head_size();
  OracleReport<S> out;
  out.trials = trials;
  out.seed = seed;

  ClassifyOptions opt;
  opt.max_order = max_order;
  opt.alt_shifts = 0;
  opt.alt_depth = 1;
  opt.tolerance = tolerance;
  const auto criteria = expansivity(sys, opt);

  for (unsigned n = 1; n <= max_order; ++n) {
    OracleOrder<S> o;
    o.order = n;
    const auto gram = binomial_gram(sys, n);
    if (!gram.is_diagonal())
      throw Error(ErrorKind::oracle_mismatch, "B_" + std::to_string(n) + " has nonzero off-diagonal entries");
    Matrix<S> b(size);
    for (std::size_t k = 0; k < size; ++k) {
      b(k, k) = OracleRing<S>::to_scalar(gram(k, k));
      o.gram_diagonal.push_back(b(k, k));
    }
    bool all_nonpositive = true, all_zero = true;
    for (const auto& d : o.gram_diagonal) {
      const int s = Field<S>::sign(d, tolerance);
      all_nonpositive = all_nonpositive && s <= 0;
      all_zero = all_zero && s == 0;
    }
    o.expansive = all_nonpositive;
    o.isometry = all_zero;

    // -W B must be positive semidefinite exactly when the diagonal says so.
    Matrix<S> neg(size);
    for (std::size_t k = 0; k < size; ++k) neg(k, k) = S(-b(k, k) * sys.mass(k));
    if (is_positive_semidefinite(neg, tolerance) != o.expansive)
      throw Error(ErrorKind::oracle_mismatch, "LDL semidefiniteness disagrees with the diagonal of B_" + std::to_string(n));

    auto check_vector = [&](const std::vector<S>& f) {
      const S th = theta<S>(sys, n, f);
      const S form = quadratic_form<S>(sys, b, f);
      if (!Field<S>::near(th, form, tolerance))
        throw Error(ErrorKind::oracle_mismatch, "Theta differs from <B_" + std::to_string(n) + " f, f>");
      const int s = Field<S>::sign(th, tolerance);
      if ((o.expansive && s > 0) || (o.isometry && s != 0))
        throw Error(ErrorKind::oracle_mismatch, "sampled Theta contradicts the verdict at order " + std::to_string(n));
      if (!o.max_theta || th > *o.max_theta) o.max_theta = th;
      if (s > 0) o.positive_theta_found = true;
    };
    for (std::size_t k = 0; k < size; ++k) {
      if (Field<S>::sign(o.gram_diagonal[k], tolerance) > 0) {
        std::vector<S> e(size, S(0));
        e[k] = S(1);
        check_vector(e);
        o.basis_witness = k;
        break;
      }
    }
    for (unsigned t = 0; t < trials; ++t) {
      auto rng = trial_rng(seed, static_cast<std::uint64_t>(n) * 1000003u + t);
      check_vector(random_vector_as<S>(rng, size));
    }

    const auto& c = criteria.orders[n - 1];
    o.classify_agrees = c.status == Status::yes && c.expansive == o.expansive && c.isometry == o.isometry;
    if (!o.classify_agrees) {
      ++out.mismatches;
      out.mismatch_details.push_back("order " + std::to_string(n) + ": pointwise criteria and matrix oracle disagree");
    }
    out.orders.push_back(std::move(o));
  }
  return out;
}

}  // namespace wco
