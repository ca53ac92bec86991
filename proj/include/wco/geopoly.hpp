#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "wco/scalar.hpp"

namespace wco {

/// Exponential polynomial k -> sum_i coeff_i * ratio_i^k over integer atoms k.
///
/// Used to carry per-atom quantities (masses, weights, J_n, Delta) on the
/// geometric tail of an infinite space in closed form. Ratios are positive.
template <class S>
class GeoPoly {
 public:
  struct Term {
    S coeff;
    S ratio;
  };

  GeoPoly() = default;
  explicit GeoPoly(std::vector<Term> terms) : terms_(std::move(terms)) { normalize(); }

  static GeoPoly constant(const S& c) { return GeoPoly({Term{c, S(1)}}); }
  static GeoPoly single(const S& coeff, const S& ratio) { return GeoPoly({Term{coeff, ratio}}); }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  S operator()(long k) const {
    S sum(0);
    for (const auto& t : terms_) sum += t.coeff * Field<S>::pow(t.ratio, k);
    return sum;
  }

  friend GeoPoly operator+(const GeoPoly& a, const GeoPoly& b) {
    std::vector<Term> out = a.terms_;
    out.insert(out.end(), b.terms_.begin(), b.terms_.end());
    return GeoPoly(std::move(out));
  }

  friend GeoPoly operator*(const S& c, const GeoPoly& p) {
    std::vector<Term> out;
    for (const auto& t : p.terms_) out.push_back(Term{S(c * t.coeff), t.ratio});
    return GeoPoly(std::move(out));
  }

  friend GeoPoly operator-(const GeoPoly& a, const GeoPoly& b) { return a + S(-1) * b; }

  friend GeoPoly operator*(const GeoPoly& a, const GeoPoly& b) {
    std::vector<Term> out;
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) out.push_back(Term{S(x.coeff * y.coeff), S(x.ratio * y.ratio)});
    return GeoPoly(std::move(out));
  }

  /// k -> p(k + d).
  GeoPoly shifted(long d) const {
    std::vector<Term> out;
    for (const auto& t : terms_) out.push_back(Term{S(t.coeff * Field<S>::pow(t.ratio, d)), t.ratio});
    return GeoPoly(std::move(out));
  }

  /// Representation is unique once normalized, so equality is termwise.
  bool equals(const GeoPoly& other, double tolerance) const {
    if (terms_.size() != other.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (!Field<S>::near(terms_[i].ratio, other.terms_[i].ratio, tolerance)) return false;
      if (!Field<S>::near(terms_[i].coeff, other.terms_[i].coeff, tolerance)) return false;
    }
    return true;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (i) out += " + ";
      out += "(" + Field<S>::format(terms_[i].coeff) + ")*(" + Field<S>::format(terms_[i].ratio) + ")^k";
    }
    return out;
  }

 private:
  // Merge equal ratios, drop zero coefficients, sort by ratio descending.
  void normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.ratio > b.ratio; });
    std::vector<Term> merged;
    for (auto& t : terms_) {
      if (!(t.ratio > 0)) throw Error(ErrorKind::invalid_tail, "geometric ratio must be positive");
      if (!merged.empty() && Field<S>::near(merged.back().ratio, t.ratio, 0.0))
        merged.back().coeff += t.coeff;
      else
        merged.push_back(std::move(t));
    }
    std::erase_if(merged, [](const Term& t) { return t.coeff == 0; });
    terms_ = std::move(merged);
  }

  std::vector<Term> terms_;
};

enum class SignKind { nonpositive, nonnegative, zero, mixed };

inline std::string_view sign_kind_name(SignKind k) {
  switch (k) {
    case SignKind::nonpositive: return "nonpositive-everywhere";
    case SignKind::nonnegative: return "nonnegative-everywhere";
    case SignKind::zero: return "zero";
    case SignKind::mixed: return "mixed";
  }
  return "?";
}

template <class S>
struct SignReport {
  SignKind kind = SignKind::zero;
  /// First k >= from with a positive value, when one exists.
  std::optional<long> witness;
  /// Largest value over the exhaustively scanned window [from, crossover].
  S max_value = S(0);
  long argmax = 0;
  /// From this atom on, the sign equals that of the dominant term.
  long crossover = 0;
};

/// Sign of p(k) over every integer k >= from.
///
/// The term with the largest ratio dominates: past the first k0 where the sum of
/// the other terms' magnitudes (scaled by the dominant ratio) drops below the
/// dominant coefficient, p(k) has the dominant sign. Atoms in [from, k0) are
/// checked one by one.
template <class S>
SignReport<S> geopoly_sign(const GeoPoly<S>& p, long from, double tolerance = 0.0) {
  SignReport<S> out;
  out.argmax = from;
  out.crossover = from;
  const auto& terms = p.terms();
  if (terms.empty()) return out;

  const S lead = terms.front().coeff;
  const S lead_abs = lead < 0 ? S(-lead) : lead;
  const S dominant = terms.front().ratio;

  auto others_below_lead = [&](long k) {
    S rest(0);
    for (std::size_t i = 1; i < terms.size(); ++i) {
      const S mag = terms[i].coeff < 0 ? S(-terms[i].coeff) : terms[i].coeff;
      rest += mag * Field<S>::pow(S(terms[i].ratio / dominant), k);
    }
    return rest < lead_abs;
  };

  long k0 = from;
  if (!others_below_lead(k0)) {
    constexpr long kSearchLimit = 1L << 20;
    long step = 1;
    while (!others_below_lead(from + step)) {
      step *= 2;
      if (step > kSearchLimit)
        throw Error(ErrorKind::unsupported_tail_analysis, "geometric crossover beyond search limit");
    }
    long lo = from + step / 2, hi = from + step;  // predicate false at lo (or lo == from), true at hi
    while (hi - lo > 1) {
      const long mid = lo + (hi - lo) / 2;
      if (others_below_lead(mid)) hi = mid; else lo = mid;
    }
    k0 = hi;
  }
  out.crossover = k0;

  bool any_positive = false, any_negative = false;
  bool first = true;
  for (long k = from; k <= k0; ++k) {
    const S v = p(k);
    if (first || v > out.max_value) {
      out.max_value = v;
      out.argmax = k;
      first = false;
    }
    const int s = Field<S>::sign(v, tolerance);
    if (s > 0) {
      any_positive = true;
      if (!out.witness) out.witness = k;
    } else if (s < 0) {
      any_negative = true;
    }
  }
  const int eventual = Field<S>::sign(lead, tolerance);
  if (eventual > 0) any_positive = true;
  if (eventual < 0) any_negative = true;

  if (any_positive && any_negative) out.kind = SignKind::mixed;
  else if (any_positive) out.kind = SignKind::nonnegative;
  else if (any_negative) out.kind = SignKind::nonpositive;
  else out.kind = SignKind::zero;
  return out;
}

}  // namespace wco
