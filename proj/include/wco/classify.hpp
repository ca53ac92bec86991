#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "wco/calculus.hpp"
#include "wco/geopoly.hpp"
#include "wco/oracle_matrix.hpp"
#include "wco/space.hpp"

namespace wco {

struct ClassifyOptions {
  unsigned max_order = 4;
  unsigned alt_shifts = 4;
  unsigned alt_depth = 4;
  double tolerance = 1e-9;
};

struct DenseVerdict {
  bool dense = true;
  std::optional<Atom> witness;  // first atom with J_1 = +inf
};

enum class Status { yes, no, blocked };

inline std::string_view status_name(Status s) {
  switch (s) {
    case Status::yes: return "yes";
    case Status::no: return "no";
    case Status::blocked: return "blocked";
  }
  return "?";
}

template <class S>
struct InvarianceVerdict {
  Status status = Status::blocked;
  /// sup_k J_2(k) / (1 + J_1(k)), when it is attained on the evaluated atoms.
  std::optional<S> c_star;
  Atom c_star_atom = 0;
  /// A constant c with J_2 <= c (1 + J_1) proven on every atom.
  std::optional<S> c_certified;
  /// Limit of the ratio along the tail (tail spaces only).
  std::optional<S> tail_limit;
  std::optional<Atom> witness;
};

template <class S>
struct OrderVerdict {
  unsigned order = 0;
  Status status = Status::blocked;  // yes = decided
  bool isometry = false;
  bool expansive = false;
  /// max over evaluated atoms of Delta_{J,n}, and where it occurs.
  std::optional<S> margin;
  std::optional<Atom> worst_atom;
  /// First atom with Delta > 0, if any.
  std::optional<Atom> witness;
  std::optional<SignKind> tail_sign;
  bool zero_within_tolerance = false;
  std::optional<Atom> blocked_at;
};

template <class S>
struct AtomAlternating {
  Atom atom = 0;
  bool tail_segment = false;  // atoms >= `atom` handled together in closed form
  bool pass = true;
  std::optional<AlternatingWitness<S>> witness;
  std::optional<Atom> witness_atom;
  /// J_i(atom) proven affine and nondecreasing in i for every i.
  bool certified = false;
};

template <class S>
struct AlternatingSummary {
  unsigned max_shift = 0;
  unsigned max_depth = 0;
  bool blocked = false;
  bool pass = false;
  bool certified = false;  // every atom certified, so the unbounded property holds
  std::vector<AtomAlternating<S>> atoms;
};

struct AuditResult {
  std::string name;
  std::string statement;
  bool applicable = false;
  bool holds = true;
  std::string detail;

  bool violated() const { return applicable && !holds; }
};

template <class S>
struct ClassificationReport {
  DenseVerdict dense;
  InvarianceVerdict<S> invariance;
  std::vector<OrderVerdict<S>> orders;
  unsigned hyperexpansive_up_to = 0;
  AlternatingSummary<S> alternating;
  std::vector<AuditResult> audits;
  JTable<S> jt;
  /// Verdict at order 2, kept even when fewer orders are reported.
  OrderVerdict<S> second_order;

  std::vector<std::string> findings() const {
    std::vector<std::string> out;
    for (const auto& a : audits)
      if (a.violated()) out.push_back("THEOREM-VIOLATION: " + a.name + ": " + a.detail);
    return out;
  }
};

namespace detail {

/// Sign summary of a per-atom function over every atom.
template <class S>
struct FunctionSign {
  bool any_positive = false;
  bool any_negative = false;
  bool near_zero_flag = false;
  std::optional<S> max_value;
  std::optional<Atom> argmax;
  std::optional<Atom> first_positive;
  std::optional<SignKind> tail_sign;
};

template <class S>
FunctionSign<S> sign_of(const AtomFunction<S>& f, double tolerance) {
  FunctionSign<S> out;
  auto note = [&](Atom k, const S& v) {
    if (!out.max_value || v > *out.max_value) {
      out.max_value = v;
      out.argmax = k;
    }
    const int s = Field<S>::sign(v, tolerance);
    if (s > 0) {
      out.any_positive = true;
      if (!out.first_positive) out.first_positive = k;
    }
    if (s < 0) out.any_negative = true;
    if (s == 0 && v != 0) out.near_zero_flag = true;
  };
  for (Atom k = 0; k < f.prefix_size(); ++k) note(k, f.at(k).value());
  if (f.has_tail()) {
    const auto rep = geopoly_sign(*f.tail(), static_cast<long>(f.prefix_size()), tolerance);
    out.tail_sign = rep.kind;
    if (rep.kind != SignKind::zero) {
      if (!out.max_value || rep.max_value > *out.max_value) {
        out.max_value = rep.max_value;
        out.argmax = static_cast<Atom>(rep.argmax);
      }
    }
    if (rep.kind == SignKind::mixed || rep.kind == SignKind::nonnegative) {
      out.any_positive = true;
      if (!out.first_positive && rep.witness) out.first_positive = static_cast<Atom>(*rep.witness);
    }
    if (rep.kind == SignKind::mixed || rep.kind == SignKind::nonpositive) out.any_negative = true;
  }
  return out;
}

template <class S>
std::optional<Atom> first_infinite_upto(const JTable<S>& jt, unsigned n) {
  std::optional<Atom> first;
  for (unsigned i = 0; i <= n && i <= jt.max_order(); ++i)
    if (auto k = jt[i].first_infinite(); k && (!first || *k < *first)) first = k;
  return first;
}

template <class S>
bool is_identically(const AtomFunction<S>& f, const S& c, double tolerance) {
  for (Atom k = 0; k < f.prefix_size(); ++k)
    if (f.at(k).is_infinite() || !Field<S>::near(f.at(k).value(), c, tolerance)) return false;
  if (!f.has_tail()) return true;
  return f.tail()->equals(GeoPoly<S>::constant(c), tolerance);
}

/// Orders needed to certify affine J_i(k) for all i on a finite space: the
/// sequence satisfies a linear recurrence of order <= N, so matching an affine
/// sequence on N + 2 consecutive terms forces agreement forever.
template <class S>
unsigned certification_orders(const ValidatedSystem<S>& sys) {
  return sys.is_finite() ? static_cast<unsigned>(sys.head_size()) + 2 : 0;
}

}  // namespace detail

template <class S>
DenseVerdict densely_defined(const JTable<S>& jt) {
  DenseVerdict v;
  v.witness = jt[1].first_infinite();
  v.dense = !v.witness;
  return v;
}

template <class S>
DenseVerdict densely_defined(const ValidatedSystem<S>& sys) {
  return densely_defined(j_table(sys, 1));
}

/// Domain invariance: some c > 0 with J_2 <= c (1 + J_1) on every atom.
template <class S>
InvarianceVerdict<S> domain_invariance(const JTable<S>& jt, double tolerance = 1e-9) {
  InvarianceVerdict<S> v;
  if (jt.max_order() < 2) throw Error(ErrorKind::depth_exceeds_data, "domain invariance needs J_2");
  const auto& j1 = jt[1];
  const auto& j2 = jt[2];
  if (j1.any_infinite()) return v;  // blocked: not densely defined

  const std::size_t prefix = std::max(j1.prefix_size(), j2.prefix_size());
  // Tail spaces: scan a window past the stored prefix before reasoning about the tail.
  const std::size_t window = j1.has_tail() ? prefix + 64 : prefix;
  std::optional<S> best;
  for (Atom k = 0; k < window; ++k) {
    const auto num = j2.at(k);
    if (num.is_infinite()) {
      v.status = Status::no;
      v.witness = k;
      return v;
    }
    const S ratio = num.value() / (S(1) + j1.at(k).value());
    if (!best || ratio > *best) {
      best = ratio;
      v.c_star_atom = k;
    }
  }
  const S c_scan = best.value_or(S(0));
  if (!j1.has_tail()) {
    v.status = Status::yes;
    v.c_star = c_scan;
    v.c_certified = c_scan;
    return v;
  }

  const GeoPoly<S> denom = GeoPoly<S>::constant(S(1)) + *j1.tail();
  const GeoPoly<S>& numer = *j2.tail();
  auto holds_from_window = [&](const S& c) {
    const auto rep = geopoly_sign(numer - c * denom, static_cast<long>(window), tolerance);
    return rep.kind == SignKind::nonpositive || rep.kind == SignKind::zero;
  };

  const S& lead_den = denom.terms().front().coeff;
  if (!numer.is_zero()) {
    const auto& top = numer.terms().front();
    const auto& den_top = denom.terms().front();
    if (top.ratio > den_top.ratio) {
      v.status = Status::no;
      v.witness = static_cast<Atom>(geopoly_sign(numer - c_scan * denom, static_cast<long>(window), tolerance).witness.value_or(static_cast<long>(window)));
      return v;
    }
    v.tail_limit = (top.ratio == den_top.ratio) ? S(top.coeff / lead_den) : S(0);
  } else {
    v.tail_limit = S(0);
  }
  v.status = Status::yes;
  if (holds_from_window(c_scan)) {
    v.c_star = c_scan;
    v.c_certified = c_scan;
    return v;
  }
  const S candidate = S(2) * std::max(c_scan, *v.tail_limit) + S(1);
  if (holds_from_window(candidate)) v.c_certified = candidate;
  return v;
}

namespace detail {

template <class S>
OrderVerdict<S> order_verdict(const JTable<S>& jt, unsigned n, double tolerance) {
  OrderVerdict<S> v;
  v.order = n;
  if (auto bad = first_infinite_upto(jt, n)) {
    v.blocked_at = bad;
    return v;
  }
  const auto d = delta(jt, n);
  const auto sign = sign_of(d, tolerance);
  v.status = Status::yes;
  v.expansive = !sign.any_positive;
  v.isometry = !sign.any_positive && !sign.any_negative;
  v.margin = sign.max_value;
  v.worst_atom = sign.argmax;
  v.witness = sign.first_positive;
  v.tail_sign = sign.tail_sign;
  v.zero_within_tolerance = sign.near_zero_flag;
  return v;
}

template <class S>
AlternatingSummary<S> alternating_summary(const ValidatedSystem<S>& sys, const JTable<S>& jt, const ClassifyOptions& opt) {
  AlternatingSummary<S> out;
  out.max_shift = opt.alt_shifts;
  out.max_depth = opt.alt_depth;
  const unsigned needed = opt.alt_shifts + opt.alt_depth;
  if (first_infinite_upto(jt, needed)) {
    out.blocked = true;
    return out;
  }
  std::size_t prefix = 0;
  for (unsigned i = 0; i <= needed; ++i) prefix = std::max(prefix, jt[i].prefix_size());

  const unsigned cert = certification_orders(sys);
  const bool can_certify = cert > 0 && jt.max_order() >= cert && !first_infinite_upto(jt, cert);

  out.pass = true;
  out.certified = can_certify;
  for (Atom k = 0; k < prefix; ++k) {
    std::vector<S> seq;
    for (unsigned i = 0; i <= needed; ++i) seq.push_back(jt[i].at(k).value());
    const auto res = completely_alternating<S>(seq, opt.alt_depth, opt.alt_shifts, opt.tolerance);
    AtomAlternating<S> a;
    a.atom = k;
    a.pass = res.pass;
    a.witness = res.witness;
    if (!res.pass) a.witness_atom = k;
    if (can_certify) {
      bool affine = Field<S>::sign(S(jt[1].at(k).value() - jt[0].at(k).value()), opt.tolerance) >= 0;
      for (unsigned i = 0; affine && i + 2 <= cert; ++i) {
        const S second = jt[i + 2].at(k).value() - S(2) * jt[i + 1].at(k).value() + jt[i].at(k).value();
        affine = Field<S>::sign(second, opt.tolerance) == 0;
      }
      a.certified = affine;
    }
    out.certified = out.certified && a.certified;
    out.pass = out.pass && a.pass;
    out.atoms.push_back(std::move(a));
  }

  if (sys.is_finite()) return out;
  AtomAlternating<S> tail;
  tail.atom = prefix;
  tail.tail_segment = true;
  for (unsigned n = 1; n <= opt.alt_depth && tail.pass; ++n) {
    for (unsigned m = 0; m <= opt.alt_shifts; ++m) {
      const auto d = delta(jt, n, m);
      const auto rep = geopoly_sign(*d.tail(), static_cast<long>(prefix), opt.tolerance);
      if (rep.kind == SignKind::mixed || rep.kind == SignKind::nonnegative) {
        tail.pass = false;
        const Atom at = static_cast<Atom>(rep.witness.value_or(static_cast<long>(prefix)));
        tail.witness = AlternatingWitness<S>{m, n, d.at(at).value()};
        tail.witness_atom = at;
        break;
      }
    }
  }
  out.pass = out.pass && tail.pass;
  out.certified = false;
  out.atoms.push_back(std::move(tail));
  return out;
}

}  // namespace detail

/// J-table orders used by a classification run.
template <class S>
unsigned required_orders(const ValidatedSystem<S>& sys, const ClassifyOptions& opt) {
  return std::max({opt.max_order, opt.alt_shifts + opt.alt_depth, 2u, detail::certification_orders(sys)});
}

/// Per-order k-isometry / k-expansivity verdicts, hyperexpansivity depth and the
/// bounded-depth completely-alternating test, all read off Delta_{J,n} atomwise.
template <class S>
ClassificationReport<S> expansivity(const ValidatedSystem<S>& sys, const ClassifyOptions& opt = {}) {
  ClassificationReport<S> r;
  r.jt = j_table(sys, required_orders(sys, opt), opt.tolerance);
  r.dense = densely_defined(r.jt);
  r.invariance = domain_invariance(r.jt, opt.tolerance);
  r.second_order.order = 2;
  if (!r.dense.dense) {
    for (unsigned n = 1; n <= opt.max_order; ++n) {
      OrderVerdict<S> v;
      v.order = n;
      v.blocked_at = r.dense.witness;
      r.orders.push_back(v);
    }
    r.alternating.max_shift = opt.alt_shifts;
    r.alternating.max_depth = opt.alt_depth;
    r.alternating.blocked = true;
    return r;
  }
  for (unsigned n = 1; n <= opt.max_order; ++n) r.orders.push_back(detail::order_verdict(r.jt, n, opt.tolerance));
  r.second_order = detail::order_verdict(r.jt, 2, opt.tolerance);
  for (const auto& v : r.orders) {
    if (v.status != Status::yes || !v.expansive) break;
    r.hyperexpansive_up_to = v.order;
  }
  r.alternating = detail::alternating_summary(sys, r.jt, opt);
  return r;
}

/// Consequences of 2-expansivity, checked on the concrete system.
template <class S>
std::vector<AuditResult> audit_two_expansive(const ValidatedSystem<S>& sys, const ClassificationReport<S>& r, const ClassifyOptions& opt = {}) {
  std::vector<AuditResult> out;
  const auto& second = r.second_order;
  const bool two_expansive = r.dense.dense && second.status == Status::yes && second.expansive;
  const std::string not_two = "system is not 2-expansive with dense domain";
  const double tol = opt.tolerance;
  const auto& jt = r.jt;

  {
    AuditResult a{"two_expansive_domain_invariance", "2-expansive implies uC_phi maps its domain into itself", two_expansive, true, ""};
    if (a.applicable) {
      a.holds = r.invariance.status == Status::yes;
      a.detail = a.holds ? "J_2 <= c(1 + J_1) holds" : "no constant bounds J_2 by c(1 + J_1)";
    } else {
      a.detail = not_two;
    }
    out.push_back(std::move(a));
  }
  {
    AuditResult a{"two_expansive_gap_inequality", "2-expansive implies J_2 <= 2 J_1 - 1 on every atom", two_expansive, true, ""};
    if (a.applicable) {
      const S coeffs[] = {S(1), S(-2), S(1)};
      const AtomFunction<S>* fns[] = {&jt[2], &jt[1], &jt[0]};
      const auto gap = linear_combination<S>(coeffs, fns);
      const auto sign = detail::sign_of(gap, tol);
      a.holds = !sign.any_positive;
      a.detail = a.holds ? "holds on every atom" : "fails at atom " + std::to_string(*sign.first_positive);
    } else {
      a.detail = not_two;
    }
    out.push_back(std::move(a));
  }
  {
    AuditResult a{"two_expansive_monotone_ladder", "2-expansive implies J_k >= J_{k-1} on every atom", two_expansive, true, ""};
    if (a.applicable) {
      unsigned top = 0;
      while (top < jt.max_order() && !jt[top + 1].any_infinite()) ++top;
      for (unsigned k = 1; k <= top && a.holds; ++k) {
        const S coeffs[] = {S(1), S(-1)};
        const AtomFunction<S>* fns[] = {&jt[k - 1], &jt[k]};
        const auto diff = linear_combination<S>(coeffs, fns);  // J_{k-1} - J_k must be <= 0
        const auto sign = detail::sign_of(diff, tol);
        if (sign.any_positive) {
          a.holds = false;
          a.detail = "J_" + std::to_string(k) + " < J_" + std::to_string(k - 1) + " at atom " + std::to_string(*sign.first_positive);
        }
      }
      if (a.holds) a.detail = "checked for k = 1.." + std::to_string(top);
    } else {
      a.detail = not_two;
    }
    out.push_back(std::move(a));
  }
  {
    const Extended<S> mu = mu_total(sys);
    const Extended<S> mu_u = mu_u_total(sys);
    bool usq_at_most_one = true;
    for (Atom k = 0; k < sys.head_size(); ++k) usq_at_most_one = usq_at_most_one && !(sys.usq(k) > 1);
    if (const auto& t = sys.tail(); t && t->usq.scale != 0)
      usq_at_most_one = usq_at_most_one && !(t->usq.scale > 1) && !(t->usq.ratio > 1);
    const bool infinite_case = mu.is_infinite() && mu_u.is_finite();
    const bool bounded_case = mu_u.is_finite() && usq_at_most_one;
    AuditResult a{"finite_weight_isometry",
                  "2-expansive with mu_u(X) < inf and either mu(X) = inf or |u| <= 1 implies isometry (J_1 = 1)",
                  two_expansive && (infinite_case || bounded_case), true, ""};
    if (a.applicable) {
      a.holds = detail::is_identically(jt[1], S(1), tol);
      a.detail = a.holds ? "J_1 = 1 on every atom" : "J_1 differs from 1";
    } else {
      a.detail = two_expansive ? "mu_u(X) = inf, or mu(X) < inf with |u| > 1 somewhere" : not_two;
    }
    out.push_back(std::move(a));
  }
  {
    bool weight_positive = true;
    for (Atom k = 0; k < sys.head_size(); ++k) weight_positive = weight_positive && sys.usq(k) > 0;
    if (const auto& t = sys.tail()) weight_positive = weight_positive && t->usq.scale > 0;
    const bool injective = phi_injective(sys);
    AuditResult a{"bijective_unitary",
                  "2-expansive, densely defined, u != 0 everywhere and phi injective implies unitary",
                  two_expansive && weight_positive && injective, true, ""};
    if (a.applicable) {
      if (sys.is_finite()) {
        a.holds = unitary_check(sys, tol);
        a.detail = a.holds ? "matrix oracle confirms T*T = TT* = I" : "matrix oracle rejects unitarity";
      } else {
        a.holds = phi_surjective(sys) && detail::is_identically(jt[1], S(1), tol);
        a.detail = a.holds ? "phi bijective and J_1 = 1" : "phi not bijective or J_1 != 1";
      }
    } else {
      a.detail = !two_expansive ? not_two : (!weight_positive ? "u vanishes on some atom" : "phi is not injective");
    }
    out.push_back(std::move(a));
  }
  return out;
}

/// Full report: expansivity verdicts plus the 2-expansive audits.
template <class S>
ClassificationReport<S> classify(const ValidatedSystem<S>& sys, const ClassifyOptions& opt = {}) {
  auto r = expansivity(sys, opt);
  r.audits = audit_two_expansive(sys, r, opt);
  return r;
}

}  // namespace wco
