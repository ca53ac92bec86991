#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wco/atom_function.hpp"
#include "wco/geopoly.hpp"
#include "wco/space.hpp"

namespace wco {

enum class JMethod { recursion, direct, both };

inline std::string_view jmethod_name(JMethod m) {
  switch (m) {
    case JMethod::recursion: return "recursion";
    case JMethod::direct: return "direct";
    case JMethod::both: return "both";
  }
  return "?";
}

/// J_0..J_N, the weights with ||(uC_phi)^n f||^2 = sum_k J_n(k) |f_k|^2 m_k.
template <class S>
struct JTable {
  std::vector<AtomFunction<S>> orders;
  JMethod method = JMethod::both;

  unsigned max_order() const { return static_cast<unsigned>(orders.size()) - 1; }
  const AtomFunction<S>& operator[](unsigned n) const { return orders.at(n); }

  /// J_0(k), ..., J_N(k).
  std::vector<Extended<S>> at_atom(Atom k) const {
    std::vector<Extended<S>> out;
    out.reserve(orders.size());
    for (const auto& f : orders) out.push_back(f.at(k));
    return out;
  }
};

namespace detail {

template <class S>
AtomFunction<S> constant_function(const ValidatedSystem<S>& sys, const S& c) {
  std::vector<Extended<S>> p(sys.head_size(), Extended<S>(c));
  if (sys.is_finite()) return AtomFunction<S>(std::move(p));
  return AtomFunction<S>(std::move(p), GeoPoly<S>::constant(c));
}

template <class S>
AtomFunction<S> inverse_mass(const ValidatedSystem<S>& sys) {
  std::vector<Extended<S>> p;
  for (Atom k = 0; k < sys.head_size(); ++k) p.emplace_back(S(S(1) / sys.mass(k)));
  if (sys.is_finite()) return AtomFunction<S>(std::move(p));
  const auto& g = sys.tail()->mass;
  const long head = static_cast<long>(sys.head_size());
  return AtomFunction<S>(std::move(p), GeoPoly<S>::single(S(Field<S>::pow(g.ratio, head) / g.scale), S(S(1) / g.ratio)));
}

}  // namespace detail

/// |u_{phi,n}|^2(x) = prod_{t<n} |u|^2(phi^t(x)).
template <class S>
S cocycle_at(const ValidatedSystem<S>& sys, unsigned n, Atom x) {
  S prod(1);
  for (unsigned t = 0; t < n; ++t) {
    prod *= sys.usq(x);
    x = sys.phi(x);
  }
  return prod;
}

/// Cocycle on atoms [0, window); the window defaults to the whole finite space.
template <class S>
std::vector<S> cocycle(const ValidatedSystem<S>& sys, unsigned n, std::optional<Atom> window = std::nullopt) {
  if (!window && !sys.is_finite()) throw Error(ErrorKind::unsupported_tail_analysis, "cocycle on a tail space needs a window");
  const Atom size = window.value_or(sys.head_size());
  std::vector<S> out;
  out.reserve(size);
  for (Atom x = 0; x < size; ++x) out.push_back(cocycle_at(sys, n, x));
  return out;
}

/// sum_{j in phi^{-1}(k)} g(j) for every atom k.
template <class S>
AtomFunction<S> pushforward(const ValidatedSystem<S>& sys, const AtomFunction<S>& g) {
  if (sys.is_finite()) {
    std::vector<Extended<S>> p(sys.head_size(), Extended<S>(S(0)));
    for (Atom j = 0; j < sys.head_size(); ++j) p[sys.phi(j)] = p[sys.phi(j)] + g.at(j);
    return AtomFunction<S>(std::move(p));
  }
  const auto& map = sys.tail()->map;
  const Atom reach = sys.head_reach();
  const Atom d = map.value;
  const Atom pg = g.prefix_size();
  Atom size = reach;
  GeoPoly<S> tail;
  switch (map.kind) {
    case TailMap::Kind::constant:
      break;
    case TailMap::Kind::shift_down:
      size = std::max(reach, pg > d ? pg - d : Atom{0});
      tail = g.tail()->shifted(static_cast<long>(d));
      break;
    case TailMap::Kind::shift_up:
      size = std::max({reach, sys.head_size() + d, pg + d});
      tail = g.tail()->shifted(-static_cast<long>(d));
      break;
  }
  std::vector<Extended<S>> p;
  p.reserve(size);
  for (Atom k = 0; k < size; ++k) {
    const AtomSet f = fiber(sys, k, 1);
    Extended<S> sum(S(0));
    for (Atom j : f.atoms) sum = sum + g.at(j);
    if (f.tail_from) sum = sum + series_sum(g, *f.tail_from);
    p.push_back(sum);
  }
  return AtomFunction<S>(std::move(p), std::move(tail));
}

/// J_0..J_N by the one-step recursion J_n = h E(J_{n-1}|u|^2) o phi^{-1}.
///
/// On atoms, h(k) E(.)o phi^{-1}(k) is the mass of the fiber over k times the
/// m-weighted average over that fiber, i.e. (1/m_k) sum_{j in phi^{-1}(k)} (.)_j m_j.
/// Atoms with an empty fiber get 0.
template <class S>
std::vector<AtomFunction<S>> j_recursion(const ValidatedSystem<S>& sys, unsigned max_order) {
  std::vector<AtomFunction<S>> out;
  out.push_back(detail::constant_function(sys, S(1)));
  const auto weight = sys.usq_function() * sys.mass_function();
  const auto inv_mass = detail::inverse_mass(sys);
  for (unsigned n = 1; n <= max_order; ++n) out.push_back(pushforward(sys, weight * out.back()) * inv_mass);
  return out;
}

/// J_n(k) = (1/m_k) sum_{x in (phi^n)^{-1}(k)} |u_{phi,n}|^2(x) m_x, for n = 0..N.
template <class S>
std::vector<AtomFunction<S>> j_direct(const ValidatedSystem<S>& sys, unsigned max_order) {
  std::vector<AtomFunction<S>> out;
  out.push_back(detail::constant_function(sys, S(1)));
  if (sys.is_finite()) {
    // Walk every orbit once: position[x] = phi^n(x), weight[x] = |u_{phi,n}|^2(x) m_x.
    const Atom size = sys.head_size();
    std::vector<Atom> position(size);
    std::vector<S> weight(size);
    for (Atom x = 0; x < size; ++x) {
      position[x] = x;
      weight[x] = sys.mass(x);
    }
    for (unsigned n = 1; n <= max_order; ++n) {
      std::vector<S> sums(size, S(0));
      for (Atom x = 0; x < size; ++x) {
        weight[x] *= sys.usq(position[x]);
        position[x] = sys.phi(position[x]);
        sums[position[x]] += weight[x];
      }
      std::vector<Extended<S>> p;
      p.reserve(size);
      for (Atom k = 0; k < size; ++k) p.emplace_back(S(sums[k] / sys.mass(k)));
      out.emplace_back(std::move(p));
    }
    return out;
  }

  const auto& tail = *sys.tail();
  const Atom reach = sys.head_reach();
  const Atom d = tail.map.value;
  const long head = static_cast<long>(sys.head_size());
  const auto usq_mass = sys.usq_function() * sys.mass_function();
  for (unsigned n = 1; n <= max_order; ++n) {
    const long ln = static_cast<long>(n);
    Atom size = reach;
    GeoPoly<S> poly;
    const S beta_n = Field<S>::pow(tail.usq.scale, ln);
    const S sigma_n = Field<S>::pow(tail.usq.ratio, ln);
    switch (tail.map.kind) {
      case TailMap::Kind::constant:
        break;
      case TailMap::Kind::shift_down: {
        const long e = static_cast<long>(d) * ln * (ln + 1) / 2 - ln * head;
        poly = GeoPoly<S>::single(S(beta_n * Field<S>::pow(tail.usq.ratio, e) * Field<S>::pow(tail.mass.ratio, ln * static_cast<long>(d))), sigma_n);
        break;
      }
      case TailMap::Kind::shift_up: {
        size = reach + n * d;
        const long e = -static_cast<long>(d) * ln * (ln + 1) / 2 - ln * head;
        poly = GeoPoly<S>::single(S(beta_n * Field<S>::pow(tail.usq.ratio, e) * Field<S>::pow(tail.mass.ratio, -ln * static_cast<long>(d))), sigma_n);
        break;
      }
    }
    std::vector<Extended<S>> p;
    p.reserve(size);
    for (Atom k = 0; k < size; ++k) {
      const AtomSet f = fiber(sys, k, n);
      Extended<S> sum(S(0));
      for (Atom x : f.atoms) sum = sum + Extended<S>(S(cocycle_at(sys, n, x) * sys.mass(x)));
      if (f.tail_from) {
        // Segments only arise from a constant tail map; every x in it maps to c.
        if (tail.map.kind != TailMap::Kind::constant)
          throw Error(ErrorKind::unsupported_tail_fiber, "unbounded fiber under a shift tail map");
        sum = sum + series_sum(usq_mass, *f.tail_from) * Extended<S>(cocycle_at(sys, n - 1, tail.map.value));
      }
      p.push_back(sum * Extended<S>(S(S(1) / sys.mass(k))));
    }
    out.emplace_back(std::move(p), std::move(poly));
  }
  return out;
}

/// J_0..J_N computed by recursion and by the direct fiber formula; the two must agree.
template <class S>
JTable<S> j_table(const ValidatedSystem<S>& sys, unsigned max_order, double tolerance = 1e-9) {
  auto recursion = j_recursion(sys, max_order);
  const auto direct = j_direct(sys, max_order);
  for (unsigned n = 0; n <= max_order; ++n) {
    if (!recursion[n].equals(direct[n], tolerance))
      throw Error(ErrorKind::recursion_direct_mismatch, "J_" + std::to_string(n) + " differs between recursion and direct formula");
  }
  return JTable<S>{std::move(recursion), JMethod::both};
}

/// h_i = d(mu o phi^{-i})/d mu, i.e. (1/m_k) sum of the masses in the i-fold fiber.
template <class S>
AtomFunction<S> radon_nikodym(const ValidatedSystem<S>& sys, unsigned i) {
  return j_direct(sys.with_unit_weight(), i).back();
}

/// E(f)(k): m-weighted average of f over the fiber phi^{-1}(phi(k)).
template <class S>
AtomFunction<S> conditional_expectation(const ValidatedSystem<S>& sys, const AtomFunction<S>& f) {
  const auto mass = sys.mass_function();
  if (sys.is_finite()) {
    if (f.prefix_size() != sys.head_size() || f.has_tail())
      throw Error(ErrorKind::invalid_map, "function size does not match the space");
    std::vector<Extended<S>> num(sys.head_size(), Extended<S>(S(0))), den(sys.head_size(), Extended<S>(S(0)));
    for (Atom j = 0; j < sys.head_size(); ++j) {
      num[sys.phi(j)] = num[sys.phi(j)] + f.at(j) * Extended<S>(sys.mass(j));
      den[sys.phi(j)] = den[sys.phi(j)] + Extended<S>(sys.mass(j));
    }
    std::vector<Extended<S>> out;
    for (Atom k = 0; k < sys.head_size(); ++k) {
      const Atom image = sys.phi(k);
      if (num[image].is_infinite()) out.push_back(Extended<S>::infinity());
      else out.emplace_back(S(num[image].value() / den[image].value()));
    }
    return AtomFunction<S>(std::move(out));
  }

  if (!f.has_tail()) throw Error(ErrorKind::unsupported_tail_analysis, "conditional expectation on a tail space needs a geometric function");
  const auto& map = sys.tail()->map;
  const Atom reach = sys.head_reach();
  Atom size = std::max(reach, f.prefix_size());
  GeoPoly<S> tail = *f.tail();
  if (map.kind == TailMap::Kind::shift_down) size = std::max(size, reach + map.value);
  const auto weighted = f * mass;
  auto average_over = [&](const AtomSet& set) -> Extended<S> {
    Extended<S> num(S(0)), den(S(0));
    for (Atom j : set.atoms) {
      num = num + weighted.at(j);
      den = den + mass.at(j);
    }
    if (set.tail_from) {
      num = num + series_sum(weighted, *set.tail_from);
      den = den + series_sum(mass, *set.tail_from);
    }
    if (den.is_infinite() || num.is_infinite())
      throw Error(ErrorKind::unsupported_tail_analysis, "fiber of infinite mass");
    return Extended<S>(S(num.value() / den.value()));
  };
  if (map.kind == TailMap::Kind::constant) {
    tail = GeoPoly<S>::constant(average_over(fiber(sys, map.value, 1)).value());
    size = sys.head_size();
  }
  std::vector<Extended<S>> p;
  for (Atom k = 0; k < size; ++k) p.push_back(average_over(fiber(sys, sys.phi(k), 1)));
  return AtomFunction<S>(std::move(p), std::move(tail));
}

/// Delta(k) = sum_{i=0}^{n} (-1)^i C(n,i) J_{shift+i}(k).
template <class S>
AtomFunction<S> delta(const JTable<S>& jt, unsigned n, unsigned shift = 0) {
  if (shift + n > jt.max_order())
    throw Error(ErrorKind::depth_exceeds_data, "delta needs J up to order " + std::to_string(shift + n));
  const auto weights = alternating_binomials<S>(n);
  std::vector<const AtomFunction<S>*> fns;
  for (unsigned i = 0; i <= n; ++i) fns.push_back(&jt[shift + i]);
  return linear_combination<S>(weights, fns);
}

template <class S>
struct AlternatingWitness {
  unsigned shift = 0;
  unsigned depth = 0;
  S value = S(0);
};

template <class S>
struct AlternatingResult {
  bool pass = true;
  std::optional<AlternatingWitness<S>> witness;
  unsigned max_shift = 0;
  unsigned max_depth = 0;
};

/// Bounded-depth completely-alternating test: every
/// sum_{i<=n} (-1)^i C(n,i) a_{m+i} <= 0 for 1 <= n <= max_depth, 0 <= m <= max_shift.
template <class S>
AlternatingResult<S> completely_alternating(std::span<const S> seq, unsigned max_depth, unsigned max_shift, double tolerance = 0.0) {
  if (seq.empty() || max_depth + max_shift > seq.size() - 1)
    throw Error(ErrorKind::depth_exceeds_data, "need " + std::to_string(max_depth + max_shift + 1) + " terms, have " + std::to_string(seq.size()));
  AlternatingResult<S> out;
  out.max_shift = max_shift;
  out.max_depth = max_depth;
  for (unsigned n = 1; n <= max_depth; ++n) {
    const auto w = alternating_binomials<S>(n);
    for (unsigned m = 0; m <= max_shift; ++m) {
      S sum(0);
      for (unsigned i = 0; i <= n; ++i) sum += w[i] * seq[m + i];
      if (Field<S>::sign(sum, tolerance) > 0) {
        out.pass = false;
        out.witness = AlternatingWitness<S>{m, n, sum};
        return out;
      }
    }
  }
  return out;
}

/// Density w = 1 + J_1 of the graph-norm measure nu.
template <class S>
AtomFunction<S> nu_weights(const ValidatedSystem<S>& sys) {
  const auto jt = j_table(sys, 1);
  const auto& j1 = jt[1];
  std::vector<Extended<S>> p;
  for (Atom k = 0; k < j1.prefix_size(); ++k) p.push_back(Extended<S>(S(1)) + j1.at(k));
  std::optional<GeoPoly<S>> tail;
  if (j1.has_tail()) tail = GeoPoly<S>::constant(S(1)) + *j1.tail();
  return AtomFunction<S>(std::move(p), std::move(tail));
}

}  // namespace wco
