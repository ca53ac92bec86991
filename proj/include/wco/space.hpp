#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wco/atom_function.hpp"
#include "wco/geopoly.hpp"
#include "wco/scalar.hpp"

namespace wco {

/// Rule for the self-map on tail atoms k >= K.
struct TailMap {
  enum class Kind { constant, shift_down, shift_up };

  Kind kind = Kind::constant;
  /// Target atom c for `constant`, shift distance d otherwise.
  Atom value = 0;

  static TailMap constant(Atom c) { return {Kind::constant, c}; }
  static TailMap shift_down(Atom d) { return {Kind::shift_down, d}; }
  static TailMap shift_up(Atom d) { return {Kind::shift_up, d}; }

  friend bool operator==(const TailMap&, const TailMap&) = default;
};

/// k -> scale * ratio^(k - K) on tail atoms.
template <class S>
struct Geometric {
  S scale;
  S ratio;

  friend bool operator==(const Geometric&, const Geometric&) = default;
};

template <class S>
struct TailSpec {
  Geometric<S> mass;
  Geometric<S> usq;
  TailMap map;

  friend bool operator==(const TailSpec&, const TailSpec&) = default;
};

/// Raw description of uC_phi: masses, map and |u|^2 on the finite atoms (all
/// atoms of a finite space, the head of a tail space), plus the optional tail.
template <class S>
struct WeightedSystem {
  std::vector<S> masses;
  std::vector<Atom> phi;
  std::vector<S> usq;
  std::optional<TailSpec<S>> tail;

  friend bool operator==(const WeightedSystem&, const WeightedSystem&) = default;
};

template <class S>
class ValidatedSystem;

template <class S>
ValidatedSystem<S> validate(WeightedSystem<S> system);

/// A weighted system whose invariants have been checked. Immutable.
template <class S>
class ValidatedSystem {
 public:
  const WeightedSystem<S>& description() const { return sys_; }

  bool is_finite() const { return !sys_.tail.has_value(); }
  /// N for finite spaces, K (the head size) for tail spaces.
  Atom head_size() const { return sys_.masses.size(); }
  const std::optional<TailSpec<S>>& tail() const { return sys_.tail; }

  S mass(Atom k) const {
    if (k < head_size()) return sys_.masses[k];
    check_tail(k);
    return sys_.tail->mass.scale * Field<S>::pow(sys_.tail->mass.ratio, offset(k));
  }

  S usq(Atom k) const {
    if (k < head_size()) return sys_.usq[k];
    check_tail(k);
    return sys_.tail->usq.scale * Field<S>::pow(sys_.tail->usq.ratio, offset(k));
  }

  Atom phi(Atom k) const {
    if (k < head_size()) return sys_.phi[k];
    check_tail(k);
    const auto& map = sys_.tail->map;
    switch (map.kind) {
      case TailMap::Kind::constant: return map.value;
      case TailMap::Kind::shift_down: return k - map.value;
      case TailMap::Kind::shift_up: return k + map.value;
    }
    return 0;
  }

  /// One past the largest atom hit by the head table, and at least K. Tail atoms
  /// at or beyond this bound receive nothing from head atoms.
  Atom head_reach() const {
    Atom reach = head_size();
    for (Atom j : sys_.phi) reach = std::max(reach, j + 1);
    return reach;
  }

  Atom tail_shift() const {
    if (!sys_.tail || sys_.tail->map.kind == TailMap::Kind::constant) return 0;
    return sys_.tail->map.value;
  }

  AtomFunction<S> mass_function() const { return table_function(sys_.masses, tail_mass_poly()); }
  AtomFunction<S> usq_function() const { return table_function(sys_.usq, tail_usq_poly()); }

  std::optional<GeoPoly<S>> tail_mass_poly() const {
    if (!sys_.tail) return std::nullopt;
    return geometric_poly(sys_.tail->mass);
  }
  std::optional<GeoPoly<S>> tail_usq_poly() const {
    if (!sys_.tail) return std::nullopt;
    return geometric_poly(sys_.tail->usq);
  }

  /// Same space and map with |u|^2 = 1 everywhere (the plain composition operator).
  ValidatedSystem with_unit_weight() const {
    WeightedSystem<S> w = sys_;
    std::fill(w.usq.begin(), w.usq.end(), S(1));
    if (w.tail) w.tail->usq = Geometric<S>{S(1), S(1)};
    return validate(std::move(w));
  }

 private:
  friend ValidatedSystem validate<S>(WeightedSystem<S>);
  explicit ValidatedSystem(WeightedSystem<S> s) : sys_(std::move(s)) {}

  void check_tail(Atom k) const {
    if (!sys_.tail) throw Error(ErrorKind::invalid_map, "atom " + std::to_string(k) + " outside finite space");
  }
  long offset(Atom k) const { return static_cast<long>(k) - static_cast<long>(head_size()); }

  GeoPoly<S> geometric_poly(const Geometric<S>& g) const {
    return GeoPoly<S>::single(S(g.scale * Field<S>::pow(g.ratio, -static_cast<long>(head_size()))), g.ratio);
  }

  AtomFunction<S> table_function(const std::vector<S>& head, std::optional<GeoPoly<S>> tail) const {
    return AtomFunction<S>(std::vector<Extended<S>>(head.begin(), head.end()), std::move(tail));
  }

  WeightedSystem<S> sys_;
};

/// Head-map targets beyond this many atoms past the head are rejected.
inline constexpr Atom kMaxHeadReach = Atom{1} << 16;

template <class S>
ValidatedSystem<S> validate(WeightedSystem<S> system) {
  const Atom n = system.masses.size();
  if (n == 0) throw Error(ErrorKind::invalid_mass, "at least one atom is required");
  if (system.phi.size() != n) throw Error(ErrorKind::invalid_map, "phi has " + std::to_string(system.phi.size()) + " entries, expected " + std::to_string(n));
  if (system.usq.size() != n) throw Error(ErrorKind::invalid_weight, "usq has " + std::to_string(system.usq.size()) + " entries, expected " + std::to_string(n));
  for (Atom k = 0; k < n; ++k) {
    if (!(system.masses[k] > 0)) throw Error(ErrorKind::invalid_mass, "masses[" + std::to_string(k) + "] = " + Field<S>::format(system.masses[k]) + " is not positive");
    if (system.usq[k] < 0) throw Error(ErrorKind::invalid_weight, "usq[" + std::to_string(k) + "] is negative");
  }
  if (!system.tail) {
    for (Atom k = 0; k < n; ++k)
      if (system.phi[k] >= n) throw Error(ErrorKind::invalid_map, "phi[" + std::to_string(k) + "] = " + std::to_string(system.phi[k]) + " is not an atom of a " + std::to_string(n) + "-atom space");
    return ValidatedSystem<S>(std::move(system));
  }

  const auto& tail = *system.tail;
  if (!(tail.mass.scale > 0)) throw Error(ErrorKind::invalid_mass, "tail mass scale must be positive");
  if (!(tail.mass.ratio > 0)) throw Error(ErrorKind::invalid_tail, "tail mass ratio must be positive");
  if (tail.usq.scale < 0) throw Error(ErrorKind::invalid_weight, "tail usq scale is negative");
  if (!(tail.usq.ratio > 0)) throw Error(ErrorKind::invalid_tail, "tail usq ratio must be positive");
  switch (tail.map.kind) {
    case TailMap::Kind::constant:
      if (tail.map.value >= n) throw Error(ErrorKind::invalid_map, "constant tail target must be a head atom");
      break;
    case TailMap::Kind::shift_down:
      if (tail.map.value < 1 || tail.map.value > n) throw Error(ErrorKind::invalid_map, "shift_down distance must be in [1, K]");
      break;
    case TailMap::Kind::shift_up:
      if (tail.map.value < 1) throw Error(ErrorKind::invalid_map, "shift_up distance must be at least 1");
      if (tail.map.value > kMaxHeadReach) throw Error(ErrorKind::invalid_map, "shift_up distance too large");
      break;
  }
  for (Atom k = 0; k < n; ++k)
    if (system.phi[k] >= n + kMaxHeadReach) throw Error(ErrorKind::invalid_map, "phi[" + std::to_string(k) + "] reaches too far into the tail");
  return ValidatedSystem<S>(std::move(system));
}

/// phi^{-1}(set).
template <class S>
AtomSet preimage(const ValidatedSystem<S>& sys, const AtomSet& set) {
  AtomSet out;
  const Atom head = sys.head_size();
  for (Atom j = 0; j < head; ++j)
    if (set.contains(sys.phi(j))) out.atoms.push_back(j);
  if (const auto& tail = sys.tail()) {
    const Atom d = tail->map.value;
    switch (tail->map.kind) {
      case TailMap::Kind::constant:
        if (set.contains(d)) out.tail_from = head;
        break;
      case TailMap::Kind::shift_down:
        for (Atom f : set.atoms)
          if (f + d >= head) out.atoms.push_back(f + d);
        if (set.tail_from) out.tail_from = std::max(head, *set.tail_from + d);
        break;
      case TailMap::Kind::shift_up:
        for (Atom f : set.atoms)
          if (f >= head + d) out.atoms.push_back(f - d);
        if (set.tail_from) out.tail_from = std::max(head, *set.tail_from >= d ? *set.tail_from - d : Atom{0});
        break;
    }
  }
  out.normalize();
  return out;
}

/// (phi^n)^{-1}({k}).
template <class S>
AtomSet fiber(const ValidatedSystem<S>& sys, Atom k, unsigned n) {
  if (sys.is_finite() && k >= sys.head_size()) throw Error(ErrorKind::invalid_map, "atom " + std::to_string(k) + " outside finite space");
  AtomSet set{{k}, std::nullopt};
  for (unsigned i = 0; i < n; ++i) set = preimage(sys, set);
  return set;
}

/// sum_k m_k.
template <class S>
Extended<S> mu_total(const ValidatedSystem<S>& sys) {
  return series_sum(sys.mass_function(), 0);
}

/// mu_u(X) = sum_k |u_k|^2 m_k.
template <class S>
Extended<S> mu_u_total(const ValidatedSystem<S>& sys) {
  return series_sum(sys.usq_function() * sys.mass_function(), 0);
}

/// True when phi is injective on all atoms.
template <class S>
bool phi_injective(const ValidatedSystem<S>& sys) {
  const Atom head = sys.head_size();
  std::vector<Atom> images(sys.description().phi);
  std::sort(images.begin(), images.end());
  if (std::adjacent_find(images.begin(), images.end()) != images.end()) return false;
  const auto& tail = sys.tail();
  if (!tail) return true;
  const Atom d = tail->map.value;
  switch (tail->map.kind) {
    case TailMap::Kind::constant:
      return false;  // infinitely many tail atoms share one image
    case TailMap::Kind::shift_down:
      return std::all_of(images.begin(), images.end(), [&](Atom a) { return a + d < head; });
    case TailMap::Kind::shift_up:
      return std::all_of(images.begin(), images.end(), [&](Atom a) { return a < head + d; });
  }
  return false;
}

/// True when every atom has a nonempty preimage.
template <class S>
bool phi_surjective(const ValidatedSystem<S>& sys) {
  const Atom reach = sys.head_reach() + sys.tail_shift() + 1;
  const Atom limit = sys.is_finite() ? sys.head_size() : reach;
  for (Atom k = 0; k < limit; ++k)
    if (fiber(sys, k, 1).empty()) return false;
  // Beyond `limit` the tail rule alone decides: shift_down always hits k, shift_up
  // hits k >= K + d, constant hits nothing.
  if (const auto& tail = sys.tail()) return tail->map.kind != TailMap::Kind::constant;
  return true;
}

}  // namespace wco
