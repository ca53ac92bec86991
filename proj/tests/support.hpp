#pragma once

#include <random>
#include <string>
#include <vector>

#include "wco/wco.hpp"

namespace wco::test {

inline Rational q(const std::string& s) {
  Rational r(s);
  r.canonicalize();
  return r;
}

inline std::vector<Rational> qs(std::initializer_list<const char*> values) {
  std::vector<Rational> out;
  for (const char* v : values) out.push_back(q(v));
  return out;
}

inline ValidatedSystem<Rational> finite(std::vector<Rational> masses, std::vector<Atom> phi, std::vector<Rational> usq) {
  return validate(WeightedSystem<Rational>{std::move(masses), std::move(phi), std::move(usq), std::nullopt});
}

/// m = (1, 2, 1), phi = (0, 0, 1), |u|^2 = (1, 1, 4).
inline ValidatedSystem<Rational> s1() { return finite(qs({"1", "2", "1"}), {0, 0, 1}, qs({"1", "1", "4"})); }

inline ValidatedSystem<Rational> example(const std::string& name, const std::vector<std::string>& params = {}) {
  return std::get<ValidatedSystem<Rational>>(parse_spec(generate_example(name, params)).system);
}

inline std::vector<Rational> values(const AtomFunction<Rational>& f) {
  std::vector<Rational> out;
  for (const auto& v : f.prefix()) out.push_back(v.value());
  return out;
}

/// J_n(k) straight from the definition: walk every atom's orbit and keep the
/// ones that land on k after n steps.
template <class S>
std::vector<S> reference_j(const ValidatedSystem<S>& sys, unsigned n) {
  const Atom size = sys.head_size();
  std::vector<S> out(size, S(0));
  for (Atom x = 0; x < size; ++x) {
    S weight = sys.mass(x);
    Atom y = x;
    for (unsigned t = 0; t < n; ++t) {
      weight *= sys.usq(y);
      y = sys.phi(y);
    }
    out[y] += weight;
  }
  for (Atom k = 0; k < size; ++k) out[k] /= sys.mass(k);
  return out;
}

/// Delta_{J,n}(k) from reference_j.
template <class S>
std::vector<S> reference_delta(const ValidatedSystem<S>& sys, unsigned n) {
  std::vector<S> out(sys.head_size(), S(0));
  const auto row = binomial_row(n);
  for (unsigned i = 0; i <= n; ++i) {
    const auto j = reference_j(sys, i);
    for (Atom k = 0; k < out.size(); ++k) {
      const S c = Field<S>::from_integer(row[i]);
      out[k] += (i % 2 == 0 ? c : S(-c)) * j[k];
    }
  }
  return out;
}

/// Truncation of a tail space to its first `cutoff` atoms, in doubles. Tail
/// atoms mapped past the cutoff are dropped along with their contribution.
inline std::vector<double> truncated_j(const ValidatedSystem<Rational>& sys, unsigned n, Atom cutoff) {
  std::vector<double> out(cutoff, 0.0);
  for (Atom x = 0; x < cutoff; ++x) {
    double weight = sys.mass(x).get_d();
    Atom y = x;
    bool inside = true;
    for (unsigned t = 0; t < n && inside; ++t) {
      weight *= sys.usq(y).get_d();
      y = sys.phi(y);
      inside = y < cutoff;
    }
    if (inside) out[y] += weight;
  }
  for (Atom k = 0; k < cutoff; ++k) out[k] /= sys.mass(k).get_d();
  return out;
}

}  // namespace wco::test
