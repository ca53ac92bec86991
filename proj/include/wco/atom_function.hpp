#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wco/geopoly.hpp"
#include "wco/scalar.hpp"

namespace wco {

/// A set of atoms: finitely many indices plus at most one segment {k >= tail_from}.
struct AtomSet {
  std::vector<Atom> atoms;        // sorted, unique, all below tail_from
  std::optional<Atom> tail_from;

  bool empty() const { return atoms.empty() && !tail_from; }
  bool is_finite() const { return !tail_from.has_value(); }

  bool contains(Atom k) const {
    if (tail_from && k >= *tail_from) return true;
    return std::binary_search(atoms.begin(), atoms.end(), k);
  }

  void normalize() {
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    if (tail_from) std::erase_if(atoms, [&](Atom a) { return a >= *tail_from; });
  }

  friend bool operator==(const AtomSet&, const AtomSet&) = default;
};

/// A per-atom function. On a finite space only the prefix exists; on a tail space
/// values at k >= prefix.size() come from the closed-form tail.
template <class S>
class AtomFunction {
 public:
  AtomFunction() = default;
  explicit AtomFunction(std::vector<Extended<S>> prefix, std::optional<GeoPoly<S>> tail = std::nullopt)
      : prefix_(std::move(prefix)), tail_(std::move(tail)) {}

  static AtomFunction from_values(std::span<const S> values) {
    std::vector<Extended<S>> p(values.begin(), values.end());
    return AtomFunction(std::move(p));
  }

  std::size_t prefix_size() const { return prefix_.size(); }
  bool has_tail() const { return tail_.has_value(); }
  const std::vector<Extended<S>>& prefix() const { return prefix_; }
  const std::optional<GeoPoly<S>>& tail() const { return tail_; }

  Extended<S> at(Atom k) const {
    if (k < prefix_.size()) return prefix_[k];
    if (!tail_) throw Error(ErrorKind::invalid_map, "atom " + std::to_string(k) + " outside finite space");
    return Extended<S>((*tail_)(static_cast<long>(k)));
  }

  Extended<S> operator[](Atom k) const { return at(k); }

  /// Same function with at least `size` atoms stored explicitly.
  AtomFunction widened(std::size_t size) const {
    if (size <= prefix_.size() || !tail_) return *this;
    std::vector<Extended<S>> p = prefix_;
    for (std::size_t k = prefix_.size(); k < size; ++k) p.push_back(at(k));
    return AtomFunction(std::move(p), tail_);
  }

  bool any_infinite() const {
    return std::any_of(prefix_.begin(), prefix_.end(), [](const auto& v) { return v.is_infinite(); });
  }

  std::optional<Atom> first_infinite() const {
    for (std::size_t k = 0; k < prefix_.size(); ++k)
      if (prefix_[k].is_infinite()) return k;
    return std::nullopt;
  }

  /// Finite values of the stored prefix; throws InfiniteValue otherwise.
  std::vector<S> finite_prefix() const {
    std::vector<S> out;
    out.reserve(prefix_.size());
    for (const auto& v : prefix_) out.push_back(v.value());
    return out;
  }

  bool equals(const AtomFunction& other, double tolerance) const {
    if (has_tail() != other.has_tail()) return false;
    const std::size_t n = std::max(prefix_size(), other.prefix_size());
    if (!has_tail() && prefix_size() != other.prefix_size()) return false;
    for (std::size_t k = 0; k < n; ++k)
      if (!near(at(k), other.at(k), tolerance)) return false;
    return !has_tail() || tail_->equals(*other.tail_, tolerance);
  }

  /// Pointwise product; 0 * inf = 0.
  friend AtomFunction operator*(const AtomFunction& a, const AtomFunction& b) {
    const std::size_t n = std::max(a.prefix_size(), b.prefix_size());
    std::vector<Extended<S>> p;
    p.reserve(n);
    for (std::size_t k = 0; k < n; ++k) p.push_back(a.at(k) * b.at(k));
    std::optional<GeoPoly<S>> tail;
    if (a.tail_ && b.tail_) tail = *a.tail_ * *b.tail_;
    else if (a.tail_ || b.tail_)
      throw Error(ErrorKind::invalid_map, "finite and infinite atom functions combined");
    return AtomFunction(std::move(p), std::move(tail));
  }

 private:
  std::vector<Extended<S>> prefix_;
  std::optional<GeoPoly<S>> tail_;
};

/// sum_t coeffs[t] * fns[t]; every value involved must be finite.
template <class S>
AtomFunction<S> linear_combination(std::span<const S> coeffs, std::span<const AtomFunction<S>* const> fns) {
  std::size_t n = 0;
  bool tail = false;
  for (const auto* f : fns) {
    n = std::max(n, f->prefix_size());
    tail = tail || f->has_tail();
  }
  std::vector<Extended<S>> p(n, Extended<S>(S(0)));
  GeoPoly<S> poly;
  for (std::size_t t = 0; t < fns.size(); ++t) {
    const auto& f = *fns[t];
    if (f.has_tail() != tail) throw Error(ErrorKind::invalid_map, "finite and infinite atom functions combined");
    for (std::size_t k = 0; k < n; ++k) {
      const Extended<S> v = f.at(k);
      if (v.is_infinite()) throw Error(ErrorKind::infinite_value, "J value is +inf at atom " + std::to_string(k));
      p[k] = Extended<S>(S(p[k].value() + coeffs[t] * v.value()));
    }
    if (tail) poly = poly + coeffs[t] * *f.tail();
  }
  return AtomFunction<S>(std::move(p), tail ? std::optional<GeoPoly<S>>(poly) : std::nullopt);
}

/// sum_{j >= from} g(j). Diverges to +inf only when the tail terms stay positive.
template <class S>
Extended<S> series_sum(const AtomFunction<S>& g, Atom from) {
  Extended<S> sum(S(0));
  for (std::size_t j = from; j < g.prefix_size(); ++j) sum = sum + g.at(j);
  if (!g.has_tail()) return sum;
  const long start = static_cast<long>(std::max<std::size_t>(from, g.prefix_size()));
  const auto& terms = g.tail()->terms();
  S tail_total(0);
  for (const auto& t : terms) {
    if (t.ratio >= 1) {
      // Dominant term (terms are sorted by ratio) decides divergence direction.
      if (terms.front().coeff > 0) return Extended<S>::infinity();
      throw Error(ErrorKind::unsupported_tail_analysis, "series diverges to -inf");
    }
    tail_total += t.coeff * Field<S>::pow(t.ratio, start) / (S(1) - t.ratio);
  }
  return sum + Extended<S>(tail_total);
}

}  // namespace wco
