#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "wco/scalar.hpp"

namespace wco {

/// Exact element of Q[s_0, ..., s_63] / (s_j^2 - q_j): a rational combination of
/// square-free monomials in formal square roots s_j = sqrt(q_j).
///
/// Lets the operator matrix (whose entries are u_j = sqrt(|u_j|^2)) be multiplied
/// exactly without ever choosing numeric roots. A product that reduces to a
/// constant is an identity for every choice of roots.
class Surd {
 public:
  using Squares = std::shared_ptr<const std::vector<Rational>>;

  Surd() = default;
  Surd(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) terms_.emplace_back(0, c);
  }
  Surd(int c) : Surd(Rational(c)) {}  // NOLINT(google-explicit-constructor)

  /// The formal root s_j of squares[j].
  static Surd root(Atom j, Squares squares) {
    if (j >= 64) throw Error(ErrorKind::unsupported_tail_analysis, "surd arithmetic supports at most 64 atoms");
    Surd s;
    s.squares_ = std::move(squares);
    if ((*s.squares_)[j] != 0) s.terms_.emplace_back(std::uint64_t{1} << j, Rational(1));
    return s;
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 0); }
  Rational rational() const {
    if (!is_rational()) throw Error(ErrorKind::oracle_mismatch, "surd " + str() + " is not rational");
    return terms_.empty() ? Rational(0) : terms_[0].second;
  }

  friend Surd operator+(const Surd& a, const Surd& b) {
    Surd out;
    out.squares_ = a.squares_ ? a.squares_ : b.squares_;
    out.terms_ = a.terms_;
    out.terms_.insert(out.terms_.end(), b.terms_.begin(), b.terms_.end());
    out.collect();
    return out;
  }

  friend Surd operator-(const Surd& a) {
    Surd out = a;
    for (auto& t : out.terms_) t.second = -t.second;
    return out;
  }

  friend Surd operator-(const Surd& a, const Surd& b) { return a + (-b); }

  friend Surd operator*(const Surd& a, const Surd& b) {
    Surd out;
    out.squares_ = a.squares_ ? a.squares_ : b.squares_;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        Rational c = ca * cb;
        const std::uint64_t common = ma & mb;
        for (std::uint64_t bits = common; bits; bits &= bits - 1) c *= (*out.squares_)[static_cast<std::size_t>(__builtin_ctzll(bits))];
        if (c != 0) out.terms_.emplace_back(ma ^ mb, std::move(c));
      }
    }
    out.collect();
    return out;
  }

  Surd& operator+=(const Surd& o) { return *this = *this + o; }

  friend bool operator==(const Surd& a, const Surd& b) { return a.terms_ == b.terms_; }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (i) out += " + ";
      out += terms_[i].second.get_str();
      for (std::uint64_t bits = terms_[i].first; bits; bits &= bits - 1) out += "*s" + std::to_string(__builtin_ctzll(bits));
    }
    return out;
  }

 private:
  void collect() {
    std::sort(terms_.begin(), terms_.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<std::pair<std::uint64_t, Rational>> merged;
    for (auto& t : terms_) {
      if (!merged.empty() && merged.back().first == t.first) merged.back().second += t.second;
      else merged.push_back(std::move(t));
    }
    std::erase_if(merged, [](const auto& t) { return t.second == 0; });
    terms_ = std::move(merged);
  }

  std::vector<std::pair<std::uint64_t, Rational>> terms_;
  Squares squares_;
};

}  // namespace wco
