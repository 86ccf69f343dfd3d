#pragma once

// Classes in the localized Grothendieck ring that are Laurent polynomials in
// the Lefschetz class L, with arbitrary-precision integer coefficients.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <map>
#include <ostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace toricurves {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Virtual dimension: an integer, or minus infinity for the zero class.
class Dimension {
 public:
  constexpr Dimension() = default;
  constexpr explicit Dimension(int value) : value_(value) {}

  static constexpr Dimension minus_infinity() { return Dimension(); }

  constexpr bool is_minus_infinity() const { return !value_.has_value(); }

  int value() const {
    if (!value_) throw std::logic_error("virtual dimension is minus infinity");
    return *value_;
  }

  /// True when this dimension is <= bound (minus infinity is below everything).
  bool at_most(const Rational& bound) const { return !value_ || Rational(*value_) <= bound; }

  friend constexpr bool operator==(const Dimension&, const Dimension&) = default;
  friend constexpr std::strong_ordering operator<=>(const Dimension& a, const Dimension& b) {
    if (!a.value_ || !b.value_) return a.value_.has_value() <=> b.value_.has_value();
    return *a.value_ <=> *b.value_;
  }

  std::string to_string() const { return value_ ? std::to_string(*value_) : "-inf"; }

 private:
  std::optional<int> value_;
};

/// gmpxx has no long long overloads; long is 64-bit on the supported platforms.
inline BigInt to_big(long long x) { return BigInt(static_cast<long>(x)); }

inline BigInt big_pow(const BigInt& base, unsigned long exp) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

class LaurentClass {
 public:
  using Terms = std::map<int, BigInt>;

  LaurentClass() = default;

  /// The constant class c.
  static LaurentClass constant(const BigInt& c) { return monomial(0, c); }

  /// c * L^exp.
  static LaurentClass monomial(int exp, const BigInt& c = 1) {
    LaurentClass out;
    if (c != 0) out.terms_.emplace(exp, c);
    return out;
  }

  /// L^exp.
  static LaurentClass L(int exp = 1) { return monomial(exp, 1); }

  static LaurentClass from_terms(Terms terms) {
    LaurentClass out;
    for (auto& [e, c] : terms)
      if (c != 0) out.terms_.emplace(e, std::move(c));
    return out;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  BigInt coeff(int exp) const {
    auto it = terms_.find(exp);
    return it == terms_.end() ? BigInt(0) : it->second;
  }

  Dimension virtual_dimension() const {
    return terms_.empty() ? Dimension::minus_infinity() : Dimension(terms_.rbegin()->first);
  }

  std::optional<int> lowest_exponent() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first;
  }

  /// Substitutes L = q.
  Rational evaluate(const BigInt& q) const {
    if (q < 2) throw std::invalid_argument("evaluate: q must be >= 2");
    Rational sum = 0;
    for (const auto& [e, c] : terms_) {
      if (e >= 0) {
        sum += Rational(c * big_pow(q, static_cast<unsigned long>(e)));
      } else {
        sum += Rational(c, big_pow(q, static_cast<unsigned long>(-e)));
      }
    }
    sum.canonicalize();
    return sum;
  }

  /// this * L^k.
  LaurentClass shifted(int k) const {
    LaurentClass out;
    for (const auto& [e, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), e + k, c);
    return out;
  }

  /// Drops every term of L-degree strictly below floor.
  LaurentClass truncated_below(int floor) const {
    LaurentClass out;
    out.terms_.insert(terms_.lower_bound(floor), terms_.end());
    return out;
  }

  LaurentClass pow(unsigned n) const {
    LaurentClass result = constant(1);
    LaurentClass base = *this;
    while (n > 0) {
      if (n & 1U) result *= base;
      n >>= 1U;
      if (n > 0) base *= base;
    }
    return result;
  }

  LaurentClass& operator+=(const LaurentClass& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  LaurentClass& operator-=(const LaurentClass& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  LaurentClass& operator*=(const LaurentClass& o) {
    *this = *this * o;
    return *this;
  }

  friend LaurentClass operator+(LaurentClass a, const LaurentClass& b) { return a += b; }
  friend LaurentClass operator-(LaurentClass a, const LaurentClass& b) { return a -= b; }
  friend LaurentClass operator-(const LaurentClass& a) {
    LaurentClass out;
    for (const auto& [e, c] : a.terms_) out.terms_.emplace_hint(out.terms_.end(), e, -c);
    return out;
  }
  friend LaurentClass operator*(const LaurentClass& a, const LaurentClass& b) {
    LaurentClass out;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
    return out;
  }
  friend LaurentClass operator*(const LaurentClass& a, const BigInt& s) {
    if (s == 0) return {};
    LaurentClass out;
    for (const auto& [e, c] : a.terms_) out.terms_.emplace_hint(out.terms_.end(), e, c * s);
    return out;
  }
  friend LaurentClass operator*(const BigInt& s, const LaurentClass& a) { return a * s; }

  friend bool operator==(const LaurentClass&, const LaurentClass&) = default;

  /// Descending exponents, e.g. "L^3 − L", "L − L^{-1}", "2L^2 + 1".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      const bool negative = c < 0;
      const BigInt mag = abs(c);
      if (first) {
        if (negative) out += "−";
      } else {
        out += negative ? " − " : " + ";
      }
      first = false;
      std::string mono;
      if (e == 1) {
        mono = "L";
      } else if (e > 1) {
        mono = "L^" + std::to_string(e);
      } else if (e < 0) {
        mono = "L^{" + std::to_string(e) + "}";
      }
      if (mono.empty()) {
        out += mag.get_str();
      } else {
        if (mag != 1) out += mag.get_str();
        out += mono;
      }
    }
    return out;
  }

 private:
  void add_term(int exp, const BigInt& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(exp, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Terms terms_;
};

inline std::ostream& operator<<(std::ostream& os, const LaurentClass& x) { return os << x.to_string(); }

inline Dimension virtual_dimension(const LaurentClass& x) { return x.virtual_dimension(); }

inline Rational evaluate(const LaurentClass& x, const BigInt& q) { return x.evaluate(q); }

/// (L - 1)^n, the class of an n-dimensional split torus.
inline LaurentClass torus_class(unsigned n) { return (LaurentClass::L() - LaurentClass::constant(1)).pow(n); }

/// 1 + L + ... + L^n, the class of P^n.
inline LaurentClass projective_space_class(int n) {
  LaurentClass out;
  for (int i = 0; i <= n; ++i) out += LaurentClass::L(i);
  return out;
}

}  // namespace toricurves
