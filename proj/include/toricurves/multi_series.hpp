#pragma once

// Truncated multivariate power series in variables t_alpha.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "toricurves/laurent.hpp"

namespace toricurves {

using Exponent = std::vector<int>;

inline int total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

inline bool exponent_leq(const Exponent& a, const Exponent& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

/// Box cap (per-variable exponent bound) with an optional total-degree cap.
struct SeriesCap {
  std::vector<int> box;
  std::optional<int> total;

  static SeriesCap box_only(std::vector<int> box) { return {std::move(box), std::nullopt}; }
  static SeriesCap uniform(std::size_t nvars, int per_variable) {
    return {std::vector<int>(nvars, per_variable), std::nullopt};
  }
  static SeriesCap total_degree(std::size_t nvars, int total) {
    return {std::vector<int>(nvars, total), total};
  }

  std::size_t nvars() const { return box.size(); }

  bool admits(const Exponent& e) const {
    if (e.size() != box.size()) return false;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] < 0 || e[i] > box[i]) return false;
    return !total || toricurves::total_degree(e) <= *total;
  }

  /// Largest total degree of an admitted exponent.
  int max_total_degree() const {
    const int sum = std::accumulate(box.begin(), box.end(), 0);
    return total ? std::min(*total, sum) : sum;
  }

  friend bool operator==(const SeriesCap&, const SeriesCap&) = default;
};

inline bool coeff_is_zero(const BigInt& c) { return c == 0; }
inline bool coeff_is_zero(const Rational& c) { return c == 0; }
inline bool coeff_is_zero(const LaurentClass& c) { return c.is_zero(); }

inline std::vector<std::string> default_variable_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("t" + std::to_string(i + 1));
  return names;
}

/// Sparse truncated series; only exponents admitted by the cap are ever stored.
template <class Coeff>
class MultiSeries {
 public:
  using Terms = std::map<Exponent, Coeff>;

  explicit MultiSeries(const SeriesCap& cap) : MultiSeries(default_variable_names(cap.nvars()), cap) {}
  MultiSeries(std::vector<std::string> variables, SeriesCap cap)
      : variables_(std::move(variables)), cap_(std::move(cap)) {
    if (variables_.size() != cap_.nvars()) throw std::invalid_argument("MultiSeries: variable/cap arity mismatch");
  }

  static MultiSeries one(SeriesCap cap, Coeff unit) {
    MultiSeries out(std::move(cap));
    out.set(Exponent(out.nvars(), 0), std::move(unit));
    return out;
  }

  const std::vector<std::string>& variables() const { return variables_; }
  const SeriesCap& cap() const { return cap_; }
  std::size_t nvars() const { return variables_.size(); }
  const Terms& terms() const { return terms_; }

  Coeff coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Coeff{} : it->second;
  }

  /// Stores c at e; exponents outside the cap are discarded.
  void set(const Exponent& e, Coeff c) {
    if (!cap_.admits(e)) return;
    if (coeff_is_zero(c)) {
      terms_.erase(e);
    } else {
      terms_[e] = std::move(c);
    }
  }

  void add(const Exponent& e, const Coeff& c) {
    if (!cap_.admits(e) || coeff_is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (coeff_is_zero(it->second)) terms_.erase(it);
    }
  }

  MultiSeries& operator+=(const MultiSeries& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add(e, c);
    return *this;
  }
  MultiSeries& operator-=(const MultiSeries& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add(e, -c);
    return *this;
  }

  friend MultiSeries operator+(MultiSeries a, const MultiSeries& b) { return a += b; }
  friend MultiSeries operator-(MultiSeries a, const MultiSeries& b) { return a -= b; }

  /// Product truncated to the common cap.
  friend MultiSeries operator*(const MultiSeries& a, const MultiSeries& b) {
    a.check_compatible(b);
    MultiSeries out(a.variables_, a.cap_);
    Exponent e(a.nvars());
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        if (out.cap_.admits(e)) out.add(e, ca * cb);
      }
    }
    return out;
  }

  friend bool operator==(const MultiSeries& a, const MultiSeries& b) {
    return a.cap_ == b.cap_ && a.terms_ == b.terms_;
  }

  /// Applies f to every coefficient; zero results are dropped.
  template <class F>
  auto map_coeffs(F&& f) const {
    using Out = std::decay_t<decltype(f(std::declval<const Exponent&>(), std::declval<const Coeff&>()))>;
    MultiSeries<Out> out(variables_, cap_);
    for (const auto& [e, c] : terms_) out.set(e, f(e, c));
    return out;
  }

  /// Same coefficients under a (possibly smaller) cap.
  MultiSeries restricted(const SeriesCap& cap) const {
    MultiSeries out(variables_, cap);
    for (const auto& [e, c] : terms_) out.set(e, c);
    return out;
  }

 private:
  void check_compatible(const MultiSeries& o) const {
    if (o.cap_ != cap_) throw std::invalid_argument("MultiSeries: incompatible caps");
  }

  std::vector<std::string> variables_;
  SeriesCap cap_;
  Terms terms_;
};

/// t_alpha -> L^a t_alpha for every variable: multiplies the coefficient at e by L^{a|e|}.
inline MultiSeries<LaurentClass> multiseries_scale_vars(const MultiSeries<LaurentClass>& f, int a) {
  return f.map_coeffs([a](const Exponent& e, const LaurentClass& c) { return c.shifted(a * total_degree(e)); });
}

/// Substitutes t_alpha = L^{shift} in every variable of a Laurent-coefficient series.
inline LaurentClass specialize_all(const MultiSeries<LaurentClass>& f, int shift) {
  LaurentClass out;
  for (const auto& [e, c] : f.terms()) out += c.shifted(shift * total_degree(e));
  return out;
}

inline std::string exponent_to_string(const Exponent& e) {
  std::string s = "(";
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(e[i]);
  }
  return s + ")";
}

}  // namespace toricurves
