#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "toricurves/multi_series.hpp"

namespace toricurves {

/// Sparse multivariate polynomial with integer coefficients in t_1, ..., t_n.
class IntPoly {
 public:
  using Terms = std::map<Exponent, BigInt>;

  explicit IntPoly(std::size_t nvars = 0) : nvars_(nvars) {}

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  BigInt coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? BigInt(0) : it->second;
  }

  BigInt constant_term() const { return coeff(Exponent(nvars_, 0)); }

  void add(const Exponent& e, const BigInt& c) {
    if (e.size() != nvars_) throw std::invalid_argument("IntPoly: exponent arity mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// Value with every variable set to L^{shift}.
  LaurentClass specialize_all(int shift) const {
    LaurentClass out;
    for (const auto& [e, c] : terms_) out += LaurentClass::monomial(shift * total_degree(e), c);
    return out;
  }

  BigInt evaluate_at_ones() const {
    BigInt s = 0;
    for (const auto& [e, c] : terms_) s += c;
    return s;
  }

  MultiSeries<BigInt> to_series(const SeriesCap& cap) const {
    if (cap.nvars() != nvars_) throw std::invalid_argument("IntPoly: cap arity mismatch");
    MultiSeries<BigInt> out(cap);
    for (const auto& [e, c] : terms_) out.set(e, c);
    return out;
  }

  friend bool operator==(const IntPoly&, const IntPoly&) = default;

  /// Terms by increasing degree, e.g. "1 − t1·t2·t3".
  std::string to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<Exponent, BigInt>> ordered(terms_.begin(), terms_.end());
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
      const int da = total_degree(a.first), db = total_degree(b.first);
      if (da != db) return da < db;
      return a.first > b.first;
    });
    std::string out;
    bool first = true;
    for (const auto& [e, c] : ordered) {
      const bool negative = c < 0;
      if (first) {
        if (negative) out += "−";
      } else {
        out += negative ? " − " : " + ";
      }
      first = false;
      std::string mono;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!mono.empty()) mono += "·";
        mono += names.at(i);
        if (e[i] > 1) mono += "^" + std::to_string(e[i]);
      }
      const BigInt mag = abs(c);
      if (mono.empty()) {
        out += mag.get_str();
      } else {
        if (mag != 1) out += mag.get_str() + "·";
        out += mono;
      }
    }
    return out;
  }

  std::string to_string() const { return to_string(default_variable_names(nvars_)); }

 private:
  std::size_t nvars_;
  Terms terms_;
};

}  // namespace toricurves
