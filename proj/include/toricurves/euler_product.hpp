#pragma once

// Euler products over P^1 minus s rational points of a constant local factor
// F(t) with integer coefficients, computed exactly with L kept symbolic.
//
// With q standing for L, the closed points of degree d number a_d(q), and
//   prod_p F(t^{deg p}) = exp( sum_d a_d(q) log F(t^d) ).
// Working with the Euler operator E = sum_alpha t_alpha d/dt_alpha keeps every
// intermediate quantity in Z[q]:
//   Lambda = E(log F)            Lambda_n = |n| F_n - sum_{0<m<n} F_m Lambda_{n-m}
//   W      = E(log H)            W_n = sum_{d | gcd(n)} d a_d(q) Lambda_{n/d}
//   H                            |n| H_n = sum_{0<m<=n} W_m H_{n-m}
// The last division must be exact; a remainder means the input was not a
// valid local factor or the engine is wrong, and is reported as such.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "toricurves/dim_series.hpp"
#include "toricurves/error.hpp"
#include "toricurves/fan.hpp"
#include "toricurves/int_poly.hpp"
#include "toricurves/laurent.hpp"
#include "toricurves/mobius.hpp"
#include "toricurves/multi_series.hpp"

namespace toricurves {

/// Polynomial in q, lowest degree first, no trailing zeros.
using QPoly = std::vector<BigInt>;

inline int classical_mobius(int n) {
  int mu = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  return n > 1 ? -mu : mu;
}

/// Closed points of P^1 minus s rational points, by degree.
class ClosedPointWeights {
 public:
  explicit ClosedPointWeights(int removed = 0) : removed_(removed) {
    if (removed < 0) throw ValidationError("number of removed points must be nonnegative");
  }

  int removed() const { return removed_; }

  /// d * a_d(q): q + 1 - s for d = 1, the necklace polynomial otherwise.
  QPoly scaled(int d) const {
    QPoly c(d + 1, 0);
    if (d == 1) {
      c[0] = 1 - removed_;
      c[1] = 1;
    } else {
      for (int e = 1; e <= d; ++e)
        if (d % e == 0) c[d / e] += classical_mobius(e);
    }
    while (!c.empty() && c.back() == 0) c.pop_back();
    return c;
  }

  /// a_d(q) with rational coefficients.
  std::vector<Rational> weight(int d) const {
    std::vector<Rational> out;
    for (const auto& c : scaled(d)) out.push_back(Rational(c, d));
    return out;
  }

  /// a_d(q) evaluated at an integer q.
  BigInt count(int d, const BigInt& q) const {
    BigInt s = 0;
    const QPoly c = scaled(d);
    for (std::size_t i = c.size(); i-- > 0;) s = s * q + c[i];
    if (s % d != 0) throw ConsistencyError("closed point count is not an integer");
    return s / d;
  }

 private:
  int removed_;
};

namespace detail {

// Signed 64-bit integer that throws on overflow; the engine's fast path.
struct Checked {
  long long v = 0;
  struct Overflow {};

  Checked() = default;
  Checked(long long x) : v(x) {}

  friend Checked operator+(Checked a, Checked b) {
    long long r;
    if (__builtin_add_overflow(a.v, b.v, &r)) throw Overflow{};
    return r;
  }
  friend Checked operator-(Checked a, Checked b) {
    long long r;
    if (__builtin_sub_overflow(a.v, b.v, &r)) throw Overflow{};
    return r;
  }
  friend Checked operator*(Checked a, Checked b) {
    long long r;
    if (__builtin_mul_overflow(a.v, b.v, &r)) throw Overflow{};
    return r;
  }
  Checked& operator+=(Checked b) { return *this = *this + b; }
  Checked& operator-=(Checked b) { return *this = *this - b; }
  bool is_zero() const { return v == 0; }
  bool divisible_by(long long d) const { return v % d == 0; }
  Checked divided_by(long long d) const { return v / d; }
  BigInt big() const { return to_big(v); }
  static Checked from_big(const BigInt& b) {
    if (!b.fits_slong_p()) throw Overflow{};
    return b.get_si();
  }
};

struct Big {
  BigInt v;
  Big() = default;
  Big(long long x) : v(to_big(x)) {}
  Big(BigInt x) : v(std::move(x)) {}
  friend Big operator+(const Big& a, const Big& b) { return Big(BigInt(a.v + b.v)); }
  friend Big operator-(const Big& a, const Big& b) { return Big(BigInt(a.v - b.v)); }
  friend Big operator*(const Big& a, const Big& b) { return Big(BigInt(a.v * b.v)); }
  Big& operator+=(const Big& b) {
    v += b.v;
    return *this;
  }
  Big& operator-=(const Big& b) {
    v -= b.v;
    return *this;
  }
  bool is_zero() const { return v == 0; }
  bool divisible_by(long long d) const { return mpz_divisible_ui_p(v.get_mpz_t(), static_cast<unsigned long>(d)) != 0; }
  Big divided_by(long long d) const {
    BigInt r;
    mpz_divexact_ui(r.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(d));
    return Big(std::move(r));
  }
  BigInt big() const { return v; }
  static Big from_big(const BigInt& b) { return Big(b); }
};

// Dense index over the exponents admitted by a cap, in mixed radix.
struct Grid {
  SeriesCap cap;
  std::vector<long long> stride;
  std::vector<std::int32_t> index;  // position -> slot, -1 when not admitted
  std::vector<Exponent> exps;       // slot -> exponent, in increasing position
  std::vector<long long> pos;       // slot -> position

  explicit Grid(const SeriesCap& c) : cap(c) {
    const std::size_t k = cap.nvars();
    stride.assign(k, 1);
    long long total = 1;
    for (std::size_t i = k; i-- > 0;) {
      stride[i] = total;
      total *= cap.box[i] + 1;
      if (total > (1LL << 31)) throw BudgetError("series cap is too large");
    }
    index.assign(static_cast<std::size_t>(total), -1);
    Exponent e(k, 0);
    for (long long p = 0; p < total; ++p) {
      if (cap.admits(e)) {
        index[p] = static_cast<std::int32_t>(exps.size());
        exps.push_back(e);
        this->pos.push_back(p);
      }
      for (std::size_t i = k; i-- > 0;) {
        if (++e[i] <= cap.box[i]) break;
        e[i] = 0;
      }
    }
  }

  std::size_t size() const { return exps.size(); }

  std::size_t slot(const Exponent& e) const {
    long long p = 0;
    for (std::size_t i = 0; i < e.size(); ++i) p += stride[i] * e[i];
    return static_cast<std::size_t>(index[p]);
  }

  // Calls f(slot_m, slot_{n-m}) for every m <= n with m != 0.
  template <class Fn>
  void for_each_split(std::size_t n_slot, Fn&& f) const {
    const Exponent& n = exps[n_slot];
    const long long pn = pos[n_slot];
    const std::size_t k = n.size();
    Exponent m(k, 0);
    long long pm = 0;
    while (true) {
      // advance odometer
      std::size_t i = k;
      while (i-- > 0) {
        if (m[i] < n[i]) {
          ++m[i];
          pm += stride[i];
          break;
        }
        pm -= stride[i] * m[i];
        m[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) return;
      f(static_cast<std::size_t>(index[pm]), static_cast<std::size_t>(index[pn - pm]));
    }
  }
};

// Number of (m, n) pairs with m <= n admitted by the cap: the engine's work estimate.
inline double split_count(const SeriesCap& cap) {
  const int top = cap.max_total_degree();
  std::vector<double> ways(top + 1, 0.0);  // ways[t]: pairs with |n| = t so far
  ways[0] = 1;
  for (int b : cap.box) {
    std::vector<double> next(top + 1, 0.0);
    for (int t = 0; t <= top; ++t)
      for (int x = 0; x <= b && t + x <= top; ++x) next[t + x] += ways[t] * (x + 1);
    ways = std::move(next);
  }
  return std::accumulate(ways.begin(), ways.end(), 0.0);
}

template <class T>
using TPoly = std::vector<T>;

template <class T>
std::vector<QPoly> run_engine(const Grid& g, const std::vector<BigInt>& f_big, const ClosedPointWeights& w) {
  const std::size_t N = g.size();
  std::vector<T> f(N);
  for (std::size_t i = 0; i < N; ++i) f[i] = T::from_big(f_big[i]);

  std::vector<T> lambda(N);
  for (std::size_t n = 1; n < N; ++n) {
    T acc = T(total_degree(g.exps[n])) * f[n];
    g.for_each_split(n, [&](std::size_t m, std::size_t rest) {
      if (!f[m].is_zero() && rest != 0) acc -= f[m] * lambda[rest];
    });
    lambda[n] = acc;
  }

  const int max_deg = g.cap.max_total_degree();
  std::vector<TPoly<T>> scaled(max_deg + 1);
  for (int d = 1; d <= max_deg; ++d)
    for (const auto& c : w.scaled(d)) scaled[d].push_back(T::from_big(c));

  std::vector<TPoly<T>> wser(N);
  for (std::size_t n = 1; n < N; ++n) {
    const Exponent& e = g.exps[n];
    int gcd = 0;
    for (int x : e) gcd = std::gcd(gcd, x);
    TPoly<T> acc;
    for (int d = 1; d <= gcd; ++d) {
      if (gcd % d) continue;
      long long p = 0;
      for (std::size_t i = 0; i < e.size(); ++i) p += g.stride[i] * (e[i] / d);
      const T& l = lambda[g.index[p]];
      if (l.is_zero()) continue;
      const auto& c = scaled[d];
      if (acc.size() < c.size()) acc.resize(c.size());
      for (std::size_t i = 0; i < c.size(); ++i) acc[i] += c[i] * l;
    }
    while (!acc.empty() && acc.back().is_zero()) acc.pop_back();
    wser[n] = std::move(acc);
  }

  std::vector<TPoly<T>> h(N);
  h[0] = {T(1)};
  TPoly<T> acc;
  for (std::size_t n = 1; n < N; ++n) {
    acc.assign(1, T(0));
    g.for_each_split(n, [&](std::size_t m, std::size_t rest) {
      const auto& a = wser[m];
      const auto& b = h[rest];
      if (a.empty() || b.empty()) return;
      if (acc.size() < a.size() + b.size() - 1) acc.resize(a.size() + b.size() - 1);
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] += a[i] * b[j];
      }
    });
    const long long deg = total_degree(g.exps[n]);
    for (auto& c : acc) {
      if (!c.divisible_by(deg))
        throw ConsistencyError("Euler product coefficient at " + exponent_to_string(g.exps[n]) +
                               " is not integral in L; the local factor is invalid or the engine is inconsistent");
      c = c.divided_by(deg);
    }
    while (!acc.empty() && acc.back().is_zero()) acc.pop_back();
    h[n] = acc;
  }

  std::vector<QPoly> out(N);
  for (std::size_t n = 0; n < N; ++n)
    for (const auto& c : h[n]) out[n].push_back(c.big());
  return out;
}

inline LaurentClass qpoly_to_class(const QPoly& p) {
  LaurentClass out;
  for (std::size_t i = 0; i < p.size(); ++i) out += LaurentClass::monomial(static_cast<int>(i), p[i]);
  return out;
}

}  // namespace detail

/// Limit on the number of (m, n) pairs one engine run may visit.
inline double& engine_split_budget() {
  static double budget = 1.0e9;
  return budget;
}

/// prod over the closed points of P^1 minus s rational points of F(t^{deg p}),
/// truncated to the cap of F.
inline MultiSeries<LaurentClass> euler_product_p1(const MultiSeries<BigInt>& f, int s) {
  const SeriesCap& cap = f.cap();
  if (f.coeff(Exponent(cap.nvars(), 0)) != 1) throw ValidationError("Euler product needs a local factor with constant term 1");
  if (detail::split_count(cap) > engine_split_budget())
    throw BudgetError("series cap exceeded: " + std::to_string(static_cast<long long>(detail::split_count(cap))) +
                      " coefficient pairs needed");
  const detail::Grid g(cap);
  std::vector<BigInt> fv(g.size(), 0);
  for (const auto& [e, c] : f.terms()) fv[g.slot(e)] = c;
  const ClosedPointWeights w(s);
  std::vector<QPoly> h;
  try {
    h = detail::run_engine<detail::Checked>(g, fv, w);
  } catch (const detail::Checked::Overflow&) {
    h = detail::run_engine<detail::Big>(g, fv, w);
  }
  MultiSeries<LaurentClass> out(f.variables(), cap);
  for (std::size_t n = 0; n < g.size(); ++n) out.set(g.exps[n], detail::qpoly_to_class(h[n]));
  return out;
}

inline MultiSeries<LaurentClass> euler_product_p1(const IntPoly& f, int s, const SeriesCap& cap) {
  return euler_product_p1(f.to_series(cap), s);
}

/// Global Moebius coefficients mu(e) of P^1 minus s rational points.
struct GlobalMobius {
  int removed_points = 0;
  SeriesCap cap;
  MultiSeries<LaurentClass> coeffs;

  LaurentClass at(const Exponent& e) const {
    if (!cap.admits(e)) throw BudgetError("degree " + exponent_to_string(e) + " lies outside the computed cap");
    return coeffs.coeff(e);
  }
};

inline GlobalMobius global_mobius(const IntPoly& local, int s, const SeriesCap& cap) {
  return GlobalMobius{s, cap, euler_product_p1(local, s, cap)};
}

inline GlobalMobius global_mobius(const Fan& fan, int s, const SeriesCap& cap) {
  return global_mobius(generating_polynomial(mobius_table(pattern_set(fan))), s, cap);
}

/// Floor of the truncated sum over |e| <= E: the tail has degree <= -ceil((E+1)/2).
inline int euler_product_floor(int order) { return -(order / 2); }

/// sum_{|e| <= E} mu(e) L^{-|e|} as an element of the completion.
inline DimSeries euler_product_at_Linv(const GlobalMobius& gm, int order) {
  if (!gm.cap.total || *gm.cap.total < order)
    throw BudgetError("Euler product needs a total-degree cap of at least " + std::to_string(order));
  LaurentClass sum;
  for (const auto& [e, c] : gm.coeffs.terms()) {
    const int deg = total_degree(e);
    if (deg <= order) sum += c.shifted(-deg);
  }
  return DimSeries::truncated(sum, euler_product_floor(order));
}

inline SeriesCap euler_cap(std::size_t nvars, int order) { return SeriesCap::total_degree(nvars, order); }

inline DimSeries euler_product_at_Linv(const Fan& fan, int s, int order) {
  return euler_product_at_Linv(global_mobius(fan, s, euler_cap(fan.nrays(), order)), order);
}

/// prod_alpha (1 - t_alpha)^{s-1} (1 - L t_alpha)^{-1}: the zeta function of P^1 minus s points in each variable.
inline MultiSeries<LaurentClass> multiply_by_kapranov(const MultiSeries<LaurentClass>& h, int s) {
  const SeriesCap& cap = h.cap();
  const detail::Grid g(cap);
  std::vector<LaurentClass> v(g.size());
  for (const auto& [e, c] : h.terms()) v[g.slot(e)] = c;
  const LaurentClass Lc = LaurentClass::L();
  for (std::size_t a = 0; a < cap.nvars(); ++a) {
    const long long st = g.stride[a];
    auto below = [&](std::size_t n) -> std::optional<std::size_t> {
      if (g.exps[n][a] == 0) return std::nullopt;
      return static_cast<std::size_t>(g.index[g.pos[n] - st]);
    };
    // (1 - L t)^{-1}: increasing order
    for (std::size_t n = 0; n < g.size(); ++n)
      if (auto b = below(n)) v[n] += Lc * v[*b];
    if (s == 0) {
      for (std::size_t n = 0; n < g.size(); ++n)
        if (auto b = below(n)) v[n] += v[*b];
    } else {
      for (int rep = 0; rep < s - 1; ++rep)
        for (std::size_t n = g.size(); n-- > 0;)
          if (auto b = below(n)) v[n] -= v[*b];
    }
  }
  MultiSeries<LaurentClass> out(h.variables(), cap);
  for (std::size_t n = 0; n < g.size(); ++n) out.set(g.exps[n], std::move(v[n]));
  return out;
}

}  // namespace toricurves
