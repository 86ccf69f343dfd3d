#pragma once

// Brute-force point counts over prime fields: tuples of binary forms avoiding
// the patterns, with and without jet conditions at rational points.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "toricurves/error.hpp"
#include "toricurves/fan.hpp"
#include "toricurves/laurent.hpp"
#include "toricurves/moduli.hpp"

namespace toricurves {

/// Binary form over F_p; coeffs[i] multiplies t0^{e-i} t1^i. First nonzero coefficient is 1.
struct FFForm {
  int p = 2;
  int degree = 0;
  std::vector<int> coeffs;

  friend bool operator==(const FFForm&, const FFForm&) = default;
};

inline bool is_small_prime(int p) { return p == 2 || p == 3 || p == 5 || p == 7; }

inline void check_prime(int p) {
  if (!is_small_prime(p)) throw ValidationError("p must be one of 2, 3, 5, 7");
}

/// All normalized forms of degree e, lexicographic in the coefficient vector.
inline std::vector<FFForm> normalized_forms(int p, int e) {
  check_prime(p);
  if (e < 0) throw ValidationError("form degree must be nonnegative");
  std::vector<FFForm> out;
  for (int lead = 0; lead <= e; ++lead) {
    // coefficients before `lead` are zero, coefficient at `lead` is one
    const int free = e - lead;
    long long count = 1;
    for (int i = 0; i < free; ++i) count *= p;
    for (long long code = 0; code < count; ++code) {
      FFForm f{p, e, std::vector<int>(e + 1, 0)};
      f.coeffs[lead] = 1;
      long long c = code;
      for (int i = e; i > lead; --i) {
        f.coeffs[i] = static_cast<int>(c % p);
        c /= p;
      }
      out.push_back(std::move(f));
    }
  }
  return out;
}

namespace ff {

using Poly = std::vector<int>;  // low degree first, no trailing zeros

inline int inv(int a, int p) {
  for (int x = 1; x < p; ++x)
    if (a * x % p == 1) return x;
  throw std::logic_error("no inverse");
}

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly mod(Poly a, const Poly& b, int p) {
  trim(a);
  const int lead_inv = inv(b.back(), p);
  while (a.size() >= b.size()) {
    const int f = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = ((a[shift + i] - f * b[i]) % p + p) % p;
    trim(a);
  }
  return a;
}

inline Poly gcd(Poly a, Poly b, int p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// f(1, t) as a polynomial in t.
inline Poly dehomogenize(const FFForm& f) {
  Poly a(f.coeffs.begin(), f.coeffs.end());
  trim(a);
  return a;
}

inline int eval(const FFForm& f, int t) {
  int v = 0;
  for (int i = f.degree; i >= 0; --i) v = (v * t + f.coeffs[i]) % f.p;
  return v;
}

/// Monic irreducible polynomials of degree 1..max_deg, by degree then lexicographic.
inline std::vector<Poly> irreducibles(int p, int max_deg) {
  std::vector<Poly> out;
  for (int d = 1; d <= max_deg; ++d) {
    long long count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (long long code = 0; code < count; ++code) {
      Poly a(d + 1, 0);
      a[d] = 1;
      long long c = code;
      for (int i = 0; i < d; ++i) {
        a[i] = static_cast<int>(c % p);
        c /= p;
      }
      bool irreducible = true;
      for (const auto& q : out) {
        if (2 * (static_cast<int>(q.size()) - 1) > d) break;
        if (mod(a, q, p).empty()) {
          irreducible = false;
          break;
        }
      }
      if (irreducible) out.push_back(std::move(a));
    }
  }
  return out;
}

}  // namespace ff

/// True iff the forms share a zero on P^1 over the algebraic closure.
inline bool has_common_projective_root(const std::vector<FFForm>& forms) {
  if (forms.empty()) throw ValidationError("has_common_projective_root needs at least one form");
  const int p = forms[0].p;
  bool all_vanish_at_infinity = true;
  ff::Poly g;
  for (const auto& f : forms) {
    if (f.p != p) throw ValidationError("forms over different fields");
    if (f.coeffs.back() != 0) all_vanish_at_infinity = false;
    g = ff::gcd(g, ff::dehomogenize(f), p);
  }
  return g.size() > 1 || all_vanish_at_infinity;
}

/// Enumeration budget: TORICURVES_BUDGET when set, else 10^8 tuples.
inline double default_budget() {
  if (const char* env = std::getenv("TORICURVES_BUDGET")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0) return v;
  }
  return 1e8;
}

struct OracleOptions {
  double budget = default_budget();
  int jobs = 1;
};

/// The first s rational points in the order inf, 0, 1, ..., p-1.
inline std::vector<JetPoint> removed_point_list(int p, int s) {
  if (s < 0 || s > p + 1) throw ValidationError("cannot remove " + std::to_string(s) + " rational points from P^1(F_" + std::to_string(p) + ")");
  std::vector<JetPoint> pts;
  for (int i = 0; i < s; ++i) pts.push_back(i == 0 ? JetPoint{true, 0} : JetPoint{false, i - 1});
  return pts;
}

namespace detail {

// Root signatures: bit i set when the i-th closed point of P^1 (infinity, then
// the monic irreducibles) is a zero of the form.
struct SignatureTable {
  int words = 1;
  std::vector<ff::Poly> irreducibles;

  SignatureTable(int p, int max_deg) : irreducibles(ff::irreducibles(p, std::max(max_deg, 1))) {
    words = static_cast<int>((irreducibles.size() + 1 + 63) / 64);
  }

  std::vector<std::uint64_t> signature(const FFForm& f) const {
    std::vector<std::uint64_t> s(words, 0);
    if (f.coeffs.back() == 0) s[0] |= 1ULL;
    const ff::Poly a = ff::dehomogenize(f);
    for (std::size_t i = 0; i < irreducibles.size(); ++i) {
      if (static_cast<int>(irreducibles[i].size()) - 1 > f.degree) break;
      if (ff::gcd(a, irreducibles[i], f.p).size() > 1) s[(i + 1) / 64] |= 1ULL << ((i + 1) % 64);
    }
    return s;
  }
};

struct FormSpace {
  std::vector<FFForm> forms;
  std::vector<std::uint64_t> sigs;  // forms.size() * words
};

// Enumerates pattern-avoiding tuples; `visit(choice, worker)` is called for each accepted tuple.
class TupleEnumerator {
 public:
  TupleEnumerator(int p, const PatternSet& ps, const std::vector<int>& degrees, const std::vector<JetPoint>& avoid_points)
      : p_(p), k_(degrees.size()) {
    int max_deg = 1;
    for (int e : degrees) max_deg = std::max(max_deg, e);
    SignatureTable table(p, max_deg);
    words_ = table.words;
    spaces_.resize(k_);
    for (std::size_t a = 0; a < k_; ++a) {
      for (auto& f : normalized_forms(p, degrees[a])) {
        bool ok = true;
        for (const auto& pt : avoid_points) {
          const int v = pt.infinity ? f.coeffs.back() : ff::eval(f, static_cast<int>(((pt.value % p) + p) % p));
          if (v == 0) ok = false;
        }
        if (!ok) continue;
        const auto s = table.signature(f);
        spaces_[a].sigs.insert(spaces_[a].sigs.end(), s.begin(), s.end());
        spaces_[a].forms.push_back(std::move(f));
      }
    }
    checks_.resize(k_);
    for (std::uint32_t j : ps.minimal) {
      const int top = 31 - std::countl_zero(j);
      checks_[top].push_back(j);
    }
  }

  double tuple_space() const {
    double s = 1;
    for (const auto& sp : spaces_) s *= static_cast<double>(sp.forms.size());
    return s;
  }

  const FormSpace& space(std::size_t a) const { return spaces_[a]; }

  template <class Visit>
  void run(int jobs, Visit&& visit) const {
    if (k_ == 0) {
      std::vector<std::size_t> empty;
      visit(empty, 0);
      return;
    }
    const std::size_t first = spaces_[0].forms.size();
    jobs = std::max(1, jobs);
    std::vector<std::thread> threads;
    auto work = [&](int w) {
      std::vector<std::size_t> choice(k_, 0);
      for (std::size_t i = static_cast<std::size_t>(w); i < first; i += static_cast<std::size_t>(jobs)) {
        choice[0] = i;
        if (accept(choice, 0)) descend(choice, 1, w, visit);
      }
    };
    if (jobs == 1) {
      work(0);
      return;
    }
    for (int w = 0; w < jobs; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }

 private:
  bool accept(const std::vector<std::size_t>& choice, std::size_t level) const {
    for (std::uint32_t j : checks_[level]) {
      bool shared = false;
      for (int w = 0; w < words_ && !shared; ++w) {
        std::uint64_t acc = ~0ULL;
        for (std::uint32_t rest = j; rest; rest &= rest - 1) {
          const int a = std::countr_zero(rest);
          acc &= spaces_[a].sigs[choice[a] * words_ + w];
        }
        shared = acc != 0;
      }
      if (shared) return false;
    }
    return true;
  }

  template <class Visit>
  void descend(std::vector<std::size_t>& choice, std::size_t level, int worker, Visit& visit) const {
    if (level == k_) {
      visit(choice, worker);
      return;
    }
    for (std::size_t i = 0; i < spaces_[level].forms.size(); ++i) {
      choice[level] = i;
      if (accept(choice, level)) descend(choice, level + 1, worker, visit);
    }
  }

  int p_;
  std::size_t k_;
  int words_ = 1;
  std::vector<FormSpace> spaces_;
  std::vector<std::vector<std::uint32_t>> checks_;
};

inline void check_budget(double needed, double budget) {
  if (needed > budget)
    throw BudgetError("enumeration needs " + std::to_string(static_cast<long long>(needed)) + " tuples; budget is " +
                      std::to_string(static_cast<long long>(budget)) + " (set TORICURVES_BUDGET to raise it)");
}

inline std::uint64_t count_tuples(const TupleEnumerator& en, int jobs) {
  std::vector<std::uint64_t> per(std::max(1, jobs), 0);
  en.run(jobs, [&](const std::vector<std::size_t>&, int w) { ++per[w]; });
  std::uint64_t total = 0;
  for (auto c : per) total += c;
  return total;
}

}  // namespace detail

/// Pattern-avoiding tuples of effective divisors of degrees e on P^1 minus the first s rational points.
inline BigInt ff_pattern_count(int p, const Fan& fan, const std::vector<int>& e, int s = 0, const OracleOptions& opt = {}) {
  check_prime(p);
  if (e.size() != fan.nrays()) throw ValidationError("degree arity does not match the fan");
  const PatternSet ps = pattern_set(fan);
  const detail::TupleEnumerator en(p, ps, e, removed_point_list(p, s));
  detail::check_budget(en.tuple_space(), opt.budget);
  return to_big(static_cast<long long>(detail::count_tuples(en, opt.jobs)));
}

/// Tuples of nonzero forms avoiding the patterns, divided by (p - 1)^r.
inline BigInt ff_hom_count(int p, const Fan& fan, const std::vector<int>& d, const OracleOptions& opt = {}) {
  check_prime(p);
  if (!eff_dual_contains(fan, d)) throw ValidationError("degree " + exponent_to_string(d) + " is not in the dual effective cone");
  const BigInt normalized = ff_pattern_count(p, fan, d, 0, opt);
  const int k = static_cast<int>(fan.nrays());
  const int r = k - fan.dim;
  const BigInt all = normalized * big_pow(p - 1, static_cast<unsigned long>(k));
  const BigInt torus = big_pow(p - 1, static_cast<unsigned long>(r));
  if (all % torus != 0) throw ConsistencyError("tuple count is not divisible by the Neron-Severi torus");
  return all / torus;
}

/// Jet condition for the oracle: target[alpha] lists the m+1 Taylor coefficients at the point.
struct JetSpec {
  JetPoint point;
  int order = 0;
  std::vector<std::vector<int>> target;
};

namespace detail {

// Units of R = F_p[tau]/tau^{m+1}, represented by coefficient vectors.
using Jet = std::vector<int>;

inline Jet jet_mul(const Jet& a, const Jet& b, int p) {
  Jet c(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; i + j < a.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  return c;
}

inline Jet jet_inverse(const Jet& a, int p) {
  Jet b(a.size(), 0);
  b[0] = ff::inv(a[0], p);
  for (std::size_t n = 1; n < a.size(); ++n) {
    int s = 0;
    for (std::size_t i = 1; i <= n; ++i) s = (s + a[i] * b[n - i]) % p;
    b[n] = ((p - s) % p) * b[0] % p;
  }
  return b;
}

inline Jet jet_pow(const Jet& a, long long e, int p) {
  Jet base = e < 0 ? jet_inverse(a, p) : a;
  e = e < 0 ? -e : e;
  Jet out(a.size(), 0);
  out[0] = 1;
  while (e > 0) {
    if (e & 1) out = jet_mul(out, base, p);
    base = jet_mul(base, base, p);
    e >>= 1;
  }
  return out;
}

/// Taylor coefficients of f at the point in the local parameter (reciprocal chart at infinity).
inline Jet form_jet(const FFForm& f, const JetPoint& pt, int order) {
  const int p = f.p;
  Jet j(order + 1, 0);
  if (pt.infinity) {
    for (int i = 0; i <= order && i <= f.degree; ++i) j[i] = f.coeffs[f.degree - i];
    return j;
  }
  const int a = static_cast<int>(((pt.value % p) + p) % p);
  // f(1, a + tau) = sum_i c_i (a + tau)^i
  Jet power(order + 1, 0);
  power[0] = 1;
  for (int i = 0; i <= f.degree; ++i) {
    for (int t = 0; t <= order; ++t) j[t] = (j[t] + f.coeffs[i] * power[t]) % p;
    // power *= (a + tau)
    for (int t = order; t >= 0; --t) power[t] = (power[t] * a + (t ? power[t - 1] : 0)) % p;
  }
  return j;
}

inline std::uint64_t jet_key(const std::vector<Jet>& jets, int p) {
  std::uint64_t key = 0;
  for (const auto& j : jets)
    for (int c : j) key = key * static_cast<std::uint64_t>(p) + static_cast<std::uint64_t>(c);
  return key;
}

/// T_NS(R)-orbit of the target jet tuple, as keys.
inline std::unordered_set<std::uint64_t> torus_orbit(const PicardData& pic, const JetSpec& js, int p, double budget) {
  const int m = js.order;
  const int r = pic.rank;
  const std::size_t k = js.target.size();
  std::vector<Jet> units;
  long long total = 1;
  for (int i = 0; i <= m; ++i) total *= p;
  for (long long code = 0; code < total; ++code) {
    Jet u(m + 1, 0);
    long long c = code;
    for (int i = m; i >= 0; --i) {
      u[i] = static_cast<int>(c % p);
      c /= p;
    }
    if (u[0] != 0) units.push_back(std::move(u));
  }
  double size = 1;
  for (int i = 0; i < r; ++i) size *= static_cast<double>(units.size());
  check_budget(size, budget);
  std::unordered_set<std::uint64_t> orbit;
  std::vector<std::size_t> lam(r, 0);
  while (true) {
    std::vector<Jet> image = js.target;
    for (std::size_t a = 0; a < k; ++a)
      for (int j = 0; j < r; ++j)
        if (pic.projection[j][a] != 0) image[a] = jet_mul(image[a], jet_pow(units[lam[j]], pic.projection[j][a], p), p);
    orbit.insert(jet_key(image, p));
    int j = 0;
    while (j < r && ++lam[j] == units.size()) lam[j++] = 0;
    if (j == r) break;
  }
  return orbit;
}

}  // namespace detail

/// Curves of degree d whose jets at the given points lie in the torus orbits of the targets, divided by (p - 1)^r.
inline BigInt ff_constrained_count(int p, const Fan& fan, const std::vector<int>& d, const std::vector<JetSpec>& jets,
                                   const OracleOptions& opt = {}) {
  check_prime(p);
  if (!eff_dual_contains(fan, d)) throw ValidationError("degree " + exponent_to_string(d) + " is not in the dual effective cone");
  const std::size_t k = fan.nrays();
  std::vector<JetPoint> pts;
  for (const auto& js : jets) {
    if (js.target.size() != k) throw ValidationError("jet target arity does not match the fan");
    if (js.order < 0) throw ValidationError("jet order must be nonnegative");
    for (const auto& comp : js.target) {
      if (static_cast<int>(comp.size()) != js.order + 1) throw ValidationError("jet target component has the wrong length");
      for (int c : comp)
        if (c < 0 || c >= p) throw ValidationError("jet coefficients must lie in [0, p)");
      if (comp[0] == 0) throw ValidationError("target is not a torus jet (a component vanishes at the point)");
    }
    if (!js.point.infinity && (js.point.value < 0 || js.point.value >= p)) throw ValidationError("jet point must be inf or in [0, p)");
    if (std::find(pts.begin(), pts.end(), js.point) != pts.end()) throw ValidationError("jet points must be distinct");
    pts.push_back(js.point);
  }
  double keyspace = 1;
  for (const auto& js : jets)
    for (std::size_t a = 0; a < k; ++a)
      for (int i = 0; i <= js.order; ++i) keyspace *= p;
  if (keyspace > 1.8e19) throw BudgetError("jet key space too large");

  const PicardData pic = picard_data(fan);
  std::vector<std::unordered_set<std::uint64_t>> orbits;
  for (const auto& js : jets) orbits.push_back(detail::torus_orbit(pic, js, p, opt.budget));

  const PatternSet ps = pattern_set(fan);
  // forms vanishing at a jet point can never match a torus jet
  const detail::TupleEnumerator en(p, ps, d, pts);
  double scalings = 1;
  for (std::size_t a = 0; a < k; ++a) scalings *= (p - 1);
  detail::check_budget(en.tuple_space() * scalings, opt.budget);

  // precomputed jets per (variable, form, point)
  std::vector<std::vector<std::vector<detail::Jet>>> form_jets(k);
  for (std::size_t a = 0; a < k; ++a) {
    const auto& forms = en.space(a).forms;
    form_jets[a].resize(forms.size());
    for (std::size_t i = 0; i < forms.size(); ++i)
      for (const auto& js : jets) form_jets[a][i].push_back(detail::form_jet(forms[i], js.point, js.order));
  }

  const int jobs = std::max(1, opt.jobs);
  std::vector<std::uint64_t> per(jobs, 0);
  en.run(jobs, [&](const std::vector<std::size_t>& choice, int w) {
    std::vector<int> c(k, 1);
    while (true) {
      bool all = true;
      for (std::size_t q = 0; q < jets.size() && all; ++q) {
        std::vector<detail::Jet> tuple(k);
        for (std::size_t a = 0; a < k; ++a) {
          tuple[a] = form_jets[a][choice[a]][q];
          for (auto& x : tuple[a]) x = x * c[a] % p;
        }
        all = orbits[q].count(detail::jet_key(tuple, p)) > 0;
      }
      if (all) ++per[w];
      std::size_t a = 0;
      while (a < k && ++c[a] == p) c[a++] = 1;
      if (a == k) break;
    }
  });
  std::uint64_t total = 0;
  for (auto x : per) total += x;
  const BigInt torus = big_pow(p - 1, static_cast<unsigned long>(pic.rank));
  const BigInt all = to_big(static_cast<long long>(total));
  if (all % torus != 0)
    throw ConsistencyError("constrained count " + all.get_str() + " is not divisible by (p - 1)^r = " + torus.get_str());
  return all / torus;
}

/// Curves of degree d meeting the torus at the point: the union of all torus-jet fibers with m = 0.
inline BigInt ff_torus_at_point_count(int p, const Fan& fan, const std::vector<int>& d, const JetPoint& pt,
                                      const OracleOptions& opt = {}) {
  check_prime(p);
  if (!eff_dual_contains(fan, d)) throw ValidationError("degree " + exponent_to_string(d) + " is not in the dual effective cone");
  const detail::TupleEnumerator en(p, pattern_set(fan), d, {pt});
  detail::check_budget(en.tuple_space(), opt.budget);
  const BigInt normalized = to_big(static_cast<long long>(detail::count_tuples(en, opt.jobs)));
  const int k = static_cast<int>(fan.nrays());
  return normalized * big_pow(p - 1, static_cast<unsigned long>(k - (k - fan.dim)));
}

enum class OracleMode { configurations, hom };

struct OracleReport {
  int p = 2;
  std::vector<int> degree;
  OracleMode mode = OracleMode::hom;
  int removed_points = 0;
  BigInt brute;
  BigInt predicted;
  LaurentClass motivic;
  bool equal = false;
  double elapsed_ms = 0;
};

/// Evaluates the motivic class at L = p and compares it with the brute count.
inline OracleReport oracle_compare(int p, const ToricModel& m, const std::vector<int>& degree, OracleMode mode, int s = 0,
                                   const OracleOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  OracleReport rep;
  rep.p = p;
  rep.degree = degree;
  rep.mode = mode;
  rep.removed_points = s;
  if (mode == OracleMode::hom) {
    rep.motivic = hom_class(m, degree);
    rep.brute = ff_hom_count(p, m.fan(), degree, opt);
  } else {
    rep.motivic = pattern_config_class(m, degree, s);
    rep.brute = ff_pattern_count(p, m.fan(), degree, s, opt);
  }
  const Rational v = rep.motivic.evaluate(p);
  if (v.get_den() != 1) throw ConsistencyError("motivic class does not evaluate to an integer at p");
  rep.predicted = v.get_num();
  rep.equal = rep.predicted == rep.brute;
  rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

/// Expected-dimension check for a jet-constrained count: p^{D-1} <= count <= p^{D+1}
/// with D = |d| + n (1 - l(S)) + dim W, for W a single torus jet at each point.
inline bool constrained_dimension_check(int p, const ToricModel& m, const std::vector<int>& d, const std::vector<JetSpec>& jets,
                                        const OracleOptions& opt = {}) {
  int ell = 0;
  for (const auto& js : jets) ell += js.order + 1;
  const int D = degree_total(d) + m.dim() * (1 - ell);
  const BigInt count = ff_constrained_count(p, m.fan(), d, jets, opt);
  const Rational c(count);
  auto pw = [p](int e) { return e >= 0 ? Rational(big_pow(p, e)) : Rational(BigInt(1), big_pow(p, -e)); };
  return c >= pw(D - 1) && c <= pw(D + 1);
}

}  // namespace toricurves
