#pragma once

// Classes of spaces of rational curves on a toric variety, Tamagawa numbers
// and the error reports comparing the two.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "toricurves/dim_series.hpp"
#include "toricurves/error.hpp"
#include "toricurves/euler_product.hpp"
#include "toricurves/fan.hpp"
#include "toricurves/int_poly.hpp"
#include "toricurves/laurent.hpp"
#include "toricurves/mobius.hpp"

namespace toricurves {

using DegreeVector = std::vector<int>;

inline int degree_total(const DegreeVector& d) { return total_degree(d); }
inline int degree_min(const DegreeVector& d) { return d.empty() ? 0 : *std::min_element(d.begin(), d.end()); }

/// Pattern-avoiding configurations of P^1 minus s rational points, within a cap.
struct ConfigurationSeries {
  int removed_points = 0;
  GlobalMobius mobius;
  MultiSeries<LaurentClass> classes;
  bool routes_compared = false;
};

/// Local factor P with 1/(1 - t_alpha) folded in: the indicator of "lies above no pattern".
inline MultiSeries<BigInt> avoidance_indicator(const PatternSet& ps, const SeriesCap& cap) {
  MultiSeries<BigInt> q(cap);
  const detail::Grid g(cap);
  for (const auto& e : g.exps)
    if (!ps.lies_above(e)) q.set(e, 1);
  return q;
}

/// A validated fan with its combinatorial data and a cache of engine runs.
class ToricModel {
 public:
  explicit ToricModel(Fan fan, std::uint64_t seed = 0) : fan_(std::move(fan)), report_(validate(fan_, seed)) {
    if (!report_.ok()) {
      std::string msg = report_.smooth ? "fan is not complete" : "fan is not smooth";
      for (const auto& d : report_.details) msg += "; " + d;
      throw ValidationError(msg);
    }
    picard_ = picard_data(fan_);
    patterns_ = pattern_set(fan_);
    mobius_ = mobius_table(patterns_);
    local_ = generating_polynomial(mobius_);
    class_ = class_of_variety(fan_);
  }

  const Fan& fan() const { return fan_; }
  const FanReport& report() const { return report_; }
  int dim() const { return fan_.dim; }
  int nrays() const { return static_cast<int>(fan_.nrays()); }
  int picard_rank() const { return picard_.rank; }
  const PicardData& picard() const { return picard_; }
  const PatternSet& patterns() const { return patterns_; }
  const MobiusTable& mobius() const { return mobius_; }
  const IntPoly& local_polynomial() const { return local_; }
  const LaurentClass& variety_class() const { return class_; }

  /// Compare the two configuration routes for s <= 2 (on by default).
  void set_route_check(bool on) { route_check_ = on; }

  std::shared_ptr<const GlobalMobius> global(int s, const SeriesCap& cap) const {
    const auto key = std::make_tuple(s, cap.box, cap.total.value_or(-1));
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = mobius_cache_.find(key);
      if (it != mobius_cache_.end()) return it->second;
    }
    auto gm = std::make_shared<const GlobalMobius>(global_mobius(local_, s, cap));
    std::lock_guard<std::mutex> lock(mutex_);
    return mobius_cache_.emplace(key, gm).first->second;
  }

  std::shared_ptr<const ConfigurationSeries> configurations(int s, const SeriesCap& cap) const {
    const auto key = std::make_tuple(s, cap.box, cap.total.value_or(-1));
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = config_cache_.find(key);
      if (it != config_cache_.end()) return it->second;
    }
    const auto gm = global(s, cap);
    auto cs = std::make_shared<ConfigurationSeries>(ConfigurationSeries{s, *gm, multiply_by_kapranov(gm->coeffs, s), false});
    if (route_check_ && s <= 2) {
      const auto direct = euler_product_p1(avoidance_indicator(patterns_, cap), s);
      if (!(direct == cs->classes))
        throw ConsistencyError("configuration classes disagree between the two Euler product routes (s = " + std::to_string(s) + ")");
      cs->routes_compared = true;
    }
    std::lock_guard<std::mutex> lock(mutex_);
    return config_cache_.emplace(key, std::move(cs)).first->second;
  }

  /// A cached configuration series whose cap admits e, or a fresh one with box e.
  std::shared_ptr<const ConfigurationSeries> configurations_covering(int s, const Exponent& e) const {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      for (const auto& [key, cs] : config_cache_)
        if (std::get<0>(key) == s && cs->mobius.cap.admits(e)) return cs;
    }
    return configurations(s, SeriesCap::box_only(e));
  }

 private:
  using CacheKey = std::tuple<int, std::vector<int>, int>;

  Fan fan_;
  FanReport report_;
  PicardData picard_;
  PatternSet patterns_;
  MobiusTable mobius_;
  IntPoly local_;
  LaurentClass class_;
  bool route_check_ = true;

  mutable std::mutex mutex_;
  mutable std::map<CacheKey, std::shared_ptr<const GlobalMobius>> mobius_cache_;
  mutable std::map<CacheKey, std::shared_ptr<const ConfigurationSeries>> config_cache_;
};

inline void check_degree_arity(const ToricModel& m, const DegreeVector& d) {
  if (static_cast<int>(d.size()) != m.nrays())
    throw ValidationError("degree has " + std::to_string(d.size()) + " entries, fan has " + std::to_string(m.nrays()) + " rays");
  for (int x : d)
    if (x < 0) throw ValidationError("degree entries must be nonnegative");
}

/// Class of Sigma(1)-tuples of effective divisors of multidegree e on P^1 minus s points avoiding the patterns.
inline LaurentClass pattern_config_class(const ToricModel& m, const DegreeVector& e, int s = 0) {
  check_degree_arity(m, e);
  return m.configurations_covering(s, e)->classes.coeff(e);
}

/// (L - 1)^n times the configuration class; zero when d is outside the dual effective cone.
inline LaurentClass hom_class(const ToricModel& m, const DegreeVector& d) {
  check_degree_arity(m, d);
  if (!eff_dual_contains(m.fan(), d)) return {};
  return torus_class(static_cast<unsigned>(m.dim())) * pattern_config_class(m, d, 0);
}

inline LaurentClass normalized_hom_class(const ToricModel& m, const DegreeVector& d) {
  return hom_class(m, d).shifted(-degree_total(d));
}

/// L^n (1 - L^{-1})^{-r} times the Euler product truncated at total degree E.
inline DimSeries tamagawa(const ToricModel& m, int order) {
  const auto gm = m.global(0, euler_cap(m.fan().nrays(), order));
  const DimSeries ep = euler_product_at_Linv(*gm, order);
  const int floor = euler_product_floor(order);
  DimSeries tau = ep;
  if (m.picard_rank() > 0) tau = inverse_one_minus_Linv_pow(m.picard_rank(), floor) * ep;
  return tau.shifted(m.dim());
}

enum class Verdict { pass, fail, inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    default:
      return "inconclusive";
  }
}

struct ErrorReport {
  DegreeVector degree;
  DimSeries tau_trunc;
  LaurentClass hom;
  LaurentClass normalized;
  DimSeries delta;
  Dimension delta_dim;
  Rational bound;
  Verdict verdict = Verdict::inconclusive;

  bool pass() const { return verdict == Verdict::pass; }
};

/// A known term above the bound fails; a floor above the bound leaves the verdict open.
inline Verdict decide_verdict(const Dimension& delta_dim, const std::optional<int>& floor, const Rational& bound) {
  if (!delta_dim.at_most(bound)) return Verdict::fail;
  if (!floor || Rational(*floor) <= bound) return Verdict::pass;
  return Verdict::inconclusive;
}

/// Compares tau(E) with the normalized class at d against n - min(d)/4.
inline ErrorReport convergence_report(const ToricModel& m, const DegreeVector& d, int order) {
  check_degree_arity(m, d);
  if (!eff_dual_contains(m.fan(), d)) throw ValidationError("degree " + exponent_to_string(d) + " is not in the dual effective cone");
  ErrorReport rep;
  rep.degree = d;
  rep.tau_trunc = tamagawa(m, order);
  rep.hom = hom_class(m, d);
  rep.normalized = rep.hom.shifted(-degree_total(d));
  rep.delta = rep.tau_trunc - DimSeries::exact(rep.normalized);
  rep.delta_dim = rep.delta.virtual_dimension();
  rep.bound = Rational(m.dim()) - Rational(degree_min(d), 4);
  rep.verdict = decide_verdict(rep.delta_dim, rep.delta.floor(), rep.bound);
  return rep;
}

/// A rational point of P^1: an affine coordinate or the point at infinity.
struct JetPoint {
  bool infinity = false;
  long long value = 0;

  std::string to_string() const { return infinity ? "inf" : std::to_string(value); }
  friend auto operator<=>(const JetPoint&, const JetPoint&) = default;
};

/// Jet orders at distinct rational points plus the class and dimension of the allowed jet set W.
struct JetCondition {
  std::vector<std::pair<JetPoint, int>> points;
  LaurentClass w_class = LaurentClass::constant(1);
  int w_dim = 0;

  int length() const {
    int l = 0;
    for (const auto& [p, mp] : points) l += mp + 1;
    return l;
  }

  void check(int n) const {
    std::vector<JetPoint> seen;
    for (const auto& [p, mp] : points) {
      if (mp < 0) throw ValidationError("jet order must be nonnegative");
      if (std::find(seen.begin(), seen.end(), p) != seen.end()) throw ValidationError("jet points must be distinct");
      seen.push_back(p);
    }
    if (w_dim > length() * n) throw ValidationError("jet set dimension exceeds l(S) dim V");
  }

  /// W = all jets: L^{n sum m_p} [V]^{#points}.
  static JetCondition full_fibers(const ToricModel& m, std::vector<std::pair<JetPoint, int>> pts) {
    JetCondition jc;
    jc.points = std::move(pts);
    int msum = 0;
    for (const auto& [p, mp] : jc.points) msum += mp;
    jc.w_class = m.variety_class().pow(static_cast<unsigned>(jc.points.size())).shifted(m.dim() * msum);
    jc.w_dim = m.dim() * (msum + static_cast<int>(jc.points.size()));
    return jc;
  }

  /// W = one rational jet at each point.
  static JetCondition single_torus_jet(std::vector<std::pair<JetPoint, int>> pts) {
    JetCondition jc;
    jc.points = std::move(pts);
    return jc;
  }
};

/// Main term of the constrained asymptotic:
/// L^n (1 - L^{-1})^{-r} EP_S [W] prod_p (1 - L^{-1})^r L^{-(m_p+1) n}.
inline DimSeries constrained_main_term(const ToricModel& m, const JetCondition& jc, int order) {
  jc.check(m.dim());
  if (jc.points.empty()) return tamagawa(m, order) * DimSeries::exact(jc.w_class);
  const int s = static_cast<int>(jc.points.size());
  const int n = m.dim();
  const int r = m.picard_rank();
  const auto gm = m.global(s, euler_cap(m.fan().nrays(), order));
  const DimSeries ep = euler_product_at_Linv(*gm, order);
  const LaurentClass one_minus = LaurentClass::constant(1) - LaurentClass::L(-1);
  LaurentClass factor = one_minus.pow(static_cast<unsigned>(r * (s - 1))) * jc.w_class;
  factor = factor.shifted(n - n * jc.length());
  return DimSeries::exact(factor) * ep;
}

/// virtual_dimension(hom_class) = |d| + n for nonzero classes.
inline bool expected_dimension_check(const ToricModel& m, const DegreeVector& d) {
  const LaurentClass h = hom_class(m, d);
  if (h.is_zero()) return false;
  return h.virtual_dimension() == Dimension(degree_total(d) + m.dim());
}

/// Smallest member of the dual effective cone with every entry >= 1 (search up to total `bound`).
inline std::optional<DegreeVector> diagonal_generator(const Fan& fan, int bound = 64) {
  const std::size_t k = fan.nrays();
  for (int total = static_cast<int>(k); total <= bound; ++total) {
    std::vector<int> d(k, 1);
    std::optional<DegreeVector> found;
    auto rec = [&](auto&& self, std::size_t i, int left) -> void {
      if (found) return;
      if (i + 1 == k) {
        d[i] = 1 + left;
        if (eff_dual_contains(fan, d)) found = d;
        return;
      }
      for (int v = left; v >= 0 && !found; --v) {
        d[i] = 1 + v;
        self(self, i + 1, left - v);
      }
    };
    rec(rec, 0, total - static_cast<int>(k));
    if (found) return found;
  }
  return std::nullopt;
}

}  // namespace toricurves
