#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "toricurves/euler_product.hpp"
#include "toricurves/moduli.hpp"
#include "toricurves/oracle.hpp"
#include "toricurves/serialize.hpp"

using namespace toricurves;

namespace {

LaurentClass L(int e = 1) { return LaurentClass::L(e); }
LaurentClass C(long c) { return LaurentClass::constant(c); }

IntPoly poly(std::size_t k, const std::vector<std::pair<Exponent, long>>& terms) {
  IntPoly p(k);
  for (const auto& [e, c] : terms) p.add(e, c);
  return p;
}

// Truncated integer series keyed by exponent.
using NumSeries = std::map<Exponent, BigInt>;

NumSeries num_mul(const NumSeries& a, const NumSeries& b, const SeriesCap& cap) {
  NumSeries out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Exponent e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      if (!cap.admits(e)) continue;
      out[e] += ca * cb;
    }
  return out;
}

NumSeries num_pow(NumSeries base, long long n, const SeriesCap& cap) {
  NumSeries out{{Exponent(cap.nvars(), 0), 1}};
  while (n > 0) {
    if (n & 1) out = num_mul(out, base, cap);
    base = num_mul(base, base, cap);
    n >>= 1;
  }
  return out;
}

// Closed points of P^1 over F_q of degree d, from a brute-force irreducibility sieve.
long long closed_points(int q, int d, int removed) {
  long long n = 0;
  for (const auto& f : ff::irreducibles(q, d))
    if (static_cast<int>(f.size()) - 1 == d) ++n;
  return d == 1 ? n + 1 - removed : n;
}

// prod_d F(t^d)^{a_d(q)}, computed with integers at a fixed q.
NumSeries numeric_euler_product(const IntPoly& f, int q, int removed, const SeriesCap& cap) {
  NumSeries out{{Exponent(cap.nvars(), 0), 1}};
  for (int d = 1; d <= cap.max_total_degree(); ++d) {
    NumSeries fd;
    for (const auto& [e, c] : f.terms()) {
      Exponent ed(e);
      for (auto& x : ed) x *= d;
      if (cap.admits(ed)) fd[ed] += c;
    }
    out = num_mul(out, num_pow(fd, closed_points(q, d, removed), cap), cap);
  }
  return out;
}

}  // namespace

TEST(ClosedPointWeights, NecklaceMatchesSieve) {
  for (int q : {2, 3, 5})
    for (int d = 1; d <= 5; ++d)
      for (int s : {0, 1, 2}) EXPECT_EQ(ClosedPointWeights(s).count(d, q), to_big(closed_points(q, d, s))) << q << " " << d << " " << s;
  EXPECT_THROW(ClosedPointWeights(-1), ValidationError);
}

TEST(EulerProduct, SmallFactors) {
  const auto kap = euler_product_p1(poly(1, {{{0}, 1}, {{1}, -1}}), 0, SeriesCap::box_only({2}));
  EXPECT_EQ(kap.coeff({1}), C(-1) - L());
  EXPECT_EQ(kap.coeff({2}), L());

  const auto one = euler_product_p1(poly(2, {{{0, 0}, 1}}), 3, SeriesCap::uniform(2, 3));
  EXPECT_EQ(one, MultiSeries<LaurentClass>::one(SeriesCap::uniform(2, 3), C(1)));

  const auto plus = euler_product_p1(poly(1, {{{0}, 1}, {{1}, 1}}), 0, SeriesCap::box_only({2}));
  EXPECT_EQ(plus.coeff({1}), C(1) + L());
  EXPECT_EQ(plus.coeff({2}), L(2));

  const auto pair = euler_product_p1(poly(2, {{{0, 0}, 1}, {{1, 1}, -1}}), 0, SeriesCap::box_only({2, 2}));
  EXPECT_EQ(pair.coeff({1, 1}), C(-1) - L());
  EXPECT_EQ(pair.coeff({2, 2}), L());
  EXPECT_EQ(pair.terms().size(), 3u);
}

TEST(EulerProduct, KapranovToCapSix) {
  const auto kap = euler_product_p1(poly(1, {{{0}, 1}, {{1}, -1}}), 0, SeriesCap::box_only({6}));
  MultiSeries<LaurentClass> expected(SeriesCap::box_only({6}));
  expected.set({0}, C(1));
  expected.set({1}, C(-1) - L());
  expected.set({2}, L());
  EXPECT_EQ(kap, expected);
}

TEST(EulerProduct, NonUnitConstantTermRejected) {
  EXPECT_THROW(euler_product_p1(poly(1, {{{0}, 2}, {{1}, 1}}), 0, SeriesCap::box_only({2})), ValidationError);
}

TEST(EulerProduct, BudgetGuard) {
  const double saved = engine_split_budget();
  engine_split_budget() = 10;
  EXPECT_THROW(euler_product_p1(poly(1, {{{0}, 1}, {{1}, -1}}), 0, SeriesCap::box_only({6})), BudgetError);
  engine_split_budget() = saved;
}

TEST(EulerProduct, SpecializationMatchesNumericProduct) {
  std::mt19937_64 rng(17);
  std::vector<std::pair<IntPoly, SeriesCap>> cases;
  cases.emplace_back(generating_polynomial(mobius_table(pattern_set(fixture("p2")))), SeriesCap{{2, 2, 2}, 6});
  cases.emplace_back(generating_polynomial(mobius_table(pattern_set(fixture("bl1p2")))), SeriesCap{{2, 2, 2, 2}, 5});
  cases.emplace_back(generating_polynomial(mobius_table(pattern_set(fixture("p1")))), SeriesCap{{3, 3}, 6});
  for (int i = 0; i < 3; ++i) {
    IntPoly f(2);
    f.add({0, 0}, 1);
    for (int a = 0; a <= 2; ++a)
      for (int b = 0; b <= 2; ++b)
        if (a + b > 0) f.add({a, b}, static_cast<long>(rng() % 7) - 3);
    cases.emplace_back(f, SeriesCap{{4, 4}, 5});
  }
  for (const auto& [f, cap] : cases)
    for (int s : {0, 1}) {
      const auto motivic = euler_product_p1(f, s, cap);
      for (int q : {2, 3, 5}) {
        const NumSeries num = numeric_euler_product(f, q, s, cap);
        const detail::Grid g(cap);
        for (const auto& e : g.exps) {
          const auto it = num.find(e);
          const BigInt expected = it == num.end() ? BigInt(0) : it->second;
          ASSERT_EQ(evaluate(motivic.coeff(e), q), Rational(expected)) << exponent_to_string(e) << " q=" << q << " s=" << s;
        }
      }
    }
}

TEST(EulerProduct, BigIntegerPathAgreesWithFastPath) {
  const IntPoly f = generating_polynomial(mobius_table(pattern_set(fixture("dp6"))));
  const SeriesCap cap = SeriesCap::uniform(6, 2);
  const detail::Grid g(cap);
  std::vector<BigInt> fv(g.size(), 0);
  for (const auto& [e, c] : f.terms()) fv[g.slot(e)] = c;
  const ClosedPointWeights w(1);
  EXPECT_EQ(detail::run_engine<detail::Checked>(g, fv, w), detail::run_engine<detail::Big>(g, fv, w));
}

TEST(EulerProduct, LargeCoefficientsFallBackToBigIntegers) {
  // (1 - 1000 t)^{prod}: coefficients reach 1000^8 times binomials
  const auto big = euler_product_p1(poly(1, {{{0}, 1}, {{1}, -1000}}), 0, SeriesCap::box_only({8}));
  const auto num = numeric_euler_product(poly(1, {{{0}, 1}, {{1}, -1000}}), 3, 0, SeriesCap::box_only({8}));
  for (int n = 0; n <= 8; ++n) EXPECT_EQ(evaluate(big.coeff({n}), 3), Rational(num.at({n}))) << n;
}

TEST(EulerProduct, CutAndPaste) {
  for (const char* name : {"p1", "p2", "bl1p2", "p1xp1"}) {
    const IntPoly f = generating_polynomial(mobius_table(pattern_set(fixture(name))));
    const SeriesCap cap = SeriesCap::uniform(f.nvars(), 4);
    const auto open = euler_product_p1(f, 1, cap);
    const auto closed = euler_product_p1(f, 0, cap);
    const auto local = f.to_series(cap).map_coeffs([](const Exponent&, const BigInt& c) { return LaurentClass::constant(c); });
    EXPECT_EQ(open * local, closed) << name;
    const auto open2 = euler_product_p1(f, 2, cap);
    EXPECT_EQ(open2 * local * local, closed) << name;
  }
}

TEST(EulerProduct, MultiplicativeOverDisjointBlocks) {
  const IntPoly f1 = generating_polynomial(mobius_table(pattern_set(fixture("p1"))));
  const IntPoly f12 = generating_polynomial(mobius_table(pattern_set(fan_product(fixture("p1"), fixture("p1")))));
  const SeriesCap cap1 = SeriesCap::uniform(2, 3), cap12 = SeriesCap::uniform(4, 3);
  const auto a = euler_product_p1(f1, 0, cap1);
  const auto ab = euler_product_p1(f12, 0, cap12);
  for (const auto& [e1, c1] : a.terms())
    for (const auto& [e2, c2] : a.terms()) {
      Exponent e(e1);
      e.insert(e.end(), e2.begin(), e2.end());
      EXPECT_EQ(ab.coeff(e), c1 * c2) << exponent_to_string(e);
    }
  EXPECT_EQ(ab.terms().size(), a.terms().size() * a.terms().size());
}

TEST(GlobalMobius, Examples) {
  const auto p1 = global_mobius(fixture("p1"), 0, SeriesCap::uniform(2, 3));
  EXPECT_EQ(p1.at({0, 0}), C(1));
  EXPECT_EQ(p1.at({1, 1}), C(-1) - L());
  EXPECT_EQ(p1.at({2, 2}), L());
  EXPECT_EQ(p1.coeffs.terms().size(), 3u);
  EXPECT_THROW(p1.at({4, 0}), BudgetError);

  const auto p2 = global_mobius(fixture("p2"), 0, SeriesCap::uniform(3, 3));
  EXPECT_EQ(p2.at({1, 1, 1}), C(-1) - L());
  EXPECT_EQ(p2.at({2, 2, 2}), L());
  EXPECT_EQ(p2.coeffs.terms().size(), 3u);
}

TEST(GlobalMobius, DimensionBound) {
  for (const char* name : kFixtureFans) {
    const Fan fan = fixture(name);
    const int top = fan.nrays() <= 4 ? 8 : 6;
    for (int s : {0, 1}) {
      const auto gm = global_mobius(fan, s, euler_cap(fan.nrays(), top));
      EXPECT_EQ(gm.at(Exponent(fan.nrays(), 0)), C(1));
      for (const auto& [e, c] : gm.coeffs.terms()) {
        const int size = total_degree(e);
        const Dimension dim = c.shifted(-size).virtual_dimension();
        EXPECT_TRUE(dim.at_most(Rational(-((size + 1) / 2)))) << name << " " << exponent_to_string(e) << " " << c;
      }
    }
  }
}

// Partial sums sum_{e <= d - b} mu(e) L^{-|e|} L^{|e_A| - |d_A|} obey the estimate with a = 1/2.
TEST(GlobalMobius, PartialSumBound) {
  for (const char* name : {"p1", "p2", "bl1p2", "p1xp1"}) {
    const Fan fan = fixture(name);
    const std::size_t k = fan.nrays();
    const auto gm = global_mobius(fan, 0, SeriesCap::uniform(k, 4));
    const detail::Grid g(gm.cap);
    const Rational a(1, 2);
    for (const auto& d : g.exps)
      for (std::uint32_t A = 1; A < (1U << k); ++A)
        for (int b = 0; b <= 1; ++b) {
          if (degree_min(d) < b) continue;
          LaurentClass sum;
          int dA = 0, minA = 1 << 30, sizeA = 0;
          for (std::size_t i = 0; i < k; ++i)
            if ((A >> i) & 1U) {
              dA += d[i];
              minA = std::min(minA, d[i]);
              ++sizeA;
            }
          for (const auto& [e, c] : gm.coeffs.terms()) {
            bool below = true;
            int eA = 0;
            for (std::size_t i = 0; i < k; ++i) {
              if (e[i] > d[i] - b) below = false;
              if ((A >> i) & 1U) eA += e[i];
            }
            if (below) sum += c.shifted(-total_degree(e) + eA - dA);
          }
          const Rational bound = -Rational(std::min(Rational(1), a)) / 2 * minA -
                                 Rational(b, 2) * std::min(Rational(1), Rational(Rational(2 * sizeA) - a));
          EXPECT_TRUE(sum.virtual_dimension().at_most(bound)) << name << " d=" << exponent_to_string(d) << " A=" << A << " b=" << b;
        }
  }
}

TEST(EulerProductAtLinv, Examples) {
  const DimSeries p1 = euler_product_at_Linv(fixture("p1"), 0, 4);
  EXPECT_EQ(p1.floor(), std::optional<int>(-2));
  EXPECT_TRUE(p1.agrees_with((C(1) - L(-1)) * (C(1) - L(-2))));
  EXPECT_EQ(p1.known(), C(1) - L(-1) - L(-2));

  const DimSeries p2 = euler_product_at_Linv(fixture("p2"), 0, 6);
  EXPECT_EQ(p2.floor(), std::optional<int>(-3));
  EXPECT_TRUE(p2.agrees_with((C(1) - L(-2)) * (C(1) - L(-3))));

  for (const char* name : kFixtureFans) {
    const DimSeries zero = euler_product_at_Linv(fixture(name), 0, 0);
    EXPECT_EQ(zero.known(), C(1));
    EXPECT_EQ(zero.floor(), std::optional<int>(0));
  }
}

// The local identity makes the Euler product a product of local densities; the truncation agrees with it above the floor.
TEST(EulerProductAtLinv, FloorIsSound) {
  for (int order = 0; order <= 12; ++order) {
    const DimSeries p1 = euler_product_at_Linv(fixture("p1"), 0, order);
    EXPECT_TRUE(p1.agrees_with((C(1) - L(-1)) * (C(1) - L(-2)))) << order;
  }
  for (int order = 0; order <= 10; ++order) {
    const DimSeries p2 = euler_product_at_Linv(fixture("p2"), 0, order);
    EXPECT_TRUE(p2.agrees_with((C(1) - L(-2)) * (C(1) - L(-3)))) << order;
  }
}

TEST(Configurations, RoutesAgreeAndMatchKapranovFactor) {
  for (const char* name : kFixtureFans) {
    const ToricModel m(fixture(name));
    const SeriesCap cap = SeriesCap::uniform(m.fan().nrays(), 2);
    for (int s : {0, 1, 2}) {
      const auto cs = m.configurations(s, cap);
      EXPECT_TRUE(cs->routes_compared) << name;
      // Q route directly
      const auto direct = euler_product_p1(avoidance_indicator(m.patterns(), cap), s);
      EXPECT_EQ(direct, cs->classes) << name << " s=" << s;
    }
  }
}

TEST(Serialization, GlobalMobius) {
  const auto gm = global_mobius(fixture("p1"), 0, SeriesCap::uniform(2, 2));
  const json j = to_json(gm);
  ASSERT_EQ(j.size(), 3u);
  EXPECT_EQ(j[1]["e"], (std::vector<int>{1, 1}));
  EXPECT_EQ(laurent_from_json(j[1]["mu"]), C(-1) - L());
}
