#include <random>

#include <gtest/gtest.h>

#include "toricurves/dim_series.hpp"
#include "toricurves/laurent.hpp"
#include "toricurves/multi_series.hpp"
#include "toricurves/serialize.hpp"

using namespace toricurves;

namespace {

LaurentClass L(int e = 1) { return LaurentClass::L(e); }
LaurentClass C(long c) { return LaurentClass::constant(c); }

// Random class with coefficients up to ~2^100 so products leave 64 bits.
LaurentClass random_class(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nterms(0, 5), exp(-6, 6);
  LaurentClass::Terms t;
  const int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    BigInt c = to_big(static_cast<long long>(rng() >> 2));
    c *= to_big(static_cast<long long>(rng() >> 30));
    if (rng() & 1) c = -c;
    t[exp(rng)] += c;
  }
  return LaurentClass::from_terms(t);
}

}  // namespace

TEST(LaurentClass, VirtualDimension) {
  EXPECT_EQ((L(2) + 3 * L()).virtual_dimension(), Dimension(2));
  EXPECT_TRUE(LaurentClass().virtual_dimension().is_minus_infinity());
  EXPECT_EQ(projective_space_class(2), C(1) + L() + L(2));
  EXPECT_EQ(projective_space_class(2).virtual_dimension(), Dimension(2));
  EXPECT_LT(Dimension::minus_infinity(), Dimension(-1000000));
}

TEST(LaurentClass, NoZeroCoefficientsStored) {
  const LaurentClass x = (L() + C(1)) - L();
  EXPECT_EQ(x.terms().size(), 1u);
  for (const auto& [e, c] : (L(3) - L(3)).terms()) ADD_FAILURE() << e << " " << c;
}

TEST(LaurentClass, Evaluate) {
  EXPECT_EQ(evaluate(C(1) + L() + L(2), 3), Rational(13));
  EXPECT_EQ(evaluate(L() - L(-1), 2), Rational(3, 2));
  EXPECT_EQ(evaluate(L(3) - L(), 3), Rational(24));
  EXPECT_THROW(evaluate(L(), 1), std::invalid_argument);
}

TEST(LaurentClass, Rendering) {
  EXPECT_EQ((L(3) - L()).to_string(), "L^3 − L");
  EXPECT_EQ((L() - L(-1)).to_string(), "L − L^{-1}");
  EXPECT_EQ((C(-2) + L(2)).to_string(), "L^2 − 2");
  EXPECT_EQ(LaurentClass().to_string(), "0");
}

TEST(LaurentClass, RingAxiomsRandomized) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_class(rng), b = random_class(rng), c = random_class(rng);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a + b) * c, a * c + b * c);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a + (b - a), b);
    EXPECT_EQ(a * C(1), a);
  }
}

TEST(LaurentClass, EvaluationIsHomomorphism) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_class(rng), b = random_class(rng);
    for (int q : {2, 3, 5, 7}) {
      EXPECT_EQ(evaluate(a * b, q), evaluate(a, q) * evaluate(b, q));
      EXPECT_EQ(evaluate(a + b, q), evaluate(a, q) + evaluate(b, q));
    }
  }
}

TEST(LaurentClass, DimensionOfProductIsSum) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_class(rng), b = random_class(rng);
    if (a.is_zero() || b.is_zero()) {
      EXPECT_TRUE((a * b).virtual_dimension().is_minus_infinity());
    } else {
      EXPECT_EQ((a * b).virtual_dimension(), Dimension(a.virtual_dimension().value() + b.virtual_dimension().value()));
    }
  }
}

TEST(DimSeries, Multiplication) {
  const auto one_minus = C(1) - L(-1), one_plus = C(1) + L(-1);
  EXPECT_EQ(dimser_mul(DimSeries::exact(one_minus), DimSeries::exact(one_plus)), DimSeries::exact(C(1) - L(-2)));

  const auto shifted = dimser_mul(DimSeries::truncated(C(1), -3), DimSeries::exact(L()));
  EXPECT_EQ(shifted.known(), L());
  EXPECT_EQ(shifted.floor(), std::optional<int>(-2));

  // (1 - L^-1 + L^-2)(1 + L^-1) = 1 + L^-3, and the tails reach degree -3 + 0
  const auto p = dimser_mul(DimSeries::truncated(C(1) - L(-1) + L(-2), -3), DimSeries::truncated(one_plus, -3));
  EXPECT_EQ(p.floor(), std::optional<int>(-3));
  EXPECT_EQ(p.known(), C(1) + L(-3));
}

TEST(DimSeries, InverseOneMinusLinvPow) {
  EXPECT_EQ(inverse_one_minus_Linv_pow(1, -3), DimSeries::truncated(C(1) + L(-1) + L(-2) + L(-3), -3));
  EXPECT_EQ(inverse_one_minus_Linv_pow(2, -2), DimSeries::truncated(C(1) + 2 * L(-1) + 3 * L(-2), -2));
  EXPECT_EQ(inverse_one_minus_Linv_pow(3, -2), DimSeries::truncated(C(1) + 3 * L(-1) + 6 * L(-2), -2));
  // times (1 - L^-1)^r gives 1 up to the floor
  for (int r = 1; r <= 5; ++r) {
    const auto prod = inverse_one_minus_Linv_pow(r, -8) * DimSeries::exact((C(1) - L(-1)).pow(r));
    EXPECT_TRUE(prod.agrees_with(C(1))) << r;
  }
}

TEST(DimSeries, FloorSoundnessRandomized) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> fl(-6, 2);
  for (int i = 0; i < 300; ++i) {
    const auto a = random_class(rng), b = random_class(rng);
    const int fa = fl(rng), fb = fl(rng);
    const auto ta = DimSeries::truncated(a, fa), tb = DimSeries::truncated(b, fb);
    EXPECT_TRUE((ta * tb).agrees_with(a * b));
    EXPECT_TRUE((ta + tb).agrees_with(a + b));
    EXPECT_TRUE((ta - tb).agrees_with(a - b));
    EXPECT_TRUE((ta * DimSeries::exact(b)).agrees_with(a * b));
    const auto prod = ta * tb;
    for (const auto& [e, c] : prod.known().terms()) EXPECT_GE(e, *prod.floor());
  }
}

TEST(MultiSeries, ScaleVariables) {
  const auto cap = SeriesCap::box_only({3});
  MultiSeries<LaurentClass> f(cap);
  f.set({0}, C(1));
  f.set({1}, C(-1));
  const auto g = multiseries_scale_vars(f, 1);
  EXPECT_EQ(g.coeff({1}), C(-1) * L());

  MultiSeries<LaurentClass> h(SeriesCap::box_only({2, 2}));
  h.set({0, 0}, C(1));
  h.set({1, 1}, C(-1));
  EXPECT_EQ(multiseries_scale_vars(h, 1).coeff({1, 1}), C(-1) * L(2));

  MultiSeries<LaurentClass> k(cap);
  k.set({0}, C(1));
  k.set({1}, L(-1));
  EXPECT_EQ(multiseries_scale_vars(k, 2).coeff({1}), L());
  EXPECT_EQ(multiseries_scale_vars(k, 2).coeff({0}), C(1));
}

TEST(MultiSeries, CapRespectedByProduct) {
  const auto cap = SeriesCap{{3, 3}, 4};
  MultiSeries<LaurentClass> a(cap), b(cap);
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; j <= 3; ++j) {
      a.set({i, j}, C(i + 1));
      b.set({i, j}, C(j + 1));
    }
  const auto p = a * b;
  for (const auto& [e, c] : p.terms()) EXPECT_TRUE(cap.admits(e));
  // a direct convolution at (2, 2)
  LaurentClass direct;
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; j <= 2; ++j) direct += a.coeff({i, j}) * b.coeff({2 - i, 2 - j});
  EXPECT_EQ(p.coeff({2, 2}), direct);
  EXPECT_TRUE(p.coeff({3, 3}).is_zero());
}

TEST(MultiSeries, KapranovIdentity) {
  for (int D = 0; D <= 10; ++D) {
    const auto cap = SeriesCap::box_only({D});
    MultiSeries<LaurentClass> zeta(cap), factor(cap);
    // (1-t)^{-1}(1-Lt)^{-1} = sum_n [P^n] t^n
    for (int n = 0; n <= D; ++n) zeta.set({n}, projective_space_class(n));
    factor.set({0}, C(1));
    factor.set({1}, C(-1) - L());
    factor.set({2}, L());
    const auto one = zeta * factor;
    EXPECT_EQ(one, MultiSeries<LaurentClass>::one(cap, C(1))) << D;
  }
}

TEST(Serialization, LaurentRoundTrip) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const auto a = random_class(rng);
    const json j = to_json(a);
    EXPECT_EQ(laurent_from_json(json::parse(j.dump())), a);
  }
  EXPECT_EQ(to_json(L(3) - L()).dump(), R"({"coeffs":{"1":"-1","3":"1"}})");
}

TEST(Serialization, DimSeriesRoundTrip) {
  const auto t = DimSeries::truncated(L() - L(-1) + L(-5), -3);
  EXPECT_EQ(dim_series_from_json(to_json(t)), t);
  EXPECT_EQ(to_json(t)["floor"], -3);
  const auto e = DimSeries::exact(L(2));
  EXPECT_EQ(to_json(e)["floor"], "exact");
  EXPECT_EQ(dim_series_from_json(to_json(e)), e);
  EXPECT_THROW(laurent_from_json(json::parse(R"({"coeffs":{"x":"1"}})")), ValidationError);
  EXPECT_THROW(laurent_from_json(json::parse(R"({"coeffs":{"1":1}})")), ValidationError);
}
