#include <gtest/gtest.h>

#include <random>

#include "elldilog/tate.hpp"

using namespace elldilog;

namespace {

Curve c37() { return Curve(0, 0, -1, -1, 0); }
Curve c11() { return Curve(0, -1, 1, -10, -20); }
Curve c19() { return Curve(0, 1, 1, -9, -15); }
const Point kP(Rational(0), Rational(0));

// B_3 from its definition as a polynomial, evaluated directly.
Rational b3_oracle(const Rational& x) {
  return x * (x - Rational(1)) * (2 * x - 1) / 2;
}

}  // namespace

TEST(TateIntegrality, BernoulliValues) {
  EXPECT_EQ(bernoulli_poly(3, Rational(0)), 0);
  EXPECT_EQ(bernoulli_poly(3, make_rational(1, 5)), make_rational(6, 125));
  EXPECT_EQ(bernoulli_poly(3, make_rational(1, 2)), 0);
  EXPECT_EQ(bernoulli_poly(2, make_rational(1, 2)), make_rational(-1, 12));
  EXPECT_EQ(bernoulli_poly(2, Rational(0)), make_rational(1, 6));
  EXPECT_THROW(bernoulli_poly(4, Rational(0)), UnsupportedPlace);
}

TEST(TateIntegrality, B3AntisymmetryOnRandomRationals) {
  std::mt19937_64 rng(0);
  std::uniform_int_distribution<long> den(1, 500);
  for (int i = 0; i < 50; ++i) {
    long d = den(rng);
    long n = std::uniform_int_distribution<long>(0, d)(rng);
    Rational x = make_rational(n, d);
    EXPECT_EQ(bernoulli_poly(3, x), b3_oracle(x));
    EXPECT_EQ(bernoulli_poly(3, 1 - x), -bernoulli_poly(3, x)) << x;
    EXPECT_EQ(bernoulli_poly(2, 1 - x), bernoulli_poly(2, x)) << x;
  }
}

TEST(TateIntegrality, IntegralitySumExample) {
  ComponentProfile prof;
  prof.eN = 5;
  prof.add(1, 1);
  prof.add(4, -1);
  EXPECT_EQ(integrality_sum(prof), make_rational(12, 125));
  EXPECT_EQ(prof.total_degree(), 0);
  ComponentProfile sym;
  sym.eN = 5;
  sym.add(1, 1);
  sym.add(4, 1);
  EXPECT_EQ(integrality_sum(sym), 0);
  // Indices are taken mod eN.
  ComponentProfile wrap;
  wrap.eN = 5;
  wrap.add(6, 1);
  wrap.add(-1, -1);
  EXPECT_EQ(integrality_sum(wrap), make_rational(12, 125));
}

TEST(TateIntegrality, RescalingInvariance) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> N(1, 12), e1(1, 6), d(-4, 4);
  for (int i = 0; i < 50; ++i) {
    ComponentProfile prof;
    prof.eN = N(rng);
    for (int k = 0; k < 4; ++k) prof.add(std::uniform_int_distribution<long>(0, prof.eN - 1)(rng), d(rng));
    long e = e1(rng);
    ComponentProfile big = rescale_profile(prof, e);
    EXPECT_EQ(big.eN, prof.eN * e);
    EXPECT_EQ(integrality_sum(big), integrality_sum(prof));
  }
}

TEST(TateIntegrality, TateParameterOf11a1) {
  Curve e = c11();
  PadicNumber q = tate_q(e, 11);
  EXPECT_EQ(q.valuation(), 5);
  PadicNumber j(11, e.j_invariant(), 30);
  PadicNumber diff = tate_j(q, 30) - j;
  EXPECT_TRUE(diff.is_zero() || diff.valuation() >= 20);
}

TEST(TateIntegrality, TateParameterOf19a1) {
  // v_19(Delta) = 3, split
  Curve e = c19();
  EXPECT_EQ(e.discriminant(), -6859);
  PadicNumber q = tate_q(e, 19);
  EXPECT_EQ(q.valuation(), 3);
  PadicNumber diff = tate_j(q, 30) - PadicNumber(19, e.j_invariant(), 30);
  EXPECT_TRUE(diff.is_zero() || diff.valuation() >= 20);
}

TEST(TateIntegrality, TateParameterNeedsSplitReduction) {
  EXPECT_THROW(tate_q(c37(), 37), DomainError);
  EXPECT_THROW(tate_q(c37(), 5), DomainError);
  EXPECT_THROW(tate_q_from_j(Rational(3), 5), DomainError);
}

TEST(TateIntegrality, ComponentIndices11a1) {
  Curve e = c11();
  Point T1(Rational(5), Rational(5)), T2(Rational(16), Rational(60));
  Point T3(Rational(16), Rational(-61)), T4(Rational(5), Rational(-6));
  EXPECT_EQ(component_index(e, T1, 11, 5), 4);
  EXPECT_EQ(component_index(e, T2, 11, 5), 2);
  EXPECT_EQ(component_index(e, T3, 11, 5), 3);
  EXPECT_EQ(component_index(e, T4, 11, 5), 1);
  // P and -P land on opposite components.
  for (const Point& T : {T1, T2}) {
    long a = component_index(e, T, 11, 5), b = component_index(e, neg(e, T), 11, 5);
    EXPECT_EQ((a + b) % 5, 0);
  }
  // The valuation shortcut agrees up to sign.
  for (const Point& T : {T1, T2, T3, T4}) {
    long a = component_index(e, T, 11, 5), v = component_index_valuation(e, T, 11);
    EXPECT_TRUE(a == v || a == 5 - v);
  }
  EXPECT_EQ(component_index(e, Point(), 11, 5), 0);
  EXPECT_THROW(component_index(e, T1, 11, 10), UnsupportedPlace);
}

TEST(TateIntegrality, ComponentIndices19a1) {
  Curve e = c19();
  Point T(Rational(5), Rational(9));
  ASSERT_TRUE(on_curve(e, T));
  long a = component_index(e, T, 19, 3);
  EXPECT_TRUE(a == 1 || a == 2);
  EXPECT_EQ((a + component_index(e, neg(e, T), 19, 3)) % 3, 0);
  // 3T = 0 and the index is additive mod 3.
  EXPECT_EQ(component_index(e, add(e, T, T), 19, 3), (2 * a) % 3);
}

TEST(TateIntegrality, ConditionCExamples) {
  Curve c = c37();
  for (long k : {3, 4, 6}) {
    ConditionReport r = condition_c(c, build_pk(k, kP, c), 37);
    EXPECT_TRUE(r.pass) << k;
    EXPECT_EQ(r.witness, "0");
    EXPECT_FALSE(r.notes.empty());
  }
  Curve e = c11();
  PointDivisor d{{Point(Rational(5), Rational(-6)), 1}, {Point(Rational(5), Rational(5)), -1}};
  ConditionReport r = condition_c(e, d, 11);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.witness, "12/125");
  // Symmetric pair passes.
  PointDivisor s{{Point(Rational(5), Rational(-6)), 1}, {Point(Rational(5), Rational(5)), 1}, {Point(), -2}};
  EXPECT_TRUE(condition_c(e, s, 11).pass);
}

TEST(TateIntegrality, ConditionCRamifiedNeedsOverrides) {
  Curve e = c11();
  Point T4(Rational(5), Rational(-6)), T1(Rational(5), Rational(5));
  PointDivisor d{{T4, 1}, {T1, -1}};
  EXPECT_THROW(condition_c(e, d, 11, 2), UnsupportedPlace);
  // Over e = 2 the indices double; the sum is unchanged.
  ConditionReport r = condition_c(e, d, 11, 2, 1, {{T4, 2}, {T1, 8}});
  EXPECT_EQ(r.witness, "12/125");
}

TEST(TateIntegrality, ConditionCRejectsGoodAndAdditive) {
  EXPECT_THROW(condition_c(c37(), PointDivisor(kP), 2), UnsupportedPlace);
  Curve a(0, 0, 0, 0, 1);
  EXPECT_THROW(condition_c(a, PointDivisor(Point(Rational(0), Rational(1))), 3), UnsupportedPlace);
}
