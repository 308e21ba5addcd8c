#include <gtest/gtest.h>

#include <random>

#include "elldilog/dilog.hpp"
#include "elldilog/divisor.hpp"
#include "elldilog/line_relation.hpp"

using namespace elldilog;

namespace {

Curve c37() { return Curve(0, 0, -1, -1, 0); }
const Point kP(Rational(0), Rational(0));

MWCoordinates coords37(long kmax = 40) {
  MWCoordinates mw(c37(), {kP});
  mw.add_multiples(0, kmax);
  return mw;
}

PointDivisor random_divisor(std::mt19937_64& rng, int terms = 4, long kmax = 6) {
  Curve c = c37();
  std::uniform_int_distribution<long> k(-kmax, kmax), n(-3, 3);
  PointDivisor d;
  for (int i = 0; i < terms; ++i) d.add_term(scalar_mul(c, k(rng), kP), n(rng));
  return d;
}

// Principal-type divisor: m0 = m1 = 0.
PointDivisor random_i2(std::mt19937_64& rng) {
  Curve c = c37();
  std::uniform_int_distribution<long> k(-4, 4);
  long a = k(rng), b = k(rng);
  // (aP + bP) - (aP) - (bP) + (0)
  PointDivisor d;
  d.add_term(scalar_mul(c, a + b, kP), 1);
  d.add_term(scalar_mul(c, a, kP), -1);
  d.add_term(scalar_mul(c, b, kP), -1);
  d.add_term(Point(), 1);
  return d;
}

}  // namespace

TEST(DivisorAlgebra, CanonicalForm) {
  PointDivisor d;
  d.add_term(kP, 2);
  d.add_term(kP, -2);
  EXPECT_TRUE(d.empty());
  EXPECT_EQ(d, PointDivisor());
}

TEST(DivisorAlgebra, ConvolveExamples) {
  Curve c = c37();
  Point Q = scalar_mul(c, 3, kP);
  EXPECT_EQ(convolve(c, PointDivisor(kP), PointDivisor(Q)), PointDivisor(scalar_mul(c, 4, kP)));
  PointDivisor a{{kP, 1}, {Point(), -1}}, b{{Q, 1}, {Point(), -1}};
  PointDivisor expect{{add(c, kP, Q), 1}, {kP, -1}, {Q, -1}, {Point(), 1}};
  EXPECT_EQ(convolve(c, a, b), expect);
  // ((P)-(0)) * ((P)-(0)) = (2P) - 2(P) + (0), with 2P = (1,0) from the group law
  PointDivisor sq{{Point(Rational(1), Rational(0)), 1}, {kP, -2}, {Point(), 1}};
  EXPECT_EQ(convolve(c, a, a), sq);
}

TEST(DivisorAlgebra, InvoluteExamples) {
  Curve c = c37();
  EXPECT_EQ(involute(c, PointDivisor(kP)), PointDivisor(Point(Rational(0), Rational(1))));
  EXPECT_EQ(involute(c, PointDivisor(Point())), PointDivisor(Point()));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    PointDivisor d = random_divisor(rng);
    EXPECT_EQ(involute(c, involute(c, d)), d);
  }
}

TEST(DivisorAlgebra, ConvolutionLaws) {
  Curve c = c37();
  std::mt19937_64 rng(9);
  for (int i = 0; i < 15; ++i) {
    PointDivisor a = random_divisor(rng, 3), b = random_divisor(rng, 3), e = random_divisor(rng, 3);
    EXPECT_EQ(convolve(c, a, b), convolve(c, b, a));
    EXPECT_EQ(convolve(c, convolve(c, a, b), e), convolve(c, a, convolve(c, b, e)));
    EXPECT_EQ(involute(c, convolve(c, a, b)), convolve(c, involute(c, a), involute(c, b)));
  }
}

TEST(DivisorAlgebra, MomentExamples) {
  MWCoordinates mw = coords37();
  PointDivisor d{{kP, 1}, {Point(), -1}};
  MomentVector m = moment_vector(d, mw);
  EXPECT_EQ(m.m0, 0);
  EXPECT_EQ(m.m1, std::vector<Integer>{1});
  EXPECT_EQ(m.augmentation_level(), 1);
  PointDivisor unmapped(Point(Rational(0), Rational(0)));
  MWCoordinates empty(c37(), {kP});
  EXPECT_THROW(moment_vector(unmapped, empty), CoordinateError);
}

TEST(DivisorAlgebra, MomentsAreAdditive) {
  MWCoordinates mw = coords37();
  std::mt19937_64 rng(13);
  for (int i = 0; i < 20; ++i) {
    PointDivisor a = random_divisor(rng), b = random_divisor(rng);
    MomentVector s = moment_vector(a, mw);
    s += moment_vector(b, mw);
    EXPECT_EQ(s, moment_vector(a + b, mw));
  }
}

TEST(DivisorAlgebra, ConvolutionOfI2IsInI4) {
  Curve c = c37();
  MWCoordinates mw = coords37();
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    PointDivisor a = random_i2(rng), b = random_i2(rng);
    MomentVector ma = moment_vector(a, mw);
    ASSERT_EQ(ma.m0, 0);
    ASSERT_TRUE(MomentVector::all_zero(ma.m1));
    EXPECT_EQ(moment_vector(convolve(c, a, b), mw).augmentation_level(), 4);
  }
}

TEST(DivisorAlgebra, BuildPk) {
  Curve c = c37();
  PointDivisor p3 = build_pk(3, kP, c);
  PointDivisor expect{{scalar_mul(c, 3, kP), 1}, {kP, 5}, {scalar_mul(c, 2, kP), -4}};
  EXPECT_EQ(p3, expect);
  EXPECT_TRUE(build_pk(1, kP, c).empty());
  EXPECT_TRUE(build_pk(2, kP, c).empty());
}

TEST(DivisorAlgebra, PkMomentsForSmallK) {
  Curve c = c37();
  MWCoordinates mw = coords37();
  for (long k = -10; k <= 10; ++k) {
    PointDivisor d = build_pk(k, kP, c);
    MomentVector m = moment_vector(d, mw);
    // odd moments vanish; the even ones are 1 - k + t and k^2 - k - 2t with t = (k^3 - k)/6
    long t = (k * k * k - k) / 6;
    EXPECT_EQ(m.m0, 1 - k + t) << k;
    EXPECT_EQ(m.m2[0], k * k - k - 2 * t) << k;
    EXPECT_TRUE(MomentVector::all_zero(m.m1)) << k;
    EXPECT_TRUE(MomentVector::all_zero(m.m3)) << k;
    EXPECT_TRUE(condition_a(d, mw)) << k;
  }
}

TEST(DivisorAlgebra, ConditionA) {
  Curve c = c37();
  MWCoordinates mw = coords37();
  EXPECT_FALSE(condition_a(PointDivisor(kP), mw));
  EXPECT_TRUE(condition_a(build_pk(4, kP, c), mw));
  PointDivisor d = build_pk(10, kP, c) + (-4) * build_pk(5, kP, c);
  EXPECT_TRUE(condition_a(d, mw));
  // rank one: sum n_k k^3
  PointDivisor e{{scalar_mul(c, 2, kP), 1}, {kP, -8}};
  EXPECT_TRUE(condition_a(e, mw));
}

TEST(DivisorAlgebra, CoordinatesAreVerified) {
  MWCoordinates mw(c37(), {kP});
  EXPECT_NO_THROW(mw.set(Point(Rational(2), Rational(3)), {4}));
  EXPECT_THROW(mw.set(Point(Rational(2), Rational(3)), {3}), CoordinateError);
  EXPECT_THROW(mw.at(Point(Rational(6), Rational(-14))), CoordinateError);
}

TEST(DivisorAlgebra, TorsionShiftedCoordinates) {
  // 11a1 is rank zero with torsion of order 5.
  Curve e(0, -1, 1, -10, -20);
  MWCoordinates mw(e, {});
  Point T(Rational(5), Rational(5));
  mw.set(T, {}, true);
  EXPECT_TRUE(mw.torsion_shifted(T));
  PointDivisor d{{T, 3}};
  EXPECT_EQ(moment_vector(d, mw).m0, 3);
  EXPECT_TRUE(condition_a(d, mw));
}

namespace {

LatticeData lattice37() { return periods(c37()); }

}  // namespace

TEST(DivisorAlgebra, LineRelationAnnihilatedByDilog) {
  Curve c = c37();
  LatticeData L = lattice37();
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2, 2);
  int done = 0;
  while (done < 5) {
    cplx px(u(rng), u(rng)), py(u(rng), u(rng));
    std::array<cplx, 3> s = {cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
    CDivisor d = line_relation(c, px, py, s, L);
    // each A_i is the full intersection (degree 3), so every convolution term has degree 9
    EXPECT_EQ(d.degree(), 27);
    EXPECT_LT(std::fabs(elliptic_dilog(d, L)), 1e-8);
    ++done;
  }
}

TEST(DivisorAlgebra, LineRelationWithRepeatedLine) {
  Curve c = c37();
  LatticeData L = lattice37();
  cplx px(0.3, -0.7), py(1.1, 0.2);
  cplx s1(0.5, 0.25), s3(-1.2, 0.8);
  CDivisor d = line_relation(c, px, py, {s1, s1, s3}, L);
  EXPECT_LT(std::fabs(elliptic_dilog(d, L)), 1e-8);
}

TEST(DivisorAlgebra, LineRelationThroughRationalPointUsesRealLines) {
  Curve c = c37();
  LatticeData L = lattice37();
  // Lines through P = (0,0): slopes 0 (y = 0) meets the curve at x = -1, 0, 1.
  auto pts = line_cubic_points(c, Line{0.0, 0.0, 0.0});
  std::vector<double> xs;
  for (auto& p : pts) xs.push_back(p[0].real());
  std::sort(xs.begin(), xs.end());
  EXPECT_NEAR(xs[0], -1, 1e-12);
  EXPECT_NEAR(xs[1], 0, 1e-12);
  EXPECT_NEAR(xs[2], 1, 1e-12);
  CDivisor d = line_relation(c, 0.0, 0.0, {cplx(0.0), cplx(1.0), cplx(-2.0)}, L);
  EXPECT_LT(std::fabs(elliptic_dilog(d, L)), 1e-8);
}

TEST(DivisorAlgebra, VerticalDirectionRejected) {
  EXPECT_THROW(slope_from_direction(0.0, 1.0), DomainError);
  EXPECT_NEAR(std::abs(slope_from_direction(2.0, 1.0) - 0.5), 0.0, 1e-15);
}

TEST(DivisorAlgebra, FourLineAlternatingSumIsInvolutionSymmetric) {
  // Formal line divisors A_i = (a_i) + (b_i) + (c_i) - 3(0) in free generators.
  const int dim = 12;
  auto gen = [](int i) {
    FormalPoint v(dim, 0);
    v[i] = 1;
    return v;
  };
  std::array<FormalDivisor, 4> A;
  for (int i = 0; i < 4; ++i) {
    A[i].add_term(gen(3 * i), 1);
    A[i].add_term(gen(3 * i + 1), 1);
    A[i].add_term(gen(3 * i + 2), 1);
    A[i].add_term(FormalPoint(dim, 0), -3);
  }
  FormalDivisor s = four_line_alternating_sum(A);
  FormalDivisor si = involute(s, formal_neg);
  // Not zero as a divisor, but fixed by the involution, so every odd function of it vanishes.
  EXPECT_FALSE(s.empty());
  EXPECT_EQ(s, si);
  EXPECT_EQ(s.degree(), 0);
}
