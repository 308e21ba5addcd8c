#include <gtest/gtest.h>

#include <random>

#include "elldilog/dilog.hpp"
#include "elldilog/kronecker.hpp"
#include "elldilog/theta.hpp"

using namespace elldilog;

namespace {

Curve c37() { return Curve(0, 0, -1, -1, 0); }
const Point kP(Rational(0), Rational(0));

const LatticeData& L37() {
  static const LatticeData L = periods(c37());
  return L;
}

cplx random_z(std::mt19937_64& rng, const LatticeData& L) {
  std::uniform_real_distribution<double> u(0.05, 0.95), a(-kPi, kPi);
  double lq = std::log(std::abs(L.q));
  for (;;) {
    cplx z = std::polar(std::exp(u(rng) * lq), a(rng));
    if (cdistance(z, 1.0, L) > 0.05) return z;
  }
}

constexpr double kCatalan = 0.915965594177219015;

}  // namespace

TEST(ComplexAnalytic, PeriodsOf37a) {
  const LatticeData& L = L37();
  EXPECT_NEAR(L.omega1.imag(), 0.0, 1e-15);
  EXPECT_NEAR(L.omega2.real(), 0.0, 1e-15);
  EXPECT_GT(L.tau.imag(), 0.0);
  // Three real roots: rectangular lattice, q real in (0, 1).
  EXPECT_NEAR(L.q.imag(), 0.0, 1e-15);
  EXPECT_GT(L.q.real(), 0.0);
  EXPECT_LT(L.q.real(), 1.0);
  EXPECT_EQ(L.g2, 4.0);
  EXPECT_EQ(L.g3, -1.0);
}

TEST(ComplexAnalytic, LatticeInvariantsMatchModel) {
  for (const Curve& c : {c37(), Curve(0, -1, 1, -10, -20), Curve(0, 0, 0, -1, 1)}) {
    LatticeData L = periods(c);
    auto g = lattice_invariants(L);
    EXPECT_NEAR(std::abs(g[0] - L.g2), 0.0, 1e-10 * std::max(1.0, std::fabs(L.g2)));
    EXPECT_NEAR(std::abs(g[1] - L.g3), 0.0, 1e-10 * std::max(1.0, std::fabs(L.g3)));
  }
}

TEST(ComplexAnalytic, InvariantsScaleWithLattice) {
  const LatticeData& L = L37();
  LatticeData M = lattice_from_periods(2.0 * L.omega1, 2.0 * L.omega2);
  auto g = lattice_invariants(L), h = lattice_invariants(M);
  EXPECT_NEAR(std::abs(h[0] * 16.0 - g[0]), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(h[1] * 64.0 - g[1]), 0.0, 1e-12);
}

TEST(ComplexAnalytic, DiscriminantFromEta) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.8, 1.6);
  for (int i = 0; i < 10; ++i) {
    LatticeData L = lattice_from_tau(cplx(re(rng), im(rng)));
    auto g = lattice_invariants(L);
    cplx d = g[0] * g[0] * g[0] - 27.0 * g[1] * g[1];
    EXPECT_LT(std::abs(d - L.delta) / std::abs(L.delta), 1e-9);
    EXPECT_LT(std::abs(L.delta - std::pow(kTwoPiI, 12) * std::pow(L.eta, 24)) / std::abs(L.delta), 1e-12);
  }
}

TEST(ComplexAnalytic, WeierstrassRoundTrip) {
  Curve c = c37();
  const LatticeData& L = L37();
  for (int k = 1; k <= 6; ++k) {
    Point Q = scalar_mul(c, k, kP);
    CPoint z = elliptic_log(c, Q, L);
    double X = Rational(Q.x() + c.b2() / 12).get_d(), Y = Rational(2 * Q.y() + c.a3()).get_d();
    EXPECT_NEAR(std::abs(wp_z(z.z, L) - X), 0.0, 1e-9 * std::max(1.0, std::fabs(X)));
    EXPECT_NEAR(std::abs(wp_prime_z(z.z, L) - Y), 0.0, 1e-9 * std::max(1.0, std::fabs(Y)));
    cplx w = wp_z(z.z, L), wd = wp_prime_z(z.z, L);
    EXPECT_NEAR(std::abs(wd * wd - (4.0 * w * w * w - L.g2 * w - L.g3)), 0.0, 1e-8 * std::max(1.0, std::abs(wd * wd)));
  }
}

TEST(ComplexAnalytic, EllipticLogIsAHomomorphism) {
  Curve c = c37();
  const LatticeData& L = L37();
  cplx z1 = elliptic_log(c, kP, L).z;
  // 21P and 29P once stalled the Newton stop test
  for (int k = -40; k <= 40; ++k) {
    if (k == 0) continue;
    cplx zk = elliptic_log(c, scalar_mul(c, k, kP), L).z;
    EXPECT_LT(cdistance(zk, std::pow(z1, k), L), 1e-9) << k;
  }
  Point A = scalar_mul(c, 2, kP), B = scalar_mul(c, -5, kP);
  cplx za = elliptic_log(c, A, L).z, zb = elliptic_log(c, B, L).z;
  EXPECT_LT(cdistance(elliptic_log(c, add(c, A, B), L).z, za * zb, L), 1e-9);
  EXPECT_EQ(elliptic_log(c, Point(), L).z, cplx(1.0));
}

TEST(ComplexAnalytic, BlochWigner) {
  EXPECT_NEAR(bloch_wigner(cplx(0, 1)), kCatalan, 1e-14);
  EXPECT_NEAR(bloch_wigner(cplx(0, -1)), -kCatalan, 1e-14);
  for (double x : {-3.0, -0.4, 0.2, 0.5, 0.9, 2.5}) EXPECT_NEAR(bloch_wigner(cplx(x)), 0.0, 1e-15);
  EXPECT_EQ(bloch_wigner(0.0), 0.0);
  EXPECT_EQ(bloch_wigner(1.0), 0.0);
  // Maximum value at exp(i pi/3): 1.0149416064096536...
  EXPECT_NEAR(bloch_wigner(std::polar(1.0, kPi / 3)), 1.0149416064096536, 1e-13);
}

TEST(ComplexAnalytic, BlochWignerFunctionalEquations) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 40; ++i) {
    cplx x(u(rng), u(rng)), y(u(rng), u(rng));
    double d = bloch_wigner(x);
    EXPECT_NEAR(bloch_wigner(std::conj(x)), -d, 1e-13);
    EXPECT_NEAR(bloch_wigner(1.0 / x), -d, 1e-13);
    EXPECT_NEAR(bloch_wigner(1.0 - x), -d, 1e-13);
    cplx xy = 1.0 - x * y;
    double five = bloch_wigner(x) + bloch_wigner(y) + bloch_wigner((1.0 - x) / xy) + bloch_wigner(xy) +
                  bloch_wigner((1.0 - y) / xy);
    EXPECT_NEAR(five, 0.0, 1e-12);
  }
}

TEST(ComplexAnalytic, EllipticDilogSymmetries) {
  const LatticeData& L = L37();
  EXPECT_NEAR(elliptic_dilog(cplx(-1.0), L), 0.0, 1e-15);
  EXPECT_THROW(elliptic_dilog(cplx(0.0), L), DomainError);
  std::mt19937_64 rng(6);
  for (int i = 0; i < 20; ++i) {
    cplx z = random_z(rng, L);
    double v = elliptic_dilog(z, L);
    EXPECT_NEAR(elliptic_dilog(1.0 / z, L), -v, 1e-12);
    EXPECT_NEAR(elliptic_dilog(L.q * z, L), v, 1e-12);
    // q real: conjugation flips the sign.
    EXPECT_NEAR(elliptic_dilog(std::conj(z), L), -v, 1e-12);
  }
}

TEST(ComplexAnalytic, DistributionRelation) {
  const LatticeData& L = L37();
  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    cplx z = random_z(rng, L);
    cplx r1 = std::sqrt(z), r2 = std::sqrt(L.q * z);
    double s = elliptic_dilog(r1, L) + elliptic_dilog(-r1, L) + elliptic_dilog(r2, L) + elliptic_dilog(-r2, L);
    EXPECT_NEAR(elliptic_dilog(z, L), 2.0 * s, 1e-11);
  }
}

TEST(ComplexAnalytic, JqSymmetries) {
  const LatticeData& L = L37();
  std::mt19937_64 rng(10);
  for (int i = 0; i < 20; ++i) {
    cplx z = random_z(rng, L);
    double v = jq(z, L);
    EXPECT_NEAR(jq(1.0 / z, L), -v, 1e-10);
    EXPECT_NEAR(jq(L.q * z, L), v, 1e-10);
    EXPECT_NEAR(jq(z / L.q, L), v, 1e-10);
  }
  EXPECT_THROW(jq(cplx(1.0), L), DomainError);
}

TEST(ComplexAnalytic, KroneckerK21) {
  const LatticeData& L = L37();
  std::mt19937_64 rng(12);
  for (int i = 0; i < 10; ++i) {
    cplx z = random_z(rng, L);
    cplx xi = std::log(z) / kTwoPiI;
    K21Value k = kronecker_k21(xi, L);
    EXPECT_LE(k.tail_estimate, 1e-10);
    EXPECT_NEAR(k.value.real(), elliptic_dilog(z, L), 1e-8);
    EXPECT_NEAR(k.value.imag(), -jq(z, L), 1e-8);
    EXPECT_LT(std::abs(kronecker_k21(-xi, L).value + k.value), 1e-9);
    // periodic in the lattice
    EXPECT_LT(std::abs(kronecker_k21(xi + 1.0 + L.tau, L).value - k.value), 1e-8);
  }
  EXPECT_THROW(kronecker_k21(0.3, L, 2.0), DomainError);
}

TEST(ComplexAnalytic, ThetaQuasiPeriodicity) {
  const LatticeData& L = L37();
  std::mt19937_64 rng(14);
  for (int i = 0; i < 20; ++i) {
    cplx u = random_z(rng, L);
    cplx t = theta_product(u, L.q);
    EXPECT_LT(std::abs(theta_product(u * L.q, L.q) + t / u), 1e-12 * std::max(1.0, std::abs(t / u)));
    cplx xi = std::log(u) / kTwoPiI;
    cplx a = theta(xi, L), b = theta(-xi, L);
    EXPECT_LT(std::abs(a * a - b * b), 1e-12 * std::max(1.0, std::abs(a * a)));
    EXPECT_LT(std::abs(a + b), 1e-12 * std::max(1.0, std::abs(a)));
  }
  EXPECT_NEAR(std::abs(theta(0.0, L)), 0.0, 1e-300);
}

TEST(ComplexAnalytic, ThetaDerivativeAtZero) {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.6, 2.0);
  for (int i = 0; i < 20; ++i) {
    LatticeData L = lattice_from_tau(cplx(re(rng), im(rng)));
    cplx d = theta_prime_zero(L);
    cplx e = kTwoPiI * L.eta * L.eta;
    EXPECT_LT(std::abs(d * d - e * e) / std::abs(e * e), 1e-12);
  }
}

TEST(ComplexAnalytic, ThetaIsogeny) {
  const LatticeData& L = L37();
  std::mt19937_64 rng(18);
  for (int n : {1, 2, 3, 5}) {
    for (int i = 0; i < 10; ++i) {
      cplx xi = std::log(random_z(rng, L)) / kTwoPiI;
      EXPECT_LT(theta_isogeny_check(n, xi, L), 1e-9) << n;
    }
  }
  EXPECT_THROW(theta_isogeny_check(0, 0.3, L), DomainError);
}

TEST(ComplexAnalytic, PairingValue) {
  const LatticeData& L = L37();
  std::mt19937_64 rng(20);
  for (int i = 0; i < 10; ++i) {
    cplx xi = std::log(random_z(rng, L)) / kTwoPiI;
    EXPECT_LT(std::abs(pairing_value(xi, L) - pairing_value(-xi, L)), 1e-12 * std::abs(pairing_value(xi, L)));
  }
  EXPECT_THROW(pairing_value(CPoint{}, L), DomainError);
}

TEST(ComplexAnalytic, DiscriminantExponentCalibration) {
  Curve c = c37();
  std::vector<std::pair<Point, Point>> pairs;
  for (int a = 1; a <= 4; ++a)
    for (int b = -4; b <= 4; ++b)
      if (b != 0 && b != a && b != -a) pairs.emplace_back(scalar_mul(c, a, kP), scalar_mul(c, b, kP));
  DeltaExponentFit fit = calibrate_delta_exponent(c, pairs, L37());
  EXPECT_DOUBLE_EQ(fit.exponent, -1.0 / 6.0);
  EXPECT_LT(fit.max_rel_error, 1e-9);
  for (const auto& [e, err] : fit.scan)
    if (e != fit.exponent) {
      EXPECT_GT(err, 1e-3);
    }
}

TEST(ComplexAnalytic, ClassicalWeierstrassDifference) {
  const LatticeData& L = L37();
  std::mt19937_64 rng(22);
  for (int i = 0; i < 20; ++i) {
    cplx a = std::log(random_z(rng, L)) / kTwoPiI, b = std::log(random_z(rng, L)) / kTwoPiI;
    cplx lhs = normalized_wp(a, L) - normalized_wp(b, L);
    cplx rhs = theta_difference(a, b, L);
    EXPECT_LT(std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)), 1e-10);
  }
  // 4 pi^2 eta^4 / w1^2 is a sixth root of the lattice discriminant g2^3 - 27 g3^2 = 37.
  EXPECT_NEAR(std::abs(std::pow(delta_sixth_root(L), 6) - 37.0), 0.0, 1e-9);
}

TEST(ComplexAnalytic, FourPointFormula) {
  Curve c = c37();
  const LatticeData& L = L37();
  cplx xiP = elliptic_log(c, kP, L).xi;
  std::array<long, 4> k = {-5, -4, -3, -2};
  std::array<Point, 4> pts;
  std::array<cplx, 4> xi;
  for (int i = 0; i < 4; ++i) {
    pts[i] = scalar_mul(c, k[i], kP);
    xi[i] = static_cast<double>(k[i]) * xiP;
  }
  auto terms = delta3_explicit(pts, c);
  ASSERT_EQ(terms.size(), 4u);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(terms[i].weight, make_rational(-1, 2));
    EXPECT_EQ(terms[i].base, pts[i]);
    cplx t = delta3_theta_term(xi, i, L);
    double s = terms[i].scalar.get_d();
    EXPECT_LT(std::abs(s - 1.0 / (t * t)) / std::fabs(s), 1e-9) << i;
  }
  // a1 + a2 + a3 + a4 = 0 makes a factor involve the identity.
  std::array<Point, 4> bad = {scalar_mul(c, 1, kP), scalar_mul(c, 2, kP), scalar_mul(c, -3, kP), Point()};
  EXPECT_THROW(delta3_explicit(bad, c), DomainError);
  std::array<Point, 4> rep = {pts[0], pts[0], pts[0], pts[0]};
  EXPECT_THROW(delta3_explicit(rep, c), DomainError);
}

namespace {

CDivisor principal(cplx a, cplx b, const LatticeData& L) {
  // (a) + (b) - (a + b) - (0)
  CDivisor d;
  d.add_term(cpoint_from_xi(a, L), 1);
  d.add_term(cpoint_from_xi(b, L), 1);
  d.add_term(cpoint_from_xi(a + b, L), -1);
  d.add_term(CPoint{}, -1);
  return d;
}

}  // namespace

TEST(ComplexAnalytic, RegulatorPairing) {
  const LatticeData& L = L37();
  CDivisor f = principal(cplx(0.21, 0.13), cplx(0.37, 0.4), L);
  CDivisor g = principal(cplx(0.61, 0.05), cplx(-0.14, 0.29), L);
  ASSERT_TRUE(is_principal(f, L));
  cplx fg = regulator_pairing(f, g, L), gf = regulator_pairing(g, f, L);
  EXPECT_LT(std::abs(fg + gf), 1e-8);
  EXPECT_EQ(regulator_pairing(CDivisor(), g, L), cplx(0.0));
  // (1/(i pi)) (L2q - i Jq) summed over f * g^-: Im = -L2q / pi, Re = -Jq / pi.
  double l = 0, j = 0;
  for (const auto& [a, n] : f)
    for (const auto& [b, m] : g) {
      cplx z = a.z / b.z;
      if (cdistance(z, 1.0, L) < 1e-13) continue;
      l += static_cast<double>(n * m) * elliptic_dilog(z, L);
      j += static_cast<double>(n * m) * jq(z, L);
    }
  EXPECT_NEAR(fg.imag(), -l / kPi, 1e-8);
  EXPECT_NEAR(fg.real(), -j / kPi, 1e-8);
  CDivisor np;
  np.add_term(cpoint_from_xi(cplx(0.2, 0.1), L), 1);
  np.add_term(CPoint{}, -1);
  EXPECT_FALSE(is_principal(np, L));
  EXPECT_THROW(regulator_pairing(np, g, L), DomainError);
}
