#ifndef ELLDILOG_LATTICE_HPP
#define ELLDILOG_LATTICE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "curve.hpp"
#include "errors.hpp"

namespace elldilog {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline const cplx kTwoPiI{0.0, 2.0 * std::numbers::pi};

/// Period lattice Z w1 + Z w2 of Y^2 = 4X^3 - g2 X - g3 with w1 real, tau = w2/w1.
struct LatticeData {
  cplx omega1;
  cplx omega2;
  cplx tau;
  cplx q;
  cplx eta;    // eta(tau) = q^(1/24) prod (1 - q^n)
  cplx delta;  // Delta(tau) = (2 pi i)^12 eta^24
  double g2 = 0, g3 = 0;
};

namespace detail {

inline double agm(double a, double b) {
  for (int i = 0; i < 100; ++i) {
    double an = 0.5 * (a + b), bn = std::sqrt(a * b);
    if (std::fabs(an - bn) <= 4e-16 * std::fabs(an) || (an == a && bn == b)) return an;
    a = an;
    b = bn;
  }
  throw PrecisionError("AGM did not converge");
}

// Real roots of 4x^3 - g2 x - g3, sorted descending (1 or 3 entries).
inline std::vector<double> short_roots(double g2, double g3) {
  // x^3 + p x + r with p = -g2/4, r = -g3/4
  double p = -g2 / 4.0, r = -g3 / 4.0;
  double disc = -(4 * p * p * p + 27 * r * r);
  std::vector<double> out;
  if (disc > 0) {
    double m = 2.0 * std::sqrt(-p / 3.0);
    double th = std::acos(3.0 * r / (p * m)) / 3.0;
    for (int k = 0; k < 3; ++k) out.push_back(m * std::cos(th - 2.0 * kPi * k / 3.0));
  } else {
    double s = std::sqrt(-disc / 108.0);
    out.push_back(std::cbrt(-r / 2.0 + s) + std::cbrt(-r / 2.0 - s));
  }
  // One Newton polish per root.
  for (double& x : out) {
    for (int i = 0; i < 3; ++i) {
      double f = 4 * x * x * x - g2 * x - g3, df = 12 * x * x - g2;
      if (df != 0) x -= f / df;
    }
  }
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

}  // namespace detail

inline cplx eta_function(cplx tau) {
  cplx q = std::exp(kTwoPiI * tau);
  cplx v = std::exp(kTwoPiI * tau / 24.0);
  cplx qn = q;
  for (int n = 1; n < 400 && std::abs(qn) > 1e-19; ++n) {
    v *= 1.0 - qn;
    qn *= q;
  }
  return v;
}

inline LatticeData lattice_from_periods(cplx w1, cplx w2) {
  LatticeData L;
  L.omega1 = w1;
  L.omega2 = w2;
  L.tau = w2 / w1;
  if (L.tau.imag() < 0) {
    L.omega2 = -w2;
    L.tau = -L.tau;
  }
  if (L.tau.imag() <= 0) throw DomainError("degenerate lattice");
  L.q = std::exp(kTwoPiI * L.tau);
  L.eta = eta_function(L.tau);
  L.delta = std::pow(kTwoPiI, 12) * std::pow(L.eta, 24);
  return L;
}

/// Lattice of Z + Z tau itself (omega1 = 1).
inline LatticeData lattice_from_tau(cplx tau) { return lattice_from_periods(1.0, tau); }

/// Periods of the curve via the AGM, for dx/(2y + a1 x + a3).
inline LatticeData periods(const Curve& c) {
  ShortForm sf = to_short_form(c);
  double g2 = sf.g2.get_d(), g3 = sf.g3.get_d();
  auto e = detail::short_roots(g2, g3);
  cplx w1, w2;
  if (c.discriminant() > 0) {
    if (e.size() != 3) throw PrecisionError("expected three real roots");
    double e1 = e[0], e2 = e[1], e3 = e[2];
    w1 = kPi / detail::agm(std::sqrt(e1 - e3), std::sqrt(e1 - e2));
    w2 = cplx(0.0, kPi / detail::agm(std::sqrt(e1 - e3), std::sqrt(e2 - e3)));
  } else {
    double e1 = e[0];
    double beta = std::sqrt(3.0 * e1 * e1 - g2 / 4.0);
    double alpha = 3.0 * e1;
    double r1 = 2.0 * kPi / detail::agm(2.0 * std::sqrt(beta), std::sqrt(2.0 * beta + alpha));
    w1 = r1;
    w2 = cplx(-r1 / 2.0, kPi / detail::agm(2.0 * std::sqrt(beta), std::sqrt(2.0 * beta - alpha)));
  }
  LatticeData L = lattice_from_periods(w1, w2);
  L.g2 = g2;
  L.g3 = g3;
  return L;
}

/// g2, g3 of the lattice from Eisenstein series: g2 = (2pi/w1)^4 E4/12, g3 = (2pi/w1)^6 E6/216.
inline std::array<cplx, 2> lattice_invariants(const LatticeData& L) {
  cplx e4 = 1.0, e6 = 1.0;
  cplx qn = L.q;
  for (int n = 1; n < 400 && std::abs(qn) > 1e-20; ++n) {
    double s3 = 0, s5 = 0;
    for (int d = 1; d <= n; ++d)
      if (n % d == 0) {
        s3 += std::pow(d, 3);
        s5 += std::pow(d, 5);
      }
    e4 += 240.0 * s3 * qn;
    e6 -= 504.0 * s5 * qn;
    qn *= L.q;
  }
  cplx k = 2.0 * kPi / L.omega1;
  return {std::pow(k, 4) * e4 / 12.0, std::pow(k, 6) * e6 / 216.0};
}

// ---------------------------------------------------------------------------
// Multiplicative model C* / q^Z.

/// Point of C*/q^Z: z with |q| < |z| <= 1 and xi = log(z) / (2 pi i).
struct CPoint {
  cplx z{1.0, 0.0};
  cplx xi{0.0, 0.0};

  friend bool operator<(const CPoint& a, const CPoint& b) {
    if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
    return a.z.imag() < b.z.imag();
  }
  friend bool operator==(const CPoint& a, const CPoint& b) { return a.z == b.z; }
};

/// Moves z into the fundamental annulus |q| < |z| <= 1.
inline cplx normalize_z(cplx z, const LatticeData& L) {
  if (z == 0.0) throw DomainError("z = 0 is not in C*");
  double aq = std::abs(L.q);
  double lz = std::log(std::abs(z)), lq = std::log(aq);
  // |z q^k| = |z| |q|^k; choose k with the result in (|q|, 1].
  long k = static_cast<long>(std::floor(lz / -lq));
  if (k != 0) z *= std::pow(L.q, static_cast<double>(k));
  for (int i = 0; i < 4 && std::abs(z) > 1.0 + 1e-15; ++i) z *= L.q;
  for (int i = 0; i < 4 && std::abs(z) <= aq; ++i) z /= L.q;
  return z;
}

inline CPoint cpoint_from_z(cplx z, const LatticeData& L) {
  CPoint P;
  P.z = normalize_z(z, L);
  P.xi = std::log(P.z) / kTwoPiI;
  return P;
}

inline CPoint cpoint_from_xi(cplx xi, const LatticeData& L) { return cpoint_from_z(std::exp(kTwoPiI * xi), L); }

inline CPoint cadd(const CPoint& a, const CPoint& b, const LatticeData& L) { return cpoint_from_z(a.z * b.z, L); }
inline CPoint cneg(const CPoint& a, const LatticeData& L) { return cpoint_from_z(1.0 / a.z, L); }

/// Distance of z from w in C*/q^Z, measured on xi modulo the lattice Z + Z tau.
inline double cdistance(cplx z, cplx w, const LatticeData& L) {
  cplx d = std::log(z / w) / kTwoPiI;
  double n = std::round(d.imag() / L.tau.imag());
  d -= n * L.tau;
  d -= std::round(d.real());
  double best = std::abs(d);
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) best = std::min(best, std::abs(d + cplx(a) + static_cast<double>(b) * L.tau));
  return best;
}

// Weierstrass functions for the lattice Z w1 + Z w2 in the variable z = exp(2 pi i u / w1).

inline cplx wp_z(cplx z, const LatticeData& L) {
  cplx k = kTwoPiI / L.omega1;
  cplx s = 1.0 / 12.0 + z / ((1.0 - z) * (1.0 - z));
  cplx qn = L.q;
  double mz = std::max(std::abs(z), 1.0 / std::abs(z));
  for (int n = 1; n < 400; ++n) {
    cplx a = qn * z, b = qn / z;
    s += a / ((1.0 - a) * (1.0 - a)) + b / ((1.0 - b) * (1.0 - b)) - 2.0 * qn / ((1.0 - qn) * (1.0 - qn));
    if (std::abs(qn) * mz < 1e-19) break;
    qn *= L.q;
  }
  return k * k * s;
}

inline cplx wp_prime_z(cplx z, const LatticeData& L) {
  cplx k = kTwoPiI / L.omega1;
  auto term = [](cplx w) { return w * (1.0 + w) / ((1.0 - w) * (1.0 - w) * (1.0 - w)); };
  cplx s = term(z);
  cplx qn = L.q;
  double mz = std::max(std::abs(z), 1.0 / std::abs(z));
  for (int n = 1; n < 400; ++n) {
    // q^{-n} z term written through w -> 1/w antisymmetry
    s += term(qn * z) - term(qn / z);
    if (std::abs(qn) * mz < 1e-19) break;
    qn *= L.q;
  }
  return k * k * k * s;
}

/// Elliptic logarithm of the short-form point (X, Y), Y^2 = 4X^3 - g2 X - g3.
inline CPoint elliptic_log_short(cplx X, cplx Y, const LatticeData& L) {
  const int G1 = 48, G2 = 24;
  cplx k = kTwoPiI / L.omega1;
  // Seeds ranked by |wp - X| on a grid avoiding the pole.
  std::vector<std::pair<double, cplx>> seeds;
  for (int a = 0; a < G1; ++a)
    for (int b = 0; b < G2; ++b) {
      cplx xi = (a + 0.5) / G1 + (b + 0.5) / G2 * L.tau;
      cplx z = std::exp(kTwoPiI * xi);
      seeds.emplace_back(std::abs(wp_z(z, L) - X), z);
    }
  std::sort(seeds.begin(), seeds.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  double scale = std::max({1.0, std::abs(X), std::abs(Y)});
  for (std::size_t s = 0; s < std::min<std::size_t>(seeds.size(), 8); ++s) {
    cplx z = seeds[s].second;
    // the step stalls at a few ulps of |z|; the residual test below decides
    for (int it = 0; it < 100; ++it) {
      cplx f = wp_z(z, L) - X;
      cplx df = wp_prime_z(z, L) / (k * z);
      if (df == 0.0) break;
      cplx step = f / df;
      z -= step;
      z = normalize_z(z, L);
      if (std::abs(step) < 1e-13 * std::abs(z)) break;
    }
    // Choose between z and 1/z (same wp, opposite wp') by matching Y.
    cplx zi = 1.0 / z;
    if (std::abs(wp_prime_z(zi, L) - Y) < std::abs(wp_prime_z(z, L) - Y)) z = zi;
    double res = std::abs(wp_z(z, L) - X) + std::abs(wp_prime_z(z, L) - Y);
    if (res < 1e-9 * scale) return cpoint_from_z(z, L);
  }
  throw PrecisionError("elliptic logarithm: Newton iteration failed from all seeds");
}

/// Elliptic logarithm of a rational point (X = x + b2/12, Y = 2y + a1 x + a3).
inline CPoint elliptic_log(const Curve& c, const Point& P, const LatticeData& L) {
  if (P.is_infinity()) return CPoint{};
  Rational X = P.x() + c.b2() / 12;
  Rational Y = 2 * P.y() + c.a1() * P.x() + c.a3();
  return elliptic_log_short(cplx(X.get_d(), 0.0), cplx(Y.get_d(), 0.0), L);
}

/// Elliptic logarithm of a complex point (x, y) of the long model.
inline CPoint elliptic_log(const Curve& c, cplx x, cplx y, const LatticeData& L) {
  cplx X = x + c.b2().get_d() / 12.0;
  cplx Y = 2.0 * y + c.a1().get_d() * x + c.a3().get_d();
  return elliptic_log_short(X, Y, L);
}

}  // namespace elldilog

#endif  // ELLDILOG_LATTICE_HPP
