#ifndef ELLDILOG_THETA_HPP
#define ELLDILOG_THETA_HPP

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "curve.hpp"
#include "errors.hpp"
#include "lattice.hpp"

namespace elldilog {

/// prod_{j>=0} (1 - q^j u) prod_{j>0} (1 - q^j / u).
inline cplx theta_product(cplx u, cplx q) {
  cplx v = 1.0 - u;
  cplx qj = q;
  double mu = std::max(std::abs(u), 1.0 / std::abs(u));
  for (int j = 1; j < 5000; ++j) {
    v *= (1.0 - qj * u) * (1.0 - qj / u);
    if (std::abs(qj) * mu < 1e-18) break;
    qj *= q;
  }
  return v;
}

/// theta(xi; tau) = q^(1/12) z^(-1/2) prod(1 - q^j z) prod(1 - q^j / z), z = exp(2 pi i xi),
/// with z^(-1/2) := exp(-pi i xi).
inline cplx theta(cplx xi, cplx tau) {
  cplx q = std::exp(kTwoPiI * tau);
  cplx z = std::exp(kTwoPiI * xi);
  return std::exp(kTwoPiI * tau / 12.0) * std::exp(-0.5 * kTwoPiI * xi) * theta_product(z, q);
}

inline cplx theta(cplx xi, const LatticeData& L) { return theta(xi, L.tau); }
inline cplx theta(const CPoint& a, const LatticeData& L) { return theta(a.xi, L.tau); }

/// theta'(0) from the trapezoid rule for the Cauchy integral on |xi| = r.
inline cplx theta_prime_zero(const LatticeData& L, double r = 0.1, int nodes = 48) {
  cplx s = 0.0;
  for (int k = 0; k < nodes; ++k) {
    cplx w = std::polar(1.0, 2.0 * kPi * k / nodes);
    s += theta(r * w, L) / w;
  }
  return s / (r * static_cast<double>(nodes));
}

/// Analytic value -theta(alpha)^(-2) of <(a) - (0), (a) - (0)>.
inline cplx pairing_value(cplx xi, const LatticeData& L) {
  cplx t = theta(xi, L);
  if (std::abs(t) < 1e-300) throw DomainError("pairing value at the identity");
  return -1.0 / (t * t);
}

inline cplx pairing_value(const CPoint& a, const LatticeData& L) {
  if (cdistance(a.z, 1.0, L) < 1e-13) throw DomainError("pairing value at the identity");
  return pairing_value(a.xi, L);
}

/// Residual of the isogeny identity (prod theta_q(t q^k) / (prod theta_{q^n}(t q^k))^n)^2 = 1.
inline double theta_isogeny_check(int n, cplx t_xi, const LatticeData& L) {
  if (n < 1) throw DomainError("isogeny degree must be positive");
  cplx num = 1.0, den = 1.0;
  for (int k = 0; k < n; ++k) {
    cplx xi = t_xi + static_cast<double>(k) * L.tau;
    num *= theta(xi, L.tau);
    den *= theta(xi, static_cast<double>(n) * L.tau);
  }
  if (std::abs(den) < 1e-280) throw DomainError("theta product vanishes");
  cplx r = num / std::pow(den, n);
  return std::abs(r * r - 1.0);
}

/// 4 pi^2 eta^4 / w1^2, a sixth root of the discriminant of the period lattice.
inline cplx delta_sixth_root(const LatticeData& L) {
  return 4.0 * kPi * kPi * std::pow(L.eta, 4) / (L.omega1 * L.omega1);
}

/// Normalized coordinate wp_tau(xi) / (4 pi^2 eta^4) on Z + Z tau.
inline cplx normalized_wp(cplx xi, const LatticeData& L) {
  cplx z = std::exp(kTwoPiI * xi);
  return L.omega1 * L.omega1 * wp_z(z, L) / (4.0 * kPi * kPi * std::pow(L.eta, 4));
}

/// theta(a+b) theta(a-b) / (theta(a)^2 theta(b)^2).
inline cplx theta_difference(cplx a, cplx b, const LatticeData& L) {
  cplx ta = theta(a, L), tb = theta(b, L);
  return theta(a + b, L) * theta(a - b, L) / (ta * ta * tb * tb);
}

/// pv(a+b) pv(a-b) / (pv(a)^2 pv(b)^2).
inline cplx pairing_cross_ratio(cplx a, cplx b, const LatticeData& L) {
  cplx pa = pairing_value(a, L), pb = pairing_value(b, L);
  return pairing_value(a + b, L) * pairing_value(a - b, L) / (pa * pa * pb * pb);
}

/// (D^e (X(a) - X(b)))^(-2) for real discriminant D.
inline cplx propo_rhs(double disc, double exponent, double xa, double xb) {
  cplx d = std::pow(cplx(disc), exponent);
  cplx v = d * (xa - xb);
  return 1.0 / (v * v);
}

struct DeltaExponentFit {
  double exponent = 0;
  double max_rel_error = 0;
  std::vector<std::pair<double, double>> scan;  // (exponent, max relative error)
};

/// Picks the power of the discriminant that matches |pv-cross-ratio| = |(D^e (x(a)-x(b)))^-2|.
inline DeltaExponentFit calibrate_delta_exponent(const Curve& c, const std::vector<std::pair<Point, Point>>& pairs,
                                                 const LatticeData& L) {
  const double candidates[] = {0.0, -1.0 / 12, -1.0 / 6, -1.0 / 4, -1.0 / 3};
  double disc = std::fabs(c.discriminant().get_d());
  DeltaExponentFit fit;
  fit.max_rel_error = 1e300;
  std::vector<std::array<double, 3>> data;  // |lhs|, xa, xb
  for (const auto& [a, b] : pairs) {
    CPoint ca = elliptic_log(c, a, L), cb = elliptic_log(c, b, L);
    cplx lhs = pairing_cross_ratio(ca.xi, cb.xi, L);
    data.push_back({std::abs(lhs), Rational(a.x() + c.b2() / 12).get_d(), Rational(b.x() + c.b2() / 12).get_d()});
  }
  for (double e : candidates) {
    double worst = 0;
    for (const auto& d : data) {
      double rhs = std::abs(propo_rhs(disc, e, d[1], d[2]));
      worst = std::max(worst, std::fabs(d[0] - rhs) / rhs);
    }
    fit.scan.emplace_back(e, worst);
    if (worst < fit.max_rel_error) {
      fit.max_rel_error = worst;
      fit.exponent = e;
    }
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Explicit four-point formula.

struct Delta3Term {
  Rational scalar;  // element of Q*
  Point base;       // a_i
  Rational weight;  // -1/2
};

namespace detail {
inline Rational xdiff(const Curve& c, const Point& a, const Point& b) {
  if (a.is_infinity() || b.is_infinity()) throw DomainError("degenerate configuration: a factor involves the identity");
  (void)c;
  Rational d = a.x() - b.x();
  if (d == 0) throw DomainError("degenerate configuration: vanishing factor");
  return d;
}
}  // namespace detail

/// The four (scalar, a_i) terms of the explicit formula for (a1)-(0) * ... * (a4)-(0).
inline std::vector<Delta3Term> delta3_explicit(const std::array<Point, 4>& a, const Curve& c) {
  for (const auto& p : a) detail::require_on_curve(c, p);
  std::vector<Delta3Term> out;
  for (int i = 0; i < 4; ++i) {
    const Point& a1 = a[i];
    const Point& a2 = a[(i + 1) % 4];
    const Point& a3 = a[(i + 2) % 4];
    const Point& a4 = a[(i + 3) % 4];
    Point a12 = add(c, a1, a2), a13 = add(c, a1, a3), a14 = add(c, a1, a4);
    Point a34m = sub(c, a3, a4);
    Point a123 = add(c, a12, a3), a124 = add(c, a12, a4);
    Rational num = detail::xdiff(c, a12, a34m) * detail::xdiff(c, a13, a4) * detail::xdiff(c, a14, a3);
    Rational den = detail::xdiff(c, a1, a34m) * detail::xdiff(c, a123, a4) * detail::xdiff(c, a124, a3);
    out.push_back(Delta3Term{num / den, a1, Rational(-1, 2)});
  }
  return out;
}

/// Theta form of the i-th scalar, built from additive coordinates xi_1..xi_4.
inline cplx delta3_theta_term(const std::array<cplx, 4>& xi, int i, const LatticeData& L) {
  cplx a1 = xi[i], a2 = xi[(i + 1) % 4], a3 = xi[(i + 2) % 4], a4 = xi[(i + 3) % 4];
  cplx num = theta(a1 + a2 + a3 + a4, L) * theta(a1 + a2, L) * theta(a1 + a3, L) * theta(a1 + a4, L);
  cplx den = theta(a1 + a2 + a3, L) * theta(a1 + a2 + a4, L) * theta(a1 + a3 + a4, L) * theta(a1, L);
  return num / den;
}

}  // namespace elldilog

#endif  // ELLDILOG_THETA_HPP
