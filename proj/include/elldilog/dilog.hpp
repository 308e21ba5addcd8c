#ifndef ELLDILOG_DILOG_HPP
#define ELLDILOG_DILOG_HPP

#include <array>
#include <cmath>
#include <complex>

#include "divisor.hpp"
#include "errors.hpp"
#include "lattice.hpp"

namespace elldilog {

namespace detail {

// B_{2k} / (2k+1)! for k = 1..
inline constexpr std::array<double, 15> kBernoulliOverFact = {
    1.0 / 36.0,
    -1.0 / 3600.0,
    1.0 / 211680.0,
    -1.0 / 10886400.0,
    1.0 / 526901760.0,
    -4.064761645144226e-11,
    8.921691020456453e-13,
    -1.993929586072108e-14,
    4.518980029619918e-16,
    -1.035651761218125e-17,
    2.395218621026186e-19,
    -5.581785874325009e-21,
    1.309150755418321e-22,
    -3.087419802426740e-24,
    7.315975652702203e-26,
};

// Li_2(w) for |w| <= 1, Re w <= 1/2 via u = -log(1 - w):
// Li_2 = u - u^2/4 + sum_k B_{2k} u^{2k+1} / (2k+1)!.
inline cplx li2_reduced(cplx w) {
  cplx u = -std::log(1.0 - w);
  cplx u2 = u * u;
  cplx s = u - u2 / 4.0;
  cplx p = u * u2;
  for (double c : kBernoulliOverFact) {
    cplx t = c * p;
    s += t;
    if (std::abs(t) < 1e-18 * std::abs(s)) break;
    p *= u2;
  }
  return s;
}

}  // namespace detail

/// Bloch-Wigner function Im Li_2(z) + arg(1 - z) log|z|; 0 at z = 0 and z = 1.
inline double bloch_wigner(cplx z) {
  if (z == 0.0 || z == 1.0) return 0.0;
  double sign = 1.0;
  if (std::abs(z) > 1.0) {
    z = 1.0 / z;
    sign = -sign;
  }
  if (z.real() > 0.5) {
    z = 1.0 - z;
    sign = -sign;
  }
  if (z == 0.0) return 0.0;
  double v = detail::li2_reduced(z).imag() + std::arg(1.0 - z) * std::log(std::abs(z));
  return sign * v;
}

/// Sum over n in Z of the Bloch-Wigner function at q^n z.
inline double elliptic_dilog(cplx z, const LatticeData& L) {
  if (z == 0.0) throw DomainError("elliptic dilogarithm at z = 0");
  z = normalize_z(z, L);
  double s = bloch_wigner(z);
  cplx qn = L.q;
  double mz = 1.0 / std::abs(z);  // |z| <= 1 after normalization
  for (int n = 1; n < 2000; ++n) {
    // D(q^{-n} z) = -D(q^n / z)
    double t = bloch_wigner(qn * z) - bloch_wigner(qn / z);
    s += t;
    double bound = std::abs(qn) * mz;
    if (bound * (1.0 + std::fabs(std::log(bound))) < 1e-18) break;
    qn *= L.q;
  }
  return s;
}

inline double elliptic_dilog(const CPoint& p, const LatticeData& L) { return elliptic_dilog(p.z, L); }

using CDivisor = Divisor<CPoint>;

inline double elliptic_dilog(const CDivisor& d, const LatticeData& L) {
  double s = 0.0;
  for (const auto& [p, n] : d) s += static_cast<double>(n) * elliptic_dilog(p.z, L);
  return s;
}

/// Linear extension to divisors of rational points, through the elliptic logarithm.
inline double elliptic_dilog(const Curve& c, const PointDivisor& d, const LatticeData& L) {
  double s = 0.0;
  for (const auto& [p, n] : d) {
    if (p.is_infinity()) continue;  // z = 1 contributes 0
    s += static_cast<double>(n) * elliptic_dilog(elliptic_log(c, p, L).z, L);
  }
  return s;
}

/// log|z| log|1 - z|.
inline double jfun(cplx z) { return std::log(std::abs(z)) * std::log(std::abs(1.0 - z)); }

/// Regularized sum_{n>=0} J(q^n z) - sum_{n>=1} J(q^n / z) + (1/3) log^2|q| B_3(log|z| / log|q|).
inline double jq(cplx z, const LatticeData& L) {
  if (z == 0.0) throw DomainError("J_q at z = 0");
  if (cdistance(z, 1.0, L) < 1e-14) throw DomainError("J_q is singular on q^Z");
  double lq = std::log(std::abs(L.q));
  double s = 0.0;
  cplx w = z;
  double mz = std::max(std::abs(z), 1.0 / std::abs(z));
  for (int n = 0; n < 4000; ++n) {
    s += jfun(w);
    if (n > 0 && std::abs(w) < 1e-19) break;
    w *= L.q;
    (void)mz;
  }
  w = L.q / z;
  for (int n = 1; n < 4000; ++n) {
    s -= jfun(w);
    if (std::abs(w) < 1e-19) break;
    w *= L.q;
  }
  double x = std::log(std::abs(z)) / lq;
  double b3 = x * x * x - 1.5 * x * x + 0.5 * x;
  return s + lq * lq * b3 / 3.0;
}

inline double jq(const CPoint& p, const LatticeData& L) { return jq(p.z, L); }

}  // namespace elldilog

#endif  // ELLDILOG_DILOG_HPP
