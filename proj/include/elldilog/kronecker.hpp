#ifndef ELLDILOG_KRONECKER_HPP
#define ELLDILOG_KRONECKER_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "dilog.hpp"
#include "divisor.hpp"
#include "errors.hpp"
#include "lattice.hpp"

namespace elldilog {

struct K21Value {
  cplx value;
  double tail_estimate = 0;  // |S(R) - S(R/2)|
  long terms = 0;
  double radius = 0;
};

namespace detail {

// Smooth step: 1 on [0, 1/2], 0 on [1, inf), C-infinity in between.
inline double cutoff(double t) {
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  double s = (t - 0.5) / 0.5;
  auto f = [](double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; };
  double a = f(1.0 - s), b = f(s);
  return a / (a + b);
}

// Smoothly truncated (Im tau)^2/pi sum over gamma = m + n tau != 0 of
// chi(xi, gamma) / (gamma^2 conj(gamma)), chi = exp(2 pi i (conj(xi) gamma - xi conj(gamma)) / (tau - conj(tau))).
inline cplx k21_sum(cplx xi, cplx tau, double R, long* count) {
  double it = tau.imag();
  cplx denom = tau - std::conj(tau);
  long nmax = static_cast<long>(std::ceil(R / it)) + 1;
  // Accumulate per row n in increasing |n|, each row summed in increasing |m|.
  cplx total = 0.0;
  long cnt = 0;
  for (long n = -nmax; n <= nmax; ++n) {
    double y = n * it;
    if (std::fabs(y) >= R) continue;
    double xc = -n * tau.real();
    double half = std::sqrt(R * R - y * y);
    long mlo = static_cast<long>(std::floor(xc - half)) - 1, mhi = static_cast<long>(std::ceil(xc + half)) + 1;
    cplx row = 0.0;
    for (long m = mlo; m <= mhi; ++m) {
      if (m == 0 && n == 0) continue;
      cplx g = static_cast<double>(m) + static_cast<double>(n) * tau;
      double ag = std::abs(g);
      double w = cutoff(ag / R);
      if (w == 0.0) continue;
      cplx chi = std::exp(kTwoPiI * (std::conj(xi) * g - xi * std::conj(g)) / denom);
      row += w * chi / (g * g * std::conj(g));
      ++cnt;
    }
    total += row;
  }
  if (count) *count = cnt;
  return it * it / kPi * total;
}

}  // namespace detail

/// Eisenstein-Kronecker series K_{2,1}(xi; tau) with smooth truncation at radius R.
/// R is doubled (up to max_radius) until |S(R) - S(R/2)| <= target.
inline K21Value kronecker_k21(cplx xi, const LatticeData& L, double R = 100.0, double target = 1e-10,
                              double max_radius = 1600.0) {
  if (R < 4.0) throw DomainError("truncation radius too small");
  K21Value out;
  cplx half = detail::k21_sum(xi, L.tau, R / 2.0, nullptr);
  for (;;) {
    out.value = detail::k21_sum(xi, L.tau, R, &out.terms);
    out.tail_estimate = std::abs(out.value - half);
    out.radius = R;
    if (out.tail_estimate <= target || 2.0 * R > max_radius) break;
    half = out.value;
    R *= 2.0;
  }
  return out;
}

inline K21Value kronecker_k21(const CPoint& p, const LatticeData& L, double R = 100.0, double target = 1e-10) {
  return kronecker_k21(p.xi, L, R, target);
}

/// Checks degree 0 and Abel-Jacobi sum in the lattice.
inline bool is_principal(const CDivisor& d, const LatticeData& L, double tol = 1e-8) {
  if (d.degree() != 0) return false;
  cplx s = 0.0;
  for (const auto& [p, n] : d) s += static_cast<double>(n) * p.xi;
  return cdistance(std::exp(kTwoPiI * s), 1.0, L) < tol;
}

/// (1 / (i pi)) sum_{a,b} n_a m_b K_{2,1}(a - b).
inline cplx regulator_pairing(const CDivisor& f, const CDivisor& g, const LatticeData& L, double R = 100.0) {
  if (f.empty() || g.empty()) return 0.0;
  if (!is_principal(f, L) || !is_principal(g, L)) throw DomainError("regulator pairing needs principal divisors");
  cplx s = 0.0;
  for (const auto& [a, n] : f)
    for (const auto& [b, m] : g) {
      if (cdistance(a.z, b.z, L) < 1e-13) continue;  // K_{2,1}(0) = 0 by antisymmetry
      s += static_cast<double>(n * m) * kronecker_k21(a.xi - b.xi, L, R).value;
    }
  return s / cplx(0.0, kPi);
}

inline CDivisor cconvolve(const CDivisor& a, const CDivisor& b, const LatticeData& L) {
  return convolve(a, b, [&L](const CPoint& x, const CPoint& y) { return cadd(x, y, L); });
}

inline CDivisor cinvolute(const CDivisor& a, const LatticeData& L) {
  return involute(a, [&L](const CPoint& x) { return cneg(x, L); });
}

}  // namespace elldilog

#endif  // ELLDILOG_KRONECKER_HPP
