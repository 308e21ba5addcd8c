#ifndef ELLDILOG_LINE_RELATION_HPP
#define ELLDILOG_LINE_RELATION_HPP

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "curve.hpp"
#include "dilog.hpp"
#include "divisor.hpp"
#include "errors.hpp"
#include "lattice.hpp"

namespace elldilog {

/// Line y = slope (x - px) + py through the point (px, py); vertical lines are not representable.
struct Line {
  cplx px, py, slope;
};

namespace detail {

// Roots of x^3 + b x^2 + c x + d by Durand-Kerner, polished by Newton.
inline std::array<cplx, 3> monic_cubic_roots(cplx b, cplx c, cplx d) {
  std::array<cplx, 3> r = {cplx(0.4, 0.9), cplx(0.4, 0.9) * cplx(0.4, 0.9),
                           cplx(0.4, 0.9) * cplx(0.4, 0.9) * cplx(0.4, 0.9)};
  double scale = 1.0 + std::max({std::abs(b), std::sqrt(std::abs(c)), std::cbrt(std::abs(d))});
  for (auto& x : r) x *= scale;
  auto f = [&](cplx x) { return ((x + b) * x + c) * x + d; };
  for (int it = 0; it < 500; ++it) {
    double moved = 0;
    for (int i = 0; i < 3; ++i) {
      cplx den = 1.0;
      for (int j = 0; j < 3; ++j)
        if (j != i) den *= r[i] - r[j];
      if (den == 0.0) den = 1e-12;
      cplx step = f(r[i]) / den;
      r[i] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < 1e-16 * scale) break;
  }
  for (auto& x : r) {
    for (int i = 0; i < 3; ++i) {
      cplx df = (3.0 * x + 2.0 * b) * x + c;
      if (std::abs(df) < 1e-14 * scale * scale) break;
      x -= f(x) / df;
    }
  }
  return r;
}

}  // namespace detail

/// The three intersection points (with multiplicity) of the line with the curve.
inline std::array<std::array<cplx, 2>, 3> line_cubic_points(const Curve& c, const Line& l, double tol = 1e-10) {
  double a1 = c.a1().get_d(), a2 = c.a2().get_d(), a3 = c.a3().get_d(), a4 = c.a4().get_d(), a6 = c.a6().get_d();
  cplx s = l.slope, k = l.py - s * l.px;
  // (s x + k)^2 + a1 x (s x + k) + a3 (s x + k) = x^3 + a2 x^2 + a4 x + a6
  cplx b = a2 - s * s - a1 * s;
  cplx cc = a4 - 2.0 * s * k - a1 * k - a3 * s;
  cplx d = a6 - k * k - a3 * k;
  auto xs = detail::monic_cubic_roots(b, cc, d);
  std::array<std::array<cplx, 2>, 3> out;
  for (int i = 0; i < 3; ++i) {
    cplx x = xs[i], y = s * x + k;
    cplx res = y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + a6);
    double sc = 1.0 + std::pow(std::abs(x), 3);
    if (std::abs(res) > tol * sc) throw PrecisionError("line/cubic intersection residual above tolerance");
    out[i] = {x, y};
  }
  return out;
}

/// A = (P1) + (P2) + (P3) for the line's intersection points, as points of C*/q^Z.
inline CDivisor line_divisor(const Curve& c, const Line& l, const LatticeData& L) {
  CDivisor d;
  for (const auto& pt : line_cubic_points(c, l)) d.add_term(elliptic_log(c, pt[0], pt[1], L), 1);
  return d;
}

/// A1 * A2^- + A2 * A3^- + A3 * A1^- for any point type with group law and negation.
template <class P, class Less, class AddFn, class NegFn>
Divisor<P, Less> line_relation_generic(const Divisor<P, Less>& A1, const Divisor<P, Less>& A2,
                                       const Divisor<P, Less>& A3, AddFn&& addfn, NegFn&& negfn) {
  Divisor<P, Less> out = convolve(A1, involute(A2, negfn), addfn);
  out += convolve(A2, involute(A3, negfn), addfn);
  out += convolve(A3, involute(A1, negfn), addfn);
  return out;
}

/// The divisor {p; l1, l2, l3} for three lines through a common point p.
inline CDivisor line_relation(const Curve& c, cplx px, cplx py, const std::array<cplx, 3>& slopes,
                              const LatticeData& L) {
  std::array<CDivisor, 3> A;
  for (int i = 0; i < 3; ++i) A[i] = line_divisor(c, Line{px, py, slopes[i]}, L);
  return line_relation_generic(
      A[0], A[1], A[2], [&L](const CPoint& x, const CPoint& y) { return cadd(x, y, L); },
      [&L](const CPoint& x) { return cneg(x, L); });
}

/// Projective direction of a line through p; a vertical direction (dx = 0) is rejected.
inline cplx slope_from_direction(cplx dx, cplx dy) {
  if (std::abs(dx) < 1e-14 * (1.0 + std::abs(dy)))
    throw DomainError("vertical line through p passes through the origin of the cubic");
  return dy / dx;
}

// Formal points: vectors over Z in free generators, for symbolic bookkeeping.
using FormalPoint = std::vector<int>;
using FormalDivisor = Divisor<FormalPoint>;

inline FormalPoint formal_add(const FormalPoint& a, const FormalPoint& b) {
  FormalPoint r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline FormalPoint formal_neg(const FormalPoint& a) {
  FormalPoint r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

/// Alternating sum over j of {p; l_1..l_4 without l_j} for formal line divisors A_1..A_4.
inline FormalDivisor four_line_alternating_sum(const std::array<FormalDivisor, 4>& A) {
  FormalDivisor total;
  for (int j = 0; j < 4; ++j) {
    std::vector<int> idx;
    for (int i = 0; i < 4; ++i)
      if (i != j) idx.push_back(i);
    FormalDivisor r = line_relation_generic(A[idx[0]], A[idx[1]], A[idx[2]], formal_add, formal_neg);
    if ((j + 1) % 2 == 0) total += r;
    else total -= r;
  }
  return total;
}

}  // namespace elldilog

#endif  // ELLDILOG_LINE_RELATION_HPP
