#ifndef ELLDILOG_CURVE_HPP
#define ELLDILOG_CURVE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace elldilog {

/// Elliptic curve y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q.
///
/// The b- and c-invariants, the discriminant and j are derived once at
/// construction; a singular model is rejected.
class Curve {
 public:
  Curve(Rational a1, Rational a2, Rational a3, Rational a4, Rational a6)
      : a1_(std::move(a1)), a2_(std::move(a2)), a3_(std::move(a3)), a4_(std::move(a4)),
        a6_(std::move(a6)) {
    b2_ = a1_ * a1_ + 4 * a2_;
    b4_ = 2 * a4_ + a1_ * a3_;
    b6_ = a3_ * a3_ + 4 * a6_;
    b8_ = a1_ * a1_ * a6_ + 4 * a2_ * a6_ - a1_ * a3_ * a4_ + a2_ * a3_ * a3_ - a4_ * a4_;
    c4_ = b2_ * b2_ - 24 * b4_;
    c6_ = -b2_ * b2_ * b2_ + 36 * b2_ * b4_ - 216 * b6_;
    disc_ = -b2_ * b2_ * b8_ - 8 * b4_ * b4_ * b4_ - 27 * b6_ * b6_ + 9 * b2_ * b4_ * b6_;
    if (disc_ == 0) throw DomainError("singular Weierstrass model (discriminant 0)");
  }

  explicit Curve(const std::array<Rational, 5>& a) : Curve(a[0], a[1], a[2], a[3], a[4]) {}

  const Rational& a1() const { return a1_; }
  const Rational& a2() const { return a2_; }
  const Rational& a3() const { return a3_; }
  const Rational& a4() const { return a4_; }
  const Rational& a6() const { return a6_; }
  const Rational& b2() const { return b2_; }
  const Rational& b4() const { return b4_; }
  const Rational& b6() const { return b6_; }
  const Rational& b8() const { return b8_; }
  const Rational& c4() const { return c4_; }
  const Rational& c6() const { return c6_; }
  const Rational& discriminant() const { return disc_; }
  Rational j_invariant() const { return c4_ * c4_ * c4_ / disc_; }

  bool is_integral() const {
    return a1_.get_den() == 1 && a2_.get_den() == 1 && a3_.get_den() == 1 &&
           a4_.get_den() == 1 && a6_.get_den() == 1;
  }

  std::array<Rational, 5> coefficients() const { return {a1_, a2_, a3_, a4_, a6_}; }

  friend bool operator==(const Curve& l, const Curve& r) {
    return l.a1_ == r.a1_ && l.a2_ == r.a2_ && l.a3_ == r.a3_ && l.a4_ == r.a4_ && l.a6_ == r.a6_;
  }

 private:
  Rational a1_, a2_, a3_, a4_, a6_;
  Rational b2_, b4_, b6_, b8_, c4_, c6_, disc_;
};

/// A rational point: the point at infinity or an affine pair.
class Point {
 public:
  Point() = default;  // infinity
  Point(Rational x, Rational y) : affine_(std::array<Rational, 2>{std::move(x), std::move(y)}) {}

  static Point infinity() { return Point(); }

  bool is_infinity() const { return !affine_.has_value(); }
  const Rational& x() const {
    if (!affine_) throw DomainError("point at infinity has no x-coordinate");
    return (*affine_)[0];
  }
  const Rational& y() const {
    if (!affine_) throw DomainError("point at infinity has no y-coordinate");
    return (*affine_)[1];
  }

  friend bool operator==(const Point& l, const Point& r) {
    if (l.is_infinity() || r.is_infinity()) return l.is_infinity() == r.is_infinity();
    return l.x() == r.x() && l.y() == r.y();
  }
  friend bool operator!=(const Point& l, const Point& r) { return !(l == r); }

  // Infinity sorts first, then lexicographic on (x, y).
  friend bool operator<(const Point& l, const Point& r) {
    if (l.is_infinity()) return !r.is_infinity();
    if (r.is_infinity()) return false;
    int c = cmp(l.x(), r.x());
    if (c != 0) return c < 0;
    return cmp(l.y(), r.y()) < 0;
  }

  std::string str() const {
    if (is_infinity()) return "infinity";
    return "(" + to_string(x()) + ", " + to_string(y()) + ")";
  }

 private:
  std::optional<std::array<Rational, 2>> affine_;
};

inline std::ostream& operator<<(std::ostream& os, const Point& p) { return os << p.str(); }

inline bool on_curve(const Curve& c, const Point& p) {
  if (p.is_infinity()) return true;
  const Rational& x = p.x();
  const Rational& y = p.y();
  return y * y + c.a1() * x * y + c.a3() * y == x * x * x + c.a2() * x * x + c.a4() * x + c.a6();
}

inline Point neg(const Curve& c, const Point& p) {
  if (p.is_infinity()) return p;
  return Point(p.x(), -p.y() - c.a1() * p.x() - c.a3());
}

namespace detail {
inline void require_on_curve(const Curve& c, const Point& p) {
  if (!on_curve(c, p)) throw DomainError("point " + p.str() + " is not on the curve");
}

// Chord-tangent law without the membership checks.
inline Point add_unchecked(const Curve& c, const Point& p, const Point& q) {
  if (p.is_infinity()) return q;
  if (q.is_infinity()) return p;
  Rational lambda, nu;
  if (p.x() == q.x()) {
    if (p.y() + q.y() + c.a1() * q.x() + c.a3() == 0) return Point::infinity();
    const Rational& x = p.x();
    const Rational& y = p.y();
    Rational den = 2 * y + c.a1() * x + c.a3();
    lambda = (3 * x * x + 2 * c.a2() * x + c.a4() - c.a1() * y) / den;
    nu = (-x * x * x + c.a4() * x + 2 * c.a6() - c.a3() * y) / den;
  } else {
    Rational dx = q.x() - p.x();
    lambda = (q.y() - p.y()) / dx;
    nu = (p.y() * q.x() - q.y() * p.x()) / dx;
  }
  Rational x3 = lambda * lambda + c.a1() * lambda - c.a2() - p.x() - q.x();
  Rational y3 = -(lambda + c.a1()) * x3 - nu - c.a3();
  return Point(std::move(x3), std::move(y3));
}
}  // namespace detail

inline Point add(const Curve& c, const Point& p, const Point& q) {
  detail::require_on_curve(c, p);
  detail::require_on_curve(c, q);
  return detail::add_unchecked(c, p, q);
}

inline Point sub(const Curve& c, const Point& p, const Point& q) { return add(c, p, neg(c, q)); }

/// k*P by double-and-add; negative k uses -P.
inline Point scalar_mul(const Curve& c, long long k, const Point& p) {
  detail::require_on_curve(c, p);
  Point base = k < 0 ? neg(c, p) : p;
  unsigned long long n = k < 0 ? static_cast<unsigned long long>(-(k + 1)) + 1ULL
                               : static_cast<unsigned long long>(k);
  Point acc;
  while (n != 0) {
    if (n & 1ULL) acc = detail::add_unchecked(c, acc, base);
    n >>= 1;
    if (n != 0) base = detail::add_unchecked(c, base, base);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Reduction data.

enum class ReductionKind { good, split_multiplicative, nonsplit_multiplicative, additive };

inline std::string to_string(ReductionKind k) {
  switch (k) {
    case ReductionKind::good: return "good";
    case ReductionKind::split_multiplicative: return "split-multiplicative";
    case ReductionKind::nonsplit_multiplicative: return "nonsplit-multiplicative";
    case ReductionKind::additive: return "additive";
  }
  return "?";
}

struct ReductionInfo {
  long p = 0;
  ReductionKind kind = ReductionKind::good;
  long ngon = 0;  // v_p(Delta) for multiplicative reduction, else 0
};

namespace detail {

inline long mod_pow(long b, long e, long m) {
  __int128 r = 1, x = ((b % m) + m) % m;
  while (e > 0) {
    if (e & 1) r = (r * x) % m;
    x = (x * x) % m;
    e >>= 1;
  }
  return static_cast<long>(r);
}

// Legendre symbol (a/p) for odd prime p.
inline int legendre(long a, long p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  return mod_pow(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

struct ModCurve {
  long p, a1, a2, a3, a4, a6;
  long eval(long x, long y) const {  // F(x,y) = y^2 + a1xy + a3y - (x^3 + a2x^2 + a4x + a6)
    __int128 X = x, Y = y;
    __int128 v = Y * Y + a1 * X * Y + a3 * Y - (X * X % p * X + a2 * X * X + a4 * X + a6);
    v %= p;
    if (v < 0) v += p;
    return static_cast<long>(v);
  }
};

inline ModCurve reduce_mod(const Curve& c, long p) {
  return ModCurve{p, mod_p(c.a1(), p), mod_p(c.a2(), p), mod_p(c.a3(), p), mod_p(c.a4(), p),
                  mod_p(c.a6(), p)};
}

// Singular point of the reduction mod p (exists when p | Delta).
inline std::pair<long, long> singular_point_mod_p(const Curve& c, long p) {
  ModCurve m = reduce_mod(c, p);
  auto md = [p](__int128 v) {
    v %= p;
    if (v < 0) v += p;
    return static_cast<long>(v);
  };
  if (p <= 3) {
    for (long x = 0; x < p; ++x)
      for (long y = 0; y < p; ++y) {
        if (m.eval(x, y) != 0) continue;
        long fx = md(static_cast<__int128>(m.a1) * y - 3 * x * x - 2 * m.a2 * x - m.a4);
        long fy = md(2 * y + static_cast<__int128>(m.a1) * x + m.a3);
        if (fx == 0 && fy == 0) return {x, y};
      }
    throw DomainError("no singular point mod " + std::to_string(p));
  }
  // p >= 5: x0 is the repeated root of 4x^3 + b2 x^2 + 2 b4 x + b6, y0 from 2y + a1x + a3 = 0.
  long b2 = mod_p(c.b2(), p), b4 = mod_p(c.b4(), p), b6 = mod_p(c.b6(), p);
  for (long x = 0; x < p; ++x) {
    __int128 X = x;
    long f = md(4 * X * X % p * X + b2 * X * X + 2 * b4 * X + b6);
    if (f != 0) continue;
    long df = md(12 * X * X + 2 * b2 * X + 2 * b4);
    if (df != 0) continue;
    long inv2 = mod_pow(2, p - 2, p);
    long y = md(-(static_cast<__int128>(m.a1) * x + m.a3) * inv2);
    return {x, y};
  }
  throw DomainError("no singular point mod " + std::to_string(p));
}

}  // namespace detail

/// Kodaira-free reduction type at p; assumes the model is minimal at p.
inline ReductionInfo reduction_type(const Curve& c, long p) {
  if (!is_prime(static_cast<std::uint64_t>(p))) throw DomainError(std::to_string(p) + " is not prime");
  if (!c.is_integral()) throw DomainError("reduction type needs an integral model");
  ReductionInfo info{p, ReductionKind::good, 0};
  long vd = valuation(c.discriminant(), static_cast<unsigned long>(p));
  if (vd == 0) return info;
  long vc4 = valuation(c.c4(), static_cast<unsigned long>(p));
  if (vc4 != 0) {
    info.kind = ReductionKind::additive;
    return info;
  }
  info.ngon = vd;
  // Tangent cone at the node: t^2 + a1 s t - (3 x0 + a2) s^2.
  auto [x0, y0] = detail::singular_point_mod_p(c, p);
  (void)y0;
  long a1 = mod_p(c.a1(), p), a2 = mod_p(c.a2(), p);
  bool split = false;
  if (p == 2) {
    // With a1 odd the form t^2 + st + c s^2 splits over F2 iff c is even.
    long cc = ((3 * x0 + a2) % 2 + 2) % 2;
    split = (a1 % 2 != 0) && cc == 0;
  } else {
    long disc = ((a1 * a1 + 4 * (3 * x0 + a2)) % p + p) % p;
    split = detail::legendre(disc, p) == 1;
  }
  info.kind = split ? ReductionKind::split_multiplicative : ReductionKind::nonsplit_multiplicative;
  return info;
}

/// #E(F_p) by direct enumeration (O(p)); p must be of good reduction.
inline long count_points_naive(const Curve& c, long p) {
  detail::ModCurve m = detail::reduce_mod(c, p);
  long count = 1;
  if (p == 2) {
    for (long x = 0; x < 2; ++x)
      for (long y = 0; y < 2; ++y) count += m.eval(x, y) == 0;
    return count;
  }
  // (2y + a1x + a3)^2 = 4x^3 + b2x^2 + 2b4x + b6
  long b2 = mod_p(c.b2(), p), b4 = mod_p(c.b4(), p), b6 = mod_p(c.b6(), p);
  for (long x = 0; x < p; ++x) {
    __int128 X = x;
    __int128 f = (4 * X * X % p * X + b2 * X * X + 2 * b4 * X + b6) % p;
    count += 1 + detail::legendre(static_cast<long>(f), p);
  }
  return count;
}

/// Trace of Frobenius: p + 1 - #E(F_p) at good p, +1/-1/0 at bad p.
inline long count_ap_naive(const Curve& c, long p) {
  if (!is_prime(static_cast<std::uint64_t>(p))) throw DomainError(std::to_string(p) + " is not prime");
  if (valuation(c.discriminant(), static_cast<unsigned long>(p)) > 0) {
    switch (reduction_type(c, p).kind) {
      case ReductionKind::split_multiplicative: return 1;
      case ReductionKind::nonsplit_multiplicative: return -1;
      default: return 0;
    }
  }
  return p + 1 - count_points_naive(c, p);
}

// ---------------------------------------------------------------------------
// Short form Y^2 = 4X^3 - g2 X - g3 via X = x + b2/12, Y = 2y + a1 x + a3.

struct ShortForm {
  Rational g2, g3;
  Rational x_shift;  // X = x + x_shift
  Rational a1, a3;   // Y = 2y + a1 x + a3

  Point to_short(const Point& p) const {
    if (p.is_infinity()) return p;
    return Point(p.x() + x_shift, 2 * p.y() + a1 * p.x() + a3);
  }
  Point from_short(const Point& p) const {
    if (p.is_infinity()) return p;
    Rational x = p.x() - x_shift;
    return Point(x, (p.y() - a1 * x - a3) / 2);
  }
  bool on_short(const Point& p) const {
    if (p.is_infinity()) return true;
    return p.y() * p.y() == 4 * p.x() * p.x() * p.x() - g2 * p.x() - g3;
  }
  // g2^3 - 27 g3^2, equal to Delta.
  Rational discriminant() const { return g2 * g2 * g2 - 27 * g3 * g3; }
};

inline ShortForm to_short_form(const Curve& c) {
  return ShortForm{c.c4() / 12, c.c6() / 216, c.b2() / 12, c.a1(), c.a3()};
}

}  // namespace elldilog

#endif  // ELLDILOG_CURVE_HPP
