#ifndef ELLDILOG_TATE_HPP
#define ELLDILOG_TATE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curve.hpp"
#include "divisor.hpp"
#include "errors.hpp"
#include "padic.hpp"
#include "rational.hpp"

namespace elldilog {

/// Second and third Bernoulli polynomials.
inline Rational bernoulli_poly(int n, const Rational& x) {
  switch (n) {
    case 2: return x * x - x + Rational(1, 6);
    case 3: return x * x * x - Rational(3, 2) * x * x + Rational(1, 2) * x;
    default: throw UnsupportedPlace("Bernoulli polynomial B_" + std::to_string(n) + " not provided");
  }
}

/// Degrees d(nu) of a divisor on the components Z/eN of the special fibre.
struct ComponentProfile {
  long eN = 1;
  std::map<long, long long> degrees;  // nu in [0, eN)

  void add(long nu, long long d) {
    long r = ((nu % eN) + eN) % eN;
    degrees[r] += d;
    if (degrees[r] == 0) degrees.erase(r);
  }

  long long total_degree() const {
    long long s = 0;
    for (const auto& kv : degrees) s += kv.second;
    return s;
  }
};

/// sum_nu d(nu) B_3(nu / eN), nu taken in [0, eN).
inline Rational integrality_sum(const ComponentProfile& prof) {
  Rational s = 0;
  for (const auto& [nu, d] : prof.degrees) {
    long r = ((nu % prof.eN) + prof.eN) % prof.eN;
    s += Rational(static_cast<long>(d)) * bernoulli_poly(3, make_rational(r, prof.eN));
  }
  return s;
}

/// The same profile seen over an extension with ramification multiplied by e1.
inline ComponentProfile rescale_profile(const ComponentProfile& prof, long e1) {
  ComponentProfile out;
  out.eN = prof.eN * e1;
  for (const auto& [nu, d] : prof.degrees) out.add(nu * e1, d);
  return out;
}

// ---------------------------------------------------------------------------
// Tate curve y^2 + xy = x^3 + a4(q) x + a6(q).

namespace detail {

inline PadicNumber padic_int(long p, long n, long prec) { return PadicNumber(p, Rational(n), prec); }

inline PadicNumber one(long p, long prec) { return padic_int(p, 1, prec); }

// Number of q-powers needed so that v(q^n) exceeds the target precision.
inline long q_terms(const PadicNumber& q, long target) {
  long v = q.valuation();
  if (v <= 0) throw DomainError("Tate parameter must have positive valuation");
  return target / v + 2;
}

}  // namespace detail

/// Solves j(q) = j for q by fixed-point iteration on q = E4(q)^3 / (j prod(1 - q^n)^24).
inline PadicNumber tate_q_from_j(const Rational& j, long p, long prec = PadicNumber::kDefaultPrecision) {
  if (j == 0) throw DomainError("j = 0 has no Tate parameter");
  long vj = valuation(j, static_cast<unsigned long>(p));
  if (vj >= 0) throw DomainError("Tate parameter needs v_p(j) < 0");
  long N = -vj;
  long work = prec + N;
  PadicNumber J(p, j, work);
  PadicNumber Jinv = J.inverse();
  PadicNumber q = Jinv;
  for (int iter = 0; iter < 4 * work + 8; ++iter) {
    long terms = detail::q_terms(q, work + N);
    // E4 = 1 + 240 sum sigma3(n) q^n, Delta/q = prod (1 - q^n)^24
    PadicNumber e4 = detail::one(p, work);
    PadicNumber qn = q;
    PadicNumber prod = detail::one(p, work);
    for (long n = 1; n <= terms; ++n) {
      long sigma3 = 0;
      for (long d = 1; d <= n; ++d)
        if (n % d == 0) sigma3 += d * d * d;
      e4 = e4 + detail::padic_int(p, 240 * sigma3, work) * qn;
      PadicNumber f = detail::one(p, work) - qn;
      PadicNumber f2 = f * f, f4 = f2 * f2, f8 = f4 * f4, f16 = f8 * f8;
      prod = prod * f16 * f8;
      qn = qn * q;
    }
    PadicNumber next = e4 * e4 * e4 * Jinv / prod;
    bool done = next.equals(q) && (next - q).valuation() >= prec + N;
    q = next;
    if (done) break;
  }
  if (q.valuation() != N) throw PrecisionError("Tate parameter iteration did not converge");
  return q;
}

inline PadicNumber tate_q(const Curve& c, long p, long prec = PadicNumber::kDefaultPrecision) {
  ReductionInfo info = reduction_type(c, p);
  if (info.kind != ReductionKind::split_multiplicative)
    throw DomainError("Tate parameter requested at a prime without split multiplicative reduction");
  return tate_q_from_j(c.j_invariant(), p, prec);
}

/// j(q) = 1/q + 744 + 196884 q + ... evaluated from E4 and the product formula.
inline PadicNumber tate_j(const PadicNumber& q, long prec) {
  long p = q.prime();
  long N = q.valuation();
  long work = prec + N;
  long terms = detail::q_terms(q, work + N);
  PadicNumber e4 = detail::one(p, work);
  PadicNumber qn = q;
  PadicNumber prod = detail::one(p, work);
  for (long n = 1; n <= terms; ++n) {
    long sigma3 = 0;
    for (long d = 1; d <= n; ++d)
      if (n % d == 0) sigma3 += d * d * d;
    e4 = e4 + detail::padic_int(p, 240 * sigma3, work) * qn;
    PadicNumber f = detail::one(p, work) - qn;
    PadicNumber f2 = f * f, f4 = f2 * f2, f8 = f4 * f4, f16 = f8 * f8;
    prod = prod * f16 * f8;
    qn = qn * q;
  }
  return e4 * e4 * e4 / (q * prod);
}

/// Tate curve E_q together with the isomorphism from a given model.
class TateCurve {
 public:
  TateCurve(PadicNumber q, long prec) : q_(std::move(q)), prec_(prec) {
    p_ = q_.prime();
    N_ = q_.valuation();
    terms_ = detail::q_terms(q_, prec_ + 2 * N_);
    PadicNumber s1 = PadicNumber::zero(p_, prec_ + 4 * N_);
    PadicNumber s3 = s1, s5 = s1;
    PadicNumber qn = q_;
    for (long n = 1; n <= terms_; ++n) {
      PadicNumber term = qn / (one() - qn);
      s1 = s1 + detail::padic_int(p_, n, work()) * term;
      s3 = s3 + detail::padic_int(p_, n * n * n, work()) * term;
      s5 = s5 + detail::padic_int(p_, n * n * n * n * n, work()) * term;
      qn = qn * q_;
    }
    s1_ = s1;
    a4_ = detail::padic_int(p_, -5, work()) * s3;
    a6_ = -(detail::padic_int(p_, 5, work()) * s3 + detail::padic_int(p_, 7, work()) * s5) /
          detail::padic_int(p_, 12, work());
    c4_ = one() + detail::padic_int(p_, 240, work()) * s3;
    c6_ = -one() + detail::padic_int(p_, 504, work()) * s5;
  }

  long prime() const { return p_; }
  long ngon() const { return N_; }
  const PadicNumber& q() const { return q_; }
  const PadicNumber& a4() const { return a4_; }
  const PadicNumber& a6() const { return a6_; }
  const PadicNumber& c4() const { return c4_; }
  const PadicNumber& c6() const { return c6_; }

  /// x(u) = sum_n q^n u/(1 - q^n u)^2 - 2 s1.
  PadicNumber X(const PadicNumber& u0) const {
    PadicNumber u = reduce(u0);
    PadicNumber s = -(detail::padic_int(p_, 2, work()) * s1_);
    PadicNumber w = u;
    for (long n = 0; n <= terms_; ++n, w = w * q_) s = s + w / square(one() - w);
    PadicNumber v = q_ / u;
    for (long m = 1; m <= terms_; ++m, v = v * q_) s = s + v / square(one() - v);
    return s;
  }

  /// y(u) = sum_n (q^n u)^2/(1 - q^n u)^3 + s1.
  PadicNumber Y(const PadicNumber& u0) const {
    PadicNumber u = reduce(u0);
    PadicNumber s = s1_;
    PadicNumber w = u;
    for (long n = 0; n <= terms_; ++n, w = w * q_) s = s + w * w / cube(one() - w);
    PadicNumber v = q_ / u;
    for (long m = 1; m <= terms_; ++m, v = v * q_) s = s - v / cube(one() - v);
    return s;
  }

  /// u dx/du (q-periodic), divided by u.
  PadicNumber dX(const PadicNumber& u0) const {
    PadicNumber u = reduce(u0);
    PadicNumber s = PadicNumber::zero(p_, work());
    PadicNumber w = u;
    for (long n = 0; n <= terms_; ++n, w = w * q_) s = s + w * (one() + w) / cube(one() - w);
    PadicNumber v = q_ / u;
    for (long m = 1; m <= terms_; ++m, v = v * q_) s = s - v * (one() + v) / cube(one() - v);
    return s / u0;
  }

  bool on_curve(const PadicNumber& x, const PadicNumber& y) const {
    PadicNumber lhs = y * y + x * y;
    PadicNumber rhs = x * x * x + a4_ * x + a6_;
    return (lhs - rhs).valuation() >= prec_ / 2;
  }

  /// Tate parameter of (x, y) in E_q, normalized to 0 <= v(u) < N.
  PadicNumber parameter(const PadicNumber& x, const PadicNumber& y) const {
    std::optional<PadicNumber> seed;
    if (x.is_zero() || x.valuation() <= 0) {
      // Nodal approximation u/(1-u)^2 = x, u^2/(1-u)^3 = y gives u = y/(x + y).
      seed = y / (x + y);
    } else {
      long k = x.valuation();
      bool small = y.is_zero() || y.valuation() > k;
      seed = small ? x : q_ / x;
    }
    PadicNumber u = *seed;
    long target = prec_ / 2;
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
      PadicNumber f = X(u) - x;
      if (f.is_zero() || f.valuation() >= target + N_) {
        converged = true;
        break;
      }
      PadicNumber d = dX(u);
      if (d.is_zero()) break;
      u = u - f / d;
      if (u.is_zero()) break;
      u = reduce(u);
    }
    if (!converged) throw PrecisionError("p-adic Newton iteration for the Tate parameter did not converge");
    // X(u) = X(q/u); pick the branch matching y.
    PadicNumber alt = q_ / u;
    PadicNumber dy1 = Y(u) - y, dy2 = Y(alt) - y;
    long v1 = dy1.valuation(), v2 = dy2.valuation();
    if (v2 > v1) u = alt;
    return reduce(u);
  }

 private:
  long work() const { return prec_ + 4 * N_; }
  PadicNumber one() const { return detail::one(p_, work()); }
  static PadicNumber square(const PadicNumber& a) { return a * a; }
  static PadicNumber cube(const PadicNumber& a) { return a * a * a; }
  // Moves u into 0 <= v(u) < N using u ~ qu.
  PadicNumber reduce(PadicNumber u) const {
    if (u.is_zero()) throw DomainError("Tate parameter 0");
    while (u.valuation() < 0) u = u * q_;
    while (u.valuation() >= N_) u = u / q_;
    return u;
  }

  PadicNumber q_;
  long prec_;
  long p_ = 0, N_ = 0, terms_ = 0;
  PadicNumber s1_, a4_, a6_, c4_, c6_;
};

/// Isomorphism from a model with split multiplicative reduction at p onto E_q.
class TateUniformization {
 public:
  TateUniformization(const Curve& c, long p, long prec = PadicNumber::kDefaultPrecision)
      : curve_(c), p_(p), prec_(prec), tate_(tate_q(c, p, prec + 10), prec + 10) {
    if (p == 2 || p == 3) throw UnsupportedPlace("Tate uniformization at p = 2, 3 is not implemented");
    long w = prec + 10;
    PadicNumber c4(p, c.c4(), w), c6(p, c.c6(), w);
    // c4 = u^4 c4_q, c6 = u^6 c6_q
    PadicNumber u2 = c6 * tate_.c4() / (c4 * tate_.c6());
    u_ = u2.sqrt();
  }

  const TateCurve& tate() const { return tate_; }
  const PadicNumber& scale() const { return u_; }

  /// Image of a point of the model on E_q.
  std::pair<PadicNumber, PadicNumber> to_tate(const Point& P) const {
    if (P.is_infinity()) throw DomainError("point at infinity has no Tate coordinates");
    long w = prec_ + 10;
    Rational Xc = P.x() + curve_.b2() / 12;
    Rational Yc = P.y() + (curve_.a1() * P.x() + curve_.a3()) / 2;
    PadicNumber u2 = u_ * u_;
    PadicNumber Xq = PadicNumber(p_, Xc, w) / u2;
    PadicNumber Yq = PadicNumber(p_, Yc, w) / (u2 * u_);
    PadicNumber xq = Xq - PadicNumber(p_, Rational(1, 12), w);
    PadicNumber yq = Yq - xq / PadicNumber(p_, Rational(2), w);
    return {xq, yq};
  }

  PadicNumber parameter(const Point& P) const {
    auto [x, y] = to_tate(P);
    return tate_.parameter(x, y);
  }

 private:
  Curve curve_;
  long p_;
  long prec_;
  TateCurve tate_;
  PadicNumber u_;
};

/// Component index from valuations on the given (minimal) model: 0 on the
/// identity component, otherwise min(v_p(2y + a1 x + a3), N/2).  Determined up
/// to nu -> -nu, which is all that even functions of nu/N see.
inline long component_index_valuation(const Curve& c, const Point& P, long p) {
  if (P.is_infinity()) return 0;
  ReductionInfo info = reduction_type(c, p);
  if (info.kind != ReductionKind::split_multiplicative && info.kind != ReductionKind::nonsplit_multiplicative)
    throw UnsupportedPlace("component index needs multiplicative reduction");
  unsigned long up = static_cast<unsigned long>(p);
  if (valuation(P.x(), up) < 0) return 0;
  auto [x0, y0] = detail::singular_point_mod_p(c, p);
  if (mod_p(P.x(), p) != x0 || mod_p(P.y(), p) != y0) return 0;
  long v = valuation(2 * P.y() + c.a1() * P.x() + c.a3(), up);
  return std::min(v, info.ngon / 2);
}

/// nu = v_p(u) mod eN for the Tate parameter u of P (unramified case e = 1).
inline long component_index(const Curve& c, const Point& P, long p, long eN,
                            long prec = PadicNumber::kDefaultPrecision) {
  if (P.is_infinity()) return 0;
  ReductionInfo info = reduction_type(c, p);
  if (info.kind != ReductionKind::split_multiplicative)
    throw UnsupportedPlace("component index requested at a place without split multiplicative reduction");
  if (eN != info.ngon) throw UnsupportedPlace("ramified extension: supply the component index explicitly");
  if (eN == 1) return 0;
  // Points reducing to a smooth point of the identity component.
  if (component_index_valuation(c, P, p) == 0) return 0;
  TateUniformization tu(c, p, prec);
  return tu.parameter(P).valuation() % eN;
}

/// Outcome of one condition check with its witness.
struct ConditionReport {
  std::string condition;
  std::string place;
  bool pass = false;
  std::string witness;
  std::vector<std::string> notes;
};

/// Per-point component overrides, for ramified data.
using ComponentOverrides = std::map<Point, long>;

/// Integrality condition at a split multiplicative prime for a divisor of Q-points.
inline ConditionReport condition_c(const Curve& c, const PointDivisor& d, long p, long e = 1, long f = 1,
                                   const ComponentOverrides& overrides = {}) {
  ReductionInfo info = reduction_type(c, p);
  bool nonsplit = info.kind == ReductionKind::nonsplit_multiplicative;
  if (info.kind != ReductionKind::split_multiplicative && !nonsplit)
    throw UnsupportedPlace("integrality condition requested at p = " + std::to_string(p) +
                           " without multiplicative reduction");
  ComponentProfile prof;
  prof.eN = e * info.ngon;
  for (const auto& [P, n] : d) {
    auto it = overrides.find(P);
    long nu;
    if (it != overrides.end()) {
      nu = it->second;
    } else if (e != 1) {
      throw UnsupportedPlace("ramified extension (e > 1): component index override required for " + P.str());
    } else if (nonsplit) {
      // Over the unramified quadratic extension the fibre splits; Frobenius acts
      // by nu -> -nu, so rational points sit on component 0 or N/2.
      nu = component_index_valuation(c, P, p);
    } else {
      nu = component_index(c, P, p, prof.eN);
    }
    prof.add(nu, n);
  }
  Rational s = integrality_sum(prof);
  ConditionReport rep;
  rep.condition = "c";
  rep.place = std::to_string(p);
  rep.pass = (s == 0);
  rep.witness = to_string(s);
  if (nonsplit) rep.notes.push_back("non-split reduction: evaluated over the unramified quadratic extension");
  if (f != 1) rep.notes.push_back("residue degree f > 1: points weighted by coefficient only");
  return rep;
}

}  // namespace elldilog

#endif  // ELLDILOG_TATE_HPP
