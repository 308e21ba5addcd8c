#ifndef ELLDILOG_HEIGHTS_HPP
#define ELLDILOG_HEIGHTS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "curve.hpp"
#include "divisor.hpp"
#include "errors.hpp"
#include "lattice.hpp"
#include "rational.hpp"
#include "tate.hpp"
#include "theta.hpp"

namespace elldilog {

// Local heights are normalized as h_v = lambda_v + (1/4) log|Delta|_v, where
// lambda_v is the model-independent Neron function (lambda_p = (1/12) v(Delta) log p
// on integral points of the identity component).  The shift sums to zero over all
// places, so sum_v h_v is the canonical height, and integral points of a one-component
// multiplicative fibre get h_p = -1/6 log p.
inline const Rational kHeightShift(1, 4);

/// Local height value: r * log p at a prime, a real number at infinity.
struct HeightValue {
  long p = 0;  // 0 for the archimedean place
  Rational r = 0;
  double arch = 0;

  bool archimedean() const { return p == 0; }
  double value() const { return archimedean() ? arch : r.get_d() * std::log(static_cast<double>(p)); }
  std::string place() const { return archimedean() ? "inf" : std::to_string(p); }
};

struct PlaceSet {
  std::vector<long> primes;
  bool include_archimedean = true;
};

/// h_p(P) / log p at a place of good or multiplicative reduction (minimal model assumed).
/// A non-split place is handled over the unramified quadratic extension, where it splits;
/// the value per log p does not change.
inline HeightValue local_height_nonarch(const Curve& c, const Point& P, long p) {
  if (P.is_infinity()) throw DomainError("local height of the point at infinity");
  detail::require_on_curve(c, P);
  if (!c.is_integral()) throw DomainError("local heights need an integral model");
  ReductionInfo info = reduction_type(c, p);
  unsigned long up = static_cast<unsigned long>(p);
  long vx = valuation(P.x(), up);
  Rational delta = vx < 0 ? make_rational(-vx, 2) : Rational(0);
  HeightValue h;
  h.p = p;
  switch (info.kind) {
    case ReductionKind::good:
      h.r = delta;
      return h;
    case ReductionKind::split_multiplicative:
    case ReductionKind::nonsplit_multiplicative: {
      long N = info.ngon;
      long i = component_index_valuation(c, P, p);
      Rational lambda = make_rational(N, 2) * bernoulli_poly(2, make_rational(i, N));
      if (i == 0) lambda += delta;
      h.r = lambda - kHeightShift * N;
      return h;
    }
    case ReductionKind::additive: break;
  }
  throw UnsupportedPlace("local height at additive place p = " + std::to_string(p));
}

/// Neron function at infinity: -log|theta(alpha)| + pi (Im alpha)^2 / Im tau.
inline double archimedean_lambda(cplx alpha, const LatticeData& L) {
  cplx th = theta(alpha, L);
  if (std::abs(th) < 1e-300) throw DomainError("archimedean height at the identity");
  return -std::log(std::abs(th)) + kPi * alpha.imag() * alpha.imag() / L.tau.imag();
}

inline HeightValue archimedean_height(const Curve& c, const Point& P, const LatticeData& L) {
  if (P.is_infinity()) throw DomainError("archimedean height of the point at infinity");
  CPoint a = elliptic_log(c, P, L);
  if (cdistance(a.z, 1.0, L) < 1e-12) throw DomainError("archimedean height at the identity");
  HeightValue h;
  h.p = 0;
  h.arch = archimedean_lambda(a.xi, L) + kHeightShift.get_d() * log_abs(c.discriminant().get_num()) -
           kHeightShift.get_d() * log_abs(c.discriminant().get_den());
  return h;
}

/// Primes at which some local height of P can be nonzero: divisors of Delta and of den(x).
inline std::vector<long> height_support(const Curve& c, const Point& P) {
  std::vector<long> out;
  auto push = [&out](const Integer& n) {
    for (const auto& [pr, e] : factor(n)) {
      (void)e;
      if (!pr.fits_slong_p()) throw DomainError("prime too large");
      long p = pr.get_si();
      if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    }
  };
  push(c.discriminant().get_num());
  if (!P.is_infinity()) push(P.x().get_den());
  std::sort(out.begin(), out.end());
  return out;
}

/// Sum of all local heights.
inline double global_height(const Curve& c, const Point& P, const LatticeData& L) {
  double s = archimedean_height(c, P, L).value();
  for (long p : height_support(c, P)) s += local_height_nonarch(c, P, p).value();
  return s;
}

// ---------------------------------------------------------------------------
// Doubling oracle.

namespace detail {

// Determinant by fraction-free elimination.
inline Integer bareiss_det(std::vector<std::vector<Integer>> m) {
  std::size_t n = m.size();
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

// Coefficients (X^4, X^3 Z, ..., Z^4) of the doubling forms for an integral model.
inline std::array<std::array<Integer, 5>, 2> doubling_forms(const Curve& c) {
  auto I = [](const Rational& r) { return Integer(r.get_num()); };
  std::array<Integer, 5> F = {1, 0, -I(c.b4()), -2 * I(c.b6()), -I(c.b8())};
  std::array<Integer, 5> G = {0, 4, I(c.b2()), 2 * I(c.b4()), I(c.b6())};
  return {F, G};
}

inline Integer forms_resultant(const std::array<Integer, 5>& F, const std::array<Integer, 5>& G) {
  std::vector<std::vector<Integer>> m(8, std::vector<Integer>(8, 0));
  for (int r = 0; r < 4; ++r)
    for (int j = 0; j < 5; ++j) {
      m[r][r + j] = F[j];
      m[r + 4][r + j] = G[j];
    }
  return bareiss_det(m);
}

inline Integer eval_form(const std::array<Integer, 5>& f, const Integer& X, const Integer& Z, const Integer& mod) {
  std::array<Integer, 5> xp, zp;
  xp[0] = zp[0] = 1;
  for (int i = 1; i < 5; ++i) {
    xp[i] = xp[i - 1] * X % mod;
    zp[i] = zp[i - 1] * Z % mod;
  }
  Integer s = 0;
  for (int k = 0; k < 5; ++k) s = (s + f[k] * xp[4 - k] % mod * zp[k]) % mod;
  if (s < 0) s += mod;
  return s;
}

inline double eval_form_real(const std::array<Integer, 5>& f, double x) {
  double s = 0;
  for (int k = 0; k < 5; ++k) s = s * x + f[k].get_d();
  return s;
}

}  // namespace detail

struct OracleResult {
  double value = 0;
  int doublings = 0;
  double last_step = 0;  // |h(2^n P)/4^n - h(2^{n-1} P)/4^{n-1}|
  bool torsion = false;
};

/// lim h(2^n P) / 4^n with h(P) = (1/2) log max(|a|, |b|), x(P) = a/b in lowest terms.
/// The archimedean size of x(2^n P) is followed in floating point and the cancellation
/// between numerator and denominator exactly, through residues at the primes dividing
/// the resultant of the doubling forms.
inline OracleResult canonical_height_oracle(const Curve& c, const Point& P, double tol = 1e-12,
                                            int max_doublings = 40) {
  OracleResult res;
  if (!c.is_integral()) throw DomainError("height oracle needs an integral model");
  detail::require_on_curve(c, P);
  {
    Point t = P;
    for (int m = 1; m <= 12; ++m) {
      if (t.is_infinity()) {
        res.torsion = true;
        return res;
      }
      t = add(c, t, P);
    }
  }
  auto [F, G] = detail::doubling_forms(c);
  Integer R = abs(detail::forms_resultant(F, G));
  if (R == 0) throw DomainError("degenerate doubling forms");
  struct Local {
    long p;
    long prec;
    Integer X, Z;  // residues mod p^prec
  };
  std::vector<Local> locs;
  const long kPrec = 400;
  for (const auto& [pr, e] : factor(R)) {
    (void)e;
    Local l{pr.get_si(), kPrec, 0, 0};
    Integer mod;
    mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(l.p), static_cast<unsigned long>(kPrec));
    l.X = P.x().get_num() % mod;
    l.Z = P.x().get_den() % mod;
    if (l.X < 0) l.X += mod;
    locs.push_back(l);
  }
  double logZ = log_abs(P.x().get_den());
  double x = P.x().get_d();
  auto hnaive = [&]() { return 0.5 * (logZ + std::log(std::max(1.0, std::fabs(x)))); };
  double prev = hnaive();
  double scale = 1.0;
  for (int n = 1; n <= max_doublings; ++n) {
    double fx = detail::eval_form_real(F, x), gx = detail::eval_form_real(G, x);
    if (gx == 0.0) throw PrecisionError("doubling reached the point at infinity");
    // g = gcd(F(X,Z), G(X,Z)), supported on primes dividing R.
    double logg = 0;
    std::vector<long> vg(locs.size());
    for (std::size_t i = 0; i < locs.size(); ++i) {
      Local& l = locs[i];
      Integer mod;
      mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(l.p), static_cast<unsigned long>(l.prec));
      Integer fv = detail::eval_form(F, l.X, l.Z, mod), gv = detail::eval_form(G, l.X, l.Z, mod);
      long vf = fv == 0 ? l.prec : valuation(fv, static_cast<unsigned long>(l.p));
      long vgg = gv == 0 ? l.prec : valuation(gv, static_cast<unsigned long>(l.p));
      long v = std::min(vf, vgg);
      if (v >= l.prec - 2) throw PrecisionError("p-adic precision exhausted in the height oracle");
      vg[i] = v;
      logg += static_cast<double>(v) * std::log(static_cast<double>(l.p));
      l.X = fv;
      l.Z = gv;
    }
    // Divide residues by g: exact at p, invertible at the other primes.
    for (std::size_t i = 0; i < locs.size(); ++i) {
      Local& l = locs[i];
      Integer pv;
      mpz_ui_pow_ui(pv.get_mpz_t(), static_cast<unsigned long>(l.p), static_cast<unsigned long>(vg[i]));
      l.prec -= vg[i];
      Integer mod;
      mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(l.p), static_cast<unsigned long>(l.prec));
      l.X = (l.X / pv) % mod;
      l.Z = (l.Z / pv) % mod;
      for (std::size_t j = 0; j < locs.size(); ++j) {
        if (j == i || vg[j] == 0) continue;
        Integer q, inv;
        mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(locs[j].p), static_cast<unsigned long>(vg[j]));
        mpz_invert(inv.get_mpz_t(), q.get_mpz_t(), mod.get_mpz_t());
        l.X = l.X * inv % mod;
        l.Z = l.Z * inv % mod;
      }
    }
    logZ = 4.0 * logZ + std::log(std::fabs(gx)) - logg;
    x = fx / gx;
    scale *= 4.0;
    double cur = hnaive() / scale;
    res.value = cur;
    res.doublings = n;
    res.last_step = std::fabs(cur - prev);
    if (n >= 8 && res.last_step < tol) break;
    prev = cur;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Condition b.

struct HeightConditionRow {
  std::string place;
  std::vector<Rational> exact;  // finite places, in units of log p
  std::vector<double> real;     // archimedean place
  bool pass = false;
};

struct HeightConditionReport {
  std::vector<HeightConditionRow> rows;
  bool pass = true;
};

/// Per place, the vector sum_j n_j h_v(P_j) v_j in the Mordell-Weil coordinates.
inline HeightConditionReport condition_b(const Curve& c, const PointDivisor& d, const MWCoordinates& coords,
                                         const PlaceSet& places, const LatticeData* L = nullptr,
                                         double tol = 1e-6) {
  HeightConditionReport rep;
  std::size_t r = coords.rank();
  for (long p : places.primes) {
    HeightConditionRow row;
    row.place = std::to_string(p);
    row.exact.assign(r, 0);
    for (const auto& [P, n] : d) {
      if (P.is_infinity()) continue;  // zero coordinate vector
      const auto& v = coords.at(P);
      Rational h = local_height_nonarch(c, P, p).r;
      for (std::size_t i = 0; i < r; ++i) row.exact[i] += Rational(static_cast<long>(n)) * h * static_cast<long>(v[i]);
    }
    row.pass = true;
    for (const auto& x : row.exact) row.pass = row.pass && x == 0;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  if (places.include_archimedean) {
    if (!L) throw DomainError("archimedean condition needs the period lattice");
    HeightConditionRow row;
    row.place = "inf";
    row.real.assign(r, 0.0);
    for (const auto& [P, n] : d) {
      if (P.is_infinity()) continue;
      const auto& v = coords.at(P);
      double h = archimedean_height(c, P, *L).value();
      for (std::size_t i = 0; i < r; ++i) row.real[i] += static_cast<double>(n) * h * static_cast<double>(v[i]);
    }
    row.pass = true;
    for (double x : row.real) row.pass = row.pass && std::fabs(x) < tol;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace elldilog

#endif  // ELLDILOG_HEIGHTS_HPP
