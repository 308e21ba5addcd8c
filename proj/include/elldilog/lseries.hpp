#ifndef ELLDILOG_LSERIES_HPP
#define ELLDILOG_LSERIES_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "curve.hpp"
#include "dilog.hpp"
#include "errors.hpp"
#include "lattice.hpp"
#include "point_count.hpp"

namespace elldilog {

/// Dirichlet coefficients a_1..a_B of L(E, s).
struct ANTable {
  long bound = 0;
  long conductor = 0;
  std::vector<std::int64_t> a;  // a[0] unused
  std::vector<std::int32_t> spf;  // smallest prime factor, spf[n] == n for primes

  std::int64_t operator[](long n) const { return a.at(static_cast<std::size_t>(n)); }
  bool is_prime(long n) const { return n >= 2 && spf[static_cast<std::size_t>(n)] == n; }
};

inline ANTable an_table(const Curve& c, long B, long conductor) {
  if (B < 1) throw DomainError("coefficient bound must be positive");
  if (!c.is_integral()) throw DomainError("coefficients need an integral model");
  ANTable t;
  t.bound = B;
  t.conductor = conductor;
  std::size_t n1 = static_cast<std::size_t>(B) + 1;
  t.spf.assign(n1, 0);
  for (long i = 2; i <= B; ++i) {
    if (t.spf[i] != 0) continue;
    for (long j = i; j <= B; j += i)
      if (t.spf[j] == 0) t.spf[j] = static_cast<std::int32_t>(i);
  }
  t.a.assign(n1, 0);
  t.a[1] = 1;
  for (long n = 2; n <= B; ++n) {
    long p = t.spf[n];
    long pk = 1, m = n;
    while (m % p == 0) {
      m /= p;
      pk *= p;
    }
    if (m > 1) {
      t.a[n] = t.a[pk] * t.a[m];
    } else if (pk == p) {
      t.a[n] = count_ap(c, p);
    } else {
      bool good = valuation(c.discriminant(), static_cast<unsigned long>(p)) == 0;
      t.a[n] = t.a[p] * t.a[pk / p];
      if (good) t.a[n] -= static_cast<std::int64_t>(p) * t.a[pk / p / p];
    }
  }
  return t;
}

/// E_1(x) for x > 0.
inline double exp_integral_e1(double x) {
  if (x <= 0) throw DomainError("E1 needs a positive argument");
  return -std::expint(-x);
}

struct LValue {
  double value = 0;
  std::string mode;
  long terms = 0;
  int sign = 0;              // functional-equation sign used (afe)
  double error_estimate = 0;  // naive: B^(-1/2); afe: first omitted term
};

/// sum_{n <= B} a_n / n^2.
inline LValue l_value_naive(const ANTable& t, long B = -1) {
  if (B < 0) B = t.bound;
  if (B > t.bound) throw DomainError("coefficient table too short");
  LValue out;
  out.mode = "naive";
  out.terms = B;
  double s = 0;
  for (long n = B; n >= 1; --n) s += static_cast<double>(t.a[n]) / (static_cast<double>(n) * n);
  out.value = s;
  out.error_estimate = 1.0 / std::sqrt(static_cast<double>(B));
  return out;
}

/// Number of terms after which exp(-A n) < 1e-18.
inline long afe_terms(long conductor) {
  double A = 2.0 * kPi / std::sqrt(static_cast<double>(conductor));
  return static_cast<long>(std::ceil(18.0 * std::log(10.0) / A));
}

/// L(E,2) = sum a_n [exp(-A n)(1 + A n) / n^2 + eps A^2 E_1(A n)], A = 2 pi / sqrt(N).
inline LValue l_value_afe(const ANTable& t, int sign, long terms = -1) {
  if (sign != 1 && sign != -1) throw DomainError("functional-equation sign must be +1 or -1");
  if (terms < 0) terms = afe_terms(t.conductor);
  if (terms > t.bound) throw DomainError("coefficient table too short for the requested terms");
  double A = 2.0 * kPi / std::sqrt(static_cast<double>(t.conductor));
  LValue out;
  out.mode = "afe";
  out.terms = terms;
  out.sign = sign;
  double s = 0;
  for (long n = terms; n >= 1; --n) {
    double an = static_cast<double>(t.a[n]);
    if (an == 0) continue;
    double x = A * static_cast<double>(n);
    s += an * (std::exp(-x) * (1.0 + x) / (static_cast<double>(n) * n) + sign * A * A * exp_integral_e1(x));
  }
  out.value = s;
  double x = A * static_cast<double>(terms + 1);
  out.error_estimate = std::sqrt(static_cast<double>(terms + 1)) * 2.0 * std::exp(-x) * (1.0 + x + A * A);
  return out;
}

struct SignSelection {
  int sign = 0;
  LValue afe;
  LValue naive;
  double distance_plus = 0, distance_minus = 0;
};

/// Picks the sign whose afe value agrees with the naive partial sum.
inline SignSelection select_sign(const ANTable& t, long naive_bound = -1) {
  SignSelection sel;
  sel.naive = l_value_naive(t, naive_bound);
  LValue plus = l_value_afe(t, 1), minus = l_value_afe(t, -1);
  sel.distance_plus = std::fabs(plus.value - sel.naive.value);
  sel.distance_minus = std::fabs(minus.value - sel.naive.value);
  bool pick_minus = sel.distance_minus < sel.distance_plus;
  sel.sign = pick_minus ? -1 : 1;
  sel.afe = pick_minus ? minus : plus;
  double closest = std::min(sel.distance_plus, sel.distance_minus);
  double other = std::max(sel.distance_plus, sel.distance_minus);
  if (!(other > 4.0 * closest && closest < 10.0 * sel.naive.error_estimate))
    throw PrecisionError("naive partial sum cannot separate the functional-equation signs");
  return sel;
}

struct RatioRow {
  std::string label;
  double dilog = 0;
  double ratio = 0;
};

/// 8 pi L_{2,q}(D) / (N L(E,2)) for each labelled divisor.
inline std::vector<RatioRow> ratio_report(const std::vector<std::pair<std::string, PointDivisor>>& divisors,
                                         const Curve& c, const LatticeData& L, double lvalue, long conductor) {
  if (lvalue == 0) throw DomainError("L(E,2) vanishes");
  std::vector<RatioRow> rows;
  for (const auto& [label, d] : divisors) {
    RatioRow r;
    r.label = label;
    r.dilog = elliptic_dilog(c, d, L);
    r.ratio = 8.0 * kPi * r.dilog / (static_cast<double>(conductor) * lvalue);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace elldilog

#endif  // ELLDILOG_LSERIES_HPP
