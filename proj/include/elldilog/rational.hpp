#ifndef ELLDILOG_RATIONAL_HPP
#define ELLDILOG_RATIONAL_HPP

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace elldilog {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den = 1) {
  if (den == 0) throw DomainError("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Accepts "a", "-a/b" and plain decimal integers.
inline Rational parse_rational(const std::string& text) {
  Rational r;
  if (r.set_str(text, 10) != 0) throw ConfigError("not a rational number: '" + text + "'");
  if (r.get_den() == 0) throw ConfigError("zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

inline constexpr long kInfiniteValuation = std::numeric_limits<long>::max();

// p-adic valuation of a nonzero integer; kInfiniteValuation for zero.
inline long valuation(const Integer& n, unsigned long p) {
  if (n == 0) return kInfiniteValuation;
  Integer m = abs(n);
  long v = 0;
  while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
    ++v;
  }
  return v;
}

inline long valuation(const Rational& r, unsigned long p) {
  if (r == 0) return kInfiniteValuation;
  return valuation(r.get_num(), p) - valuation(r.get_den(), p);
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  Integer z(static_cast<unsigned long>(n));
  return mpz_probab_prime_p(z.get_mpz_t(), 30) > 0;
}

// Trial-division factorisation; fine for discriminants and denominators of the
// sizes handled here.
inline std::vector<std::pair<Integer, long>> factor(Integer n) {
  std::vector<std::pair<Integer, long>> out;
  n = abs(n);
  if (n <= 1) return out;
  for (unsigned long p = 2; Integer(p) * p <= n; p += (p == 2 ? 1 : 2)) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      long e = 0;
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        ++e;
      }
      out.emplace_back(Integer(p), e);
    }
    if (mpz_probab_prime_p(n.get_mpz_t(), 30) > 0) break;
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

// Natural log of |n| for arbitrarily large n.
inline double log_abs(const Integer& n) {
  if (n == 0) return -std::numeric_limits<double>::infinity();
  long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, n.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp2) * std::log(2.0);
}

inline double to_double(const Rational& r) { return r.get_d(); }

// r reduced to Z/pZ; the denominator must be prime to p.
inline long mod_p(const Rational& r, long p) {
  Integer P(p);
  Integer den = r.get_den() % P;
  if (den == 0) throw DomainError("denominator divisible by p");
  Integer inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), P.get_mpz_t());
  Integer v = (r.get_num() * inv) % P;
  if (v < 0) v += P;
  return v.get_si();
}

}  // namespace elldilog

#endif  // ELLDILOG_RATIONAL_HPP
