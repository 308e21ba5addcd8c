#ifndef ELLDILOG_PADIC_HPP
#define ELLDILOG_PADIC_HPP

#include <algorithm>
#include <string>

#include "errors.hpp"
#include "rational.hpp"

namespace elldilog {

/// Element of Q_p stored as p^val * unit with the unit known modulo p^prec.
/// A zero carries only an absolute precision: it is known to be 0 mod p^val.
class PadicNumber {
 public:
  static constexpr long kDefaultPrecision = 30;

  PadicNumber() = default;

  PadicNumber(long p, const Rational& r, long prec = kDefaultPrecision) : p_(p) {
    if (prec <= 0) throw DomainError("p-adic precision must be positive");
    if (r == 0) {
      zero_ = true;
      val_ = prec;
      return;
    }
    unsigned long up = static_cast<unsigned long>(p);
    long vn = elldilog::valuation(r.get_num(), up), vd = elldilog::valuation(r.get_den(), up);
    Integer num = r.get_num(), den = r.get_den();
    Integer pv;
    mpz_ui_pow_ui(pv.get_mpz_t(), up, static_cast<unsigned long>(vn));
    num /= pv;
    mpz_ui_pow_ui(pv.get_mpz_t(), up, static_cast<unsigned long>(vd));
    den /= pv;
    zero_ = false;
    val_ = vn - vd;
    prec_ = prec;
    Integer mod = modulus(prec);
    Integer inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    unit_ = normalize(num * inv, mod);
  }

  static PadicNumber zero(long p, long abs_prec) {
    PadicNumber z;
    z.p_ = p;
    z.zero_ = true;
    z.val_ = abs_prec;
    return z;
  }

  static PadicNumber from_unit(long p, long val, Integer unit, long prec) {
    PadicNumber x;
    x.p_ = p;
    x.zero_ = false;
    x.val_ = val;
    x.prec_ = prec;
    x.unit_ = normalize(std::move(unit), x.modulus(prec));
    if (x.unit_ % p == 0) throw DomainError("unit part divisible by p");
    return x;
  }

  long prime() const { return p_; }
  bool is_zero() const { return zero_; }
  // Valuation; for a zero this is the absolute precision.
  long valuation() const { return val_; }
  long relative_precision() const { return zero_ ? 0 : prec_; }
  long absolute_precision() const { return zero_ ? val_ : val_ + prec_; }
  const Integer& unit() const { return unit_; }

  Integer modulus(long k) const {
    Integer m;
    mpz_ui_pow_ui(m.get_mpz_t(), static_cast<unsigned long>(p_), static_cast<unsigned long>(std::max(0L, k)));
    return m;
  }

  /// Residue of the value in Z/p^k (requires val >= 0).
  Integer residue(long k) const {
    if (zero_) return 0;
    if (val_ < 0) throw DomainError("residue of a non-integral p-adic number");
    if (val_ >= k) return 0;
    return normalize(unit_ * modulus(val_), modulus(k));
  }

  friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
    check_same(a, b);
    if (a.zero_ || b.zero_) {
      return zero(a.p_, a.val_ + b.val_);
    }
    long prec = std::min(a.prec_, b.prec_);
    PadicNumber r;
    r.p_ = a.p_;
    r.zero_ = false;
    r.val_ = a.val_ + b.val_;
    r.prec_ = prec;
    r.unit_ = normalize(a.unit_ * b.unit_, r.modulus(prec));
    return r;
  }

  PadicNumber inverse() const {
    if (zero_) throw DomainError("inverse of p-adic zero");
    PadicNumber r;
    r.p_ = p_;
    r.zero_ = false;
    r.val_ = -val_;
    r.prec_ = prec_;
    Integer mod = modulus(prec_);
    mpz_invert(r.unit_.get_mpz_t(), unit_.get_mpz_t(), mod.get_mpz_t());
    return r;
  }

  friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) { return a * b.inverse(); }

  friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
    check_same(a, b);
    long A = std::min(a.absolute_precision(), b.absolute_precision());
    if (a.zero_ && b.zero_) return zero(a.p_, A);
    long v = std::min(a.zero_ ? A : a.val_, b.zero_ ? A : b.val_);
    if (v >= A) return zero(a.p_, A);
    Integer mod = a.modulus(A - v);
    Integer x = 0;
    if (!a.zero_) x += a.unit_ * a.modulus(a.val_ - v);
    if (!b.zero_) x += b.unit_ * b.modulus(b.val_ - v);
    x = normalize(x, mod);
    if (x == 0) return zero(a.p_, A);
    long w = elldilog::valuation(x, static_cast<unsigned long>(a.p_));
    PadicNumber r;
    r.p_ = a.p_;
    r.zero_ = false;
    r.val_ = v + w;
    r.prec_ = A - r.val_;
    r.unit_ = x / a.modulus(w);
    return r;
  }

  PadicNumber operator-() const {
    if (zero_) return *this;
    PadicNumber r = *this;
    r.unit_ = normalize(-unit_, modulus(prec_));
    return r;
  }

  friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return a + (-b); }

  /// Square root for odd p (Tonelli-Shanks mod p, then Hensel lifting).
  PadicNumber sqrt() const {
    if (zero_) return zero(p_, val_ / 2);
    if (p_ == 2) throw UnsupportedPlace("p-adic square root at p = 2 is not implemented");
    if (val_ % 2 != 0) throw DomainError("p-adic square root of an odd-valuation element");
    Integer P(p_);
    Integer u0 = unit_ % P;
    if (mpz_legendre(u0.get_mpz_t(), P.get_mpz_t()) != 1)
      throw DomainError("unit is not a square mod p");
    Integer r = sqrt_mod_p(u0, P);
    // Hensel: r <- r - (r^2 - u) / (2r) mod p^k, doubling k.
    long k = 1;
    while (k < prec_) {
      k = std::min(2 * k, prec_);
      Integer mod = modulus(k);
      Integer inv2r, twor = 2 * r;
      mpz_invert(inv2r.get_mpz_t(), twor.get_mpz_t(), mod.get_mpz_t());
      r = normalize(r - (r * r - unit_) * inv2r, mod);
    }
    // Canonical choice: the root whose residue mod p lies in [1, (p-1)/2].
    Integer rp = r % P;
    if (rp > (p_ - 1) / 2) r = normalize(-r, modulus(prec_));
    return from_unit(p_, val_ / 2, r, prec_);
  }

  /// Equal up to the smaller of the two absolute precisions.
  bool equals(const PadicNumber& o) const { return (*this - o).is_zero(); }

  std::string str() const {
    if (zero_) return "O(" + std::to_string(p_) + "^" + std::to_string(val_) + ")";
    return std::to_string(p_) + "^" + std::to_string(val_) + "*" + unit_.get_str() + " + O(" +
           std::to_string(p_) + "^" + std::to_string(absolute_precision()) + ")";
  }

 private:
  static Integer normalize(Integer x, const Integer& mod) {
    x %= mod;
    if (x < 0) x += mod;
    return x;
  }

  static void check_same(const PadicNumber& a, const PadicNumber& b) {
    if (a.p_ != b.p_) throw DomainError("p-adic numbers over different primes");
  }

  static Integer sqrt_mod_p(const Integer& a, const Integer& P) {
    // Tonelli-Shanks
    Integer Q = P - 1;
    unsigned long S = 0;
    while (Q % 2 == 0) {
      Q /= 2;
      ++S;
    }
    Integer z = 2;
    while (mpz_legendre(z.get_mpz_t(), P.get_mpz_t()) != -1) ++z;
    Integer M = S, c, t, R, e;
    mpz_powm(c.get_mpz_t(), z.get_mpz_t(), Q.get_mpz_t(), P.get_mpz_t());
    mpz_powm(t.get_mpz_t(), a.get_mpz_t(), Q.get_mpz_t(), P.get_mpz_t());
    e = (Q + 1) / 2;
    mpz_powm(R.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), P.get_mpz_t());
    while (t != 1) {
      unsigned long i = 0;
      Integer tt = t;
      while (tt != 1) {
        tt = tt * tt % P;
        ++i;
      }
      Integer b = c;
      for (unsigned long j = 0; j + 1 + i < M.get_ui(); ++j) b = b * b % P;
      M = i;
      c = b * b % P;
      t = t * c % P;
      R = R * b % P;
    }
    return R;
  }

  long p_ = 2;
  bool zero_ = true;
  long val_ = 0;
  long prec_ = 0;
  Integer unit_ = 0;
};

}  // namespace elldilog

#endif  // ELLDILOG_PADIC_HPP
