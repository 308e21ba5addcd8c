#ifndef ELLDILOG_DIVISOR_HPP
#define ELLDILOG_DIVISOR_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "curve.hpp"
#include "errors.hpp"
#include "rational.hpp"

namespace elldilog {

/// Finite Z-linear combination of points, kept in canonical form (no zero coefficients).
template <class P, class Less = std::less<P>>
class Divisor {
 public:
  using map_type = std::map<P, long long, Less>;
  using const_iterator = typename map_type::const_iterator;

  Divisor() = default;
  explicit Divisor(const P& p, long long n = 1) { add_term(p, n); }
  Divisor(std::initializer_list<std::pair<P, long long>> terms) {
    for (const auto& [p, n] : terms) add_term(p, n);
  }

  void add_term(const P& p, long long n) {
    if (n == 0) return;
    auto it = terms_.find(p);
    if (it == terms_.end()) {
      terms_.emplace(p, n);
    } else {
      it->second += n;
      if (it->second == 0) terms_.erase(it);
    }
  }

  long long coeff(const P& p) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? 0 : it->second;
  }

  long long degree() const {
    long long d = 0;
    for (const auto& kv : terms_) d += kv.second;
    return d;
  }

  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const_iterator begin() const { return terms_.begin(); }
  const_iterator end() const { return terms_.end(); }
  const map_type& terms() const { return terms_; }

  Divisor& operator+=(const Divisor& o) {
    for (const auto& [p, n] : o.terms_) add_term(p, n);
    return *this;
  }
  Divisor& operator-=(const Divisor& o) {
    for (const auto& [p, n] : o.terms_) add_term(p, -n);
    return *this;
  }
  Divisor& operator*=(long long k) {
    if (k == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& kv : terms_) kv.second *= k;
    return *this;
  }

  friend Divisor operator+(Divisor a, const Divisor& b) { return a += b; }
  friend Divisor operator-(Divisor a, const Divisor& b) { return a -= b; }
  friend Divisor operator-(Divisor a) { return a *= -1; }
  friend Divisor operator*(long long k, Divisor a) { return a *= k; }

  friend bool operator==(const Divisor& a, const Divisor& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    auto i = a.terms_.begin();
    auto j = b.terms_.begin();
    Less less;
    for (; i != a.terms_.end(); ++i, ++j) {
      if (less(i->first, j->first) || less(j->first, i->first) || i->second != j->second)
        return false;
    }
    return true;
  }
  friend bool operator!=(const Divisor& a, const Divisor& b) { return !(a == b); }

 private:
  map_type terms_;
};

/// Group-ring product: sum of n_i m_j (a_i + b_j).
template <class P, class Less, class AddFn>
Divisor<P, Less> convolve(const Divisor<P, Less>& d1, const Divisor<P, Less>& d2, AddFn&& addfn) {
  Divisor<P, Less> out;
  for (const auto& [a, n] : d1)
    for (const auto& [b, m] : d2) out.add_term(addfn(a, b), n * m);
  return out;
}

/// Transport coefficients along the negation map.
template <class P, class Less, class NegFn>
Divisor<P, Less> involute(const Divisor<P, Less>& d, NegFn&& negfn) {
  Divisor<P, Less> out;
  for (const auto& [a, n] : d) out.add_term(negfn(a), n);
  return out;
}

using PointDivisor = Divisor<Point>;

inline PointDivisor convolve(const Curve& c, const PointDivisor& d1, const PointDivisor& d2) {
  for (const auto& kv : d1) detail::require_on_curve(c, kv.first);
  for (const auto& kv : d2) detail::require_on_curve(c, kv.first);
  return convolve(d1, d2, [&c](const Point& a, const Point& b) { return detail::add_unchecked(c, a, b); });
}

inline PointDivisor involute(const Curve& c, const PointDivisor& d) {
  return involute(d, [&c](const Point& a) { return neg(c, a); });
}

inline std::string to_string(const PointDivisor& d) {
  if (d.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, n] : d) {
    if (!first) os << (n < 0 ? " - " : " + ");
    else if (n < 0) os << "-";
    long long a = n < 0 ? -n : n;
    if (a != 1) os << a;
    os << "(" << p.str() << ")";
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Mordell-Weil coordinates.

/// Generators G_1..G_r and, for each registered point, its integer vector.
/// A point flagged as "torsion-shifted" equals sum c_i G_i plus a torsion point.
class MWCoordinates {
 public:
  MWCoordinates(Curve curve, std::vector<Point> generators)
      : curve_(std::move(curve)), gens_(std::move(generators)) {
    for (const auto& g : gens_) detail::require_on_curve(curve_, g);
  }

  std::size_t rank() const { return gens_.size(); }
  const std::vector<Point>& generators() const { return gens_; }
  const Curve& curve() const { return curve_; }

  Point combination(const std::vector<long long>& v) const {
    if (v.size() != gens_.size()) throw DomainError("coordinate vector has wrong length");
    Point acc;
    for (std::size_t i = 0; i < v.size(); ++i)
      acc = detail::add_unchecked(curve_, acc, scalar_mul(curve_, v[i], gens_[i]));
    return acc;
  }

  /// Registers P with coordinates v after checking P - sum v_i G_i exactly.
  /// With torsion=true the difference only has to be a point of order <= 12.
  void set(const Point& p, const std::vector<long long>& v, bool torsion = false) {
    detail::require_on_curve(curve_, p);
    Point diff = sub(curve_, p, combination(v));
    bool ok = diff.is_infinity();
    if (!ok && torsion) {
      Point t = diff;
      for (int m = 2; m <= 12 && !ok; ++m) {
        t = detail::add_unchecked(curve_, t, diff);
        ok = t.is_infinity();
      }
    }
    if (!ok) throw CoordinateError("point " + p.str() + " does not match its Mordell-Weil coordinates");
    coords_[p] = v;
    torsion_[p] = torsion && !diff.is_infinity();
  }

  /// Registers k*G_i for all |k| <= kmax (rank-one convenience).
  void add_multiples(std::size_t gen, long long kmax) {
    if (gen >= gens_.size()) throw DomainError("generator index out of range");
    for (long long k = -kmax; k <= kmax; ++k) {
      std::vector<long long> v(gens_.size(), 0);
      v[gen] = k;
      coords_[scalar_mul(curve_, k, gens_[gen])] = v;
    }
  }

  bool contains(const Point& p) const { return coords_.count(p) != 0; }

  const std::vector<long long>& at(const Point& p) const {
    auto it = coords_.find(p);
    if (it == coords_.end()) throw CoordinateError("no Mordell-Weil coordinates for " + p.str());
    return it->second;
  }

  bool torsion_shifted(const Point& p) const {
    auto it = torsion_.find(p);
    return it != torsion_.end() && it->second;
  }

 private:
  Curve curve_;
  std::vector<Point> gens_;
  std::map<Point, std::vector<long long>> coords_;
  std::map<Point, bool> torsion_;
};

/// Symmetric moments sum n_j v_j^{(x)i}, i = 0..3, stored as full tensors.
struct MomentVector {
  std::size_t r = 0;
  Integer m0 = 0;
  std::vector<Integer> m1;  // r
  std::vector<Integer> m2;  // r*r, index i*r + j
  std::vector<Integer> m3;  // r*r*r, index (i*r + j)*r + k

  static bool all_zero(const std::vector<Integer>& v) {
    for (const auto& x : v)
      if (x != 0) return false;
    return true;
  }

  /// Largest n <= 4 with the divisor in I^n (modulo torsion).
  int augmentation_level() const {
    if (m0 != 0) return 0;
    if (!all_zero(m1)) return 1;
    if (!all_zero(m2)) return 2;
    if (!all_zero(m3)) return 3;
    return 4;
  }

  MomentVector& operator+=(const MomentVector& o) {
    if (o.r != r) throw DomainError("moment vectors of different rank");
    m0 += o.m0;
    for (std::size_t i = 0; i < m1.size(); ++i) m1[i] += o.m1[i];
    for (std::size_t i = 0; i < m2.size(); ++i) m2[i] += o.m2[i];
    for (std::size_t i = 0; i < m3.size(); ++i) m3[i] += o.m3[i];
    return *this;
  }

  friend bool operator==(const MomentVector& a, const MomentVector& b) {
    return a.r == b.r && a.m0 == b.m0 && a.m1 == b.m1 && a.m2 == b.m2 && a.m3 == b.m3;
  }
};

inline MomentVector moment_vector(const PointDivisor& d, const MWCoordinates& coords) {
  MomentVector mv;
  std::size_t r = coords.rank();
  mv.r = r;
  mv.m1.assign(r, 0);
  mv.m2.assign(r * r, 0);
  mv.m3.assign(r * r * r, 0);
  for (const auto& [p, n] : d) {
    const auto& v = coords.at(p);
    Integer N(static_cast<long>(n));
    mv.m0 += N;
    for (std::size_t i = 0; i < r; ++i) {
      Integer a = N * static_cast<long>(v[i]);
      mv.m1[i] += a;
      for (std::size_t j = 0; j < r; ++j) {
        Integer b = a * static_cast<long>(v[j]);
        mv.m2[i * r + j] += b;
        for (std::size_t k = 0; k < r; ++k) mv.m3[(i * r + j) * r + k] += b * static_cast<long>(v[k]);
      }
    }
  }
  return mv;
}

/// Cubic moment condition: sum n_j P_j (x) P_j (x) P_j = 0 in S^3 of the free part.
inline bool condition_a(const PointDivisor& d, const MWCoordinates& coords) {
  return MomentVector::all_zero(moment_vector(d, coords).m3);
}

/// (kP) - k(P) - ((k^3 - k)/6)((2P) - 2(P)).
inline PointDivisor build_pk(long long k, const Point& p, const Curve& c) {
  detail::require_on_curve(c, p);
  long long t = (k * k * k - k) / 6;
  PointDivisor d;
  d.add_term(scalar_mul(c, k, p), 1);
  d.add_term(p, -k);
  d.add_term(scalar_mul(c, 2, p), -t);
  d.add_term(p, 2 * t);
  return d;
}

}  // namespace elldilog

#endif  // ELLDILOG_DIVISOR_HPP
