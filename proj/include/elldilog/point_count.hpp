#ifndef ELLDILOG_POINT_COUNT_HPP
#define ELLDILOG_POINT_COUNT_HPP

// Trace of Frobenius by baby-step giant-step on y^2 = x^3 + Ax + B over F_p.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "curve.hpp"

namespace elldilog {

namespace bsgs {

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline i64 inv_mod(i64 a, i64 p) {
  i64 t = 0, nt = 1, r = p, nr = a % p;
  if (nr < 0) nr += p;
  while (nr != 0) {
    i64 qq = r / nr;
    i64 tmp = t - qq * nt;
    t = nt;
    nt = tmp;
    tmp = r - qq * nr;
    r = nr;
    nr = tmp;
  }
  return t < 0 ? t + p : t;
}

// Jacobi symbol (a/n), n odd positive.
inline int jacobi(i64 a, i64 n) {
  a %= n;
  if (a < 0) a += n;
  int s = 1;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      i64 r = n & 7;
      if (r == 3 || r == 5) s = -s;
    }
    std::swap(a, n);
    if ((a & 3) == 3 && (n & 3) == 3) s = -s;
    a %= n;
  }
  return n == 1 ? s : 0;
}

struct Pt {
  i64 x = 0, y = 0;
  bool inf = true;
};

// Affine arithmetic on y^2 = x^3 + A x + B mod p; p < 2^31 so products fit in 64 bits.
struct Group {
  i64 p, A;

  Pt add(const Pt& P, const Pt& Q) const {
    if (P.inf) return Q;
    if (Q.inf) return P;
    i64 lam;
    if (P.x == Q.x) {
      if ((P.y + Q.y) % p == 0) return Pt{};
      i64 num = (3 * (P.x * P.x % p) + A) % p;
      lam = num * inv_mod(2 * P.y % p, p) % p;
    } else {
      i64 dx = (Q.x - P.x) % p;
      if (dx < 0) dx += p;
      i64 dy = (Q.y - P.y) % p;
      if (dy < 0) dy += p;
      lam = dy * inv_mod(dx, p) % p;
    }
    i64 x3 = (lam * lam - P.x - Q.x) % p;
    if (x3 < 0) x3 += p;
    x3 %= p;
    if (x3 < 0) x3 += p;
    i64 y3 = (lam * ((P.x - x3 + p) % p) - P.y) % p;
    if (y3 < 0) y3 += p;
    return Pt{x3, y3, false};
  }

  Pt neg(const Pt& P) const {
    if (P.inf) return P;
    return Pt{P.x, P.y == 0 ? 0 : p - P.y, false};
  }

  Pt mul(i64 k, Pt P) const {
    if (k < 0) {
      k = -k;
      P = neg(P);
    }
    Pt acc;
    while (k > 0) {
      if (k & 1) acc = add(acc, P);
      k >>= 1;
      if (k > 0) P = add(P, P);
    }
    return acc;
  }
};

// All m in [lo, hi] with mQ = O.
inline std::vector<i64> annihilators(const Group& g, const Pt& Q, i64 lo, i64 hi) {
  std::vector<i64> out;
  if (Q.inf) return out;
  i64 width = hi - lo + 1;
  i64 s = static_cast<i64>(std::ceil(std::sqrt(static_cast<double>(width) / 2.0))) + 1;
  // baby steps jQ, j = 0..s
  std::vector<std::pair<i64, i64>> baby;  // (x, j) for j >= 1
  baby.reserve(static_cast<std::size_t>(s));
  std::vector<Pt> bpts(static_cast<std::size_t>(s + 1));
  Pt cur;
  for (i64 j = 1; j <= s; ++j) {
    cur = g.add(cur, Q);
    bpts[static_cast<std::size_t>(j)] = cur;
    if (!cur.inf) baby.emplace_back(cur.x, j);
  }
  std::sort(baby.begin(), baby.end());
  i64 step = 2 * s + 1;
  Pt stepP = g.mul(step, Q);
  i64 c = lo + s;
  Pt T = g.mul(c, Q);
  for (; c - s <= hi; c += step, T = g.add(T, stepP)) {
    if (T.inf) {
      if (c >= lo && c <= hi) out.push_back(c);
    } else {
      auto it = std::lower_bound(baby.begin(), baby.end(), std::make_pair(T.x, i64{0}));
      for (; it != baby.end() && it->first == T.x; ++it) {
        const Pt& B = bpts[static_cast<std::size_t>(it->second)];
        // T = +jQ -> (c - j)Q = O ; T = -jQ -> (c + j)Q = O (both when y = 0)
        if (B.y == T.y && c - it->second >= lo && c - it->second <= hi)
          out.push_back(c - it->second);
        if ((B.y + T.y) % g.p == 0 && c + it->second >= lo && c + it->second <= hi)
          out.push_back(c + it->second);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline i64 isqrt(i64 n) {
  i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// #E(F_p) for y^2 = x^3 + A x + B, p >= 5, nonsingular; 0 if undecided.
inline i64 group_order(i64 p, i64 A, i64 B) {
  i64 w = isqrt(4 * p);  // floor(2 sqrt p)
  i64 lo = p + 1 - w, hi = p + 1 + w;
  // Candidates consistent with all probes so far, for E and for its twist.
  std::vector<i64> candE, candT;
  bool haveE = false, haveT = false;
  u64 state = static_cast<u64>(p) * 0x9E3779B97F4A7C15ULL + 1;
  for (int attempt = 0; attempt < 40; ++attempt) {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    i64 x0 = static_cast<i64>(state % static_cast<u64>(p));
    i64 f = ((x0 * x0 % p * x0) % p + A * x0 % p + B) % p;
    if (f == 0) continue;
    int chi = jacobi(f, p);
    // (x0 f, f^2) lies on y^2 = x^3 + A f^2 x + B f^3, isomorphic to E (chi=1) or its twist.
    i64 f2 = f * f % p;
    Group g{p, A * f2 % p};
    Pt Q{x0 * f % p, f2, false};
    std::vector<i64> ms = annihilators(g, Q, lo, hi);
    // #twist = 2p + 2 - #E; map everything to candidates for #E.
    std::vector<i64> asE;
    for (i64 m : ms) asE.push_back(chi == 1 ? m : 2 * p + 2 - m);
    std::sort(asE.begin(), asE.end());
    std::vector<i64>& cand = chi == 1 ? candE : candT;
    bool& have = chi == 1 ? haveE : haveT;
    if (!have) {
      cand = asE;
      have = true;
    } else {
      std::vector<i64> inter;
      std::set_intersection(cand.begin(), cand.end(), asE.begin(), asE.end(),
                            std::back_inserter(inter));
      cand = inter;
    }
    std::vector<i64> both;
    if (haveE && haveT) {
      std::set_intersection(candE.begin(), candE.end(), candT.begin(), candT.end(),
                            std::back_inserter(both));
    } else {
      both = haveE ? candE : candT;
    }
    if (both.size() == 1) return both[0];
  }
  return 0;
}

}  // namespace bsgs

/// a_p at a good prime via BSGS (p >= 5), falling back to enumeration for small p.
inline long count_ap_fast(const Curve& c, long p) {
  if (p < 250) return count_ap_naive(c, p);
  if (valuation(c.discriminant(), static_cast<unsigned long>(p)) > 0) return count_ap_naive(c, p);
  // y^2 = x^3 - 27 c4 x - 54 c6 over F_p
  long A = mod_p(-27 * c.c4(), p);
  long B = mod_p(-54 * c.c6(), p);
  bsgs::i64 n = bsgs::group_order(p, A, B);
  if (n == 0) return count_ap_naive(c, p);
  return p + 1 - static_cast<long>(n);
}

/// Trace of Frobenius at p (good p: p + 1 - #E(F_p); bad p: +1, -1 or 0).
inline long count_ap(const Curve& c, long p) { return count_ap_fast(c, p); }

}  // namespace elldilog

#endif  // ELLDILOG_POINT_COUNT_HPP
