#ifndef ELLDILOG_VERIFIER_HPP
#define ELLDILOG_VERIFIER_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "curve.hpp"
#include "dilog.hpp"
#include "divisor.hpp"
#include "heights.hpp"
#include "kronecker.hpp"
#include "lattice.hpp"
#include "line_relation.hpp"
#include "lseries.hpp"
#include "tate.hpp"
#include "theta.hpp"

namespace elldilog {

inline std::string fmt(double x, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

inline std::string fmt_sci(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

struct DivisorReport {
  std::string label;
  std::string divisor;
  MomentVector moments;
  bool condition_a = false;
  HeightConditionReport condition_b;
  std::vector<ConditionReport> condition_c;
  double dilog = 0;
  std::optional<double> ratio;
  std::optional<double> expected_ratio;
  bool ratio_ok = true;
  bool pass = false;
};

struct RunReport {
  std::string curve;
  long conductor = 0;
  std::optional<LValue> lvalue;
  std::vector<DivisorReport> divisors;
  std::vector<std::string> notes;
  bool pass = true;
};

struct CheckOptions {
  bool skip_archimedean = false;
  std::optional<double> tolerance;
};

inline std::string vector_str(const std::vector<Integer>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].get_str();
  return s + ")";
}

inline std::string vector_str(const std::vector<Rational>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].get_str();
  return s + ")";
}

inline std::string vector_str(const std::vector<double>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt_sci(v[i]);
  return s + ")";
}

/// L(E,2) in the configured mode; afe picks the functional-equation sign against the naive sum.
inline LValue compute_lvalue(const Curve& c, long conductor, const std::string& mode, long naive_bound) {
  if (conductor <= 0) throw ConfigError("L-value requested without a conductor");
  long B = std::max(naive_bound, 2 * afe_terms(conductor));
  ANTable t = an_table(c, B, conductor);
  if (mode == "naive") return l_value_naive(t, naive_bound);
  return select_sign(t, naive_bound).afe;
}

inline RunReport run_check(const RunConfig& cfg, const CheckOptions& opt = {}) {
  RunReport rep;
  rep.curve = cfg.label.empty() ? "curve" : cfg.label;
  rep.conductor = cfg.conductor;
  const Curve& c = cfg.curve;
  LatticeData L = periods(c);
  double tol = opt.tolerance.value_or(cfg.tolerances.archimedean);
  bool arch = cfg.include_archimedean && !opt.skip_archimedean;
  if (!arch) rep.notes.push_back("archimedean height condition omitted");
  if (cfg.conductor > 0) rep.lvalue = compute_lvalue(c, cfg.conductor, cfg.lvalue_mode, cfg.naive_bound);
  PlaceSet places{cfg.primes, arch};
  for (const auto& ds : cfg.divisors) {
    DivisorReport dr;
    dr.label = ds.label;
    dr.divisor = to_string(ds.divisor);
    dr.moments = moment_vector(ds.divisor, *cfg.coords);
    dr.condition_a = MomentVector::all_zero(dr.moments.m3);
    dr.condition_b = condition_b(c, ds.divisor, *cfg.coords, places, &L, tol);
    for (const auto& b : cfg.bad_primes) dr.condition_c.push_back(condition_c(c, ds.divisor, b.p, b.e, b.f, b.overrides));
    dr.dilog = elliptic_dilog(c, ds.divisor, L);
    if (rep.lvalue) dr.ratio = 8.0 * kPi * dr.dilog / (static_cast<double>(cfg.conductor) * rep.lvalue->value);
    dr.expected_ratio = ds.expected_ratio;
    if (dr.ratio && dr.expected_ratio) dr.ratio_ok = std::fabs(*dr.ratio - *dr.expected_ratio) <= cfg.tolerances.ratio;
    dr.pass = dr.condition_a && dr.condition_b.pass && dr.ratio_ok;
    for (const auto& cr : dr.condition_c) dr.pass = dr.pass && cr.pass;
    rep.pass = rep.pass && dr.pass;
    rep.divisors.push_back(dr);
  }
  return rep;
}

inline std::string format_text(const RunReport& rep) {
  std::ostringstream os;
  os << "curve " << rep.curve;
  if (rep.conductor) os << "  conductor " << rep.conductor;
  os << "\n";
  if (rep.lvalue) {
    os << "L(E,2) = " << fmt(rep.lvalue->value, 15) << "  mode " << rep.lvalue->mode << "  terms " << rep.lvalue->terms;
    if (rep.lvalue->mode == "afe") os << "  sign " << (rep.lvalue->sign > 0 ? "+1" : "-1");
    os << "\n";
  }
  for (const auto& n : rep.notes) os << "note: " << n << "\n";
  for (const auto& d : rep.divisors) {
    os << "\n[" << d.label << "] " << d.divisor << "\n";
    os << "  a  " << (d.condition_a ? "pass" : "FAIL") << "  m1=" << vector_str(d.moments.m1)
       << " m2=" << vector_str(d.moments.m2) << " m3=" << vector_str(d.moments.m3) << "\n";
    for (const auto& row : d.condition_b.rows) {
      os << "  b  " << (row.pass ? "pass" : "FAIL") << "  place " << row.place << "  ";
      if (row.exact.empty() && !row.real.empty()) os << vector_str(row.real);
      else os << vector_str(row.exact);
      os << "\n";
    }
    for (const auto& cr : d.condition_c) {
      os << "  c  " << (cr.pass ? "pass" : "FAIL") << "  place " << cr.place << "  B3 sum " << cr.witness;
      for (const auto& n : cr.notes) os << "  [" << n << "]";
      os << "\n";
    }
    os << "  L2q = " << fmt(d.dilog, 12);
    if (d.ratio) os << "  ratio 8*pi*L2q/(N*L) = " << fmt(*d.ratio, 6);
    if (d.expected_ratio) os << "  expected " << fmt(*d.expected_ratio, 1) << (d.ratio_ok ? "  ok" : "  MISMATCH");
    os << "\n  verdict " << (d.pass ? "pass" : "FAIL") << "\n";
  }
  os << "\noverall " << (rep.pass ? "pass" : "FAIL") << "\n";
  return os.str();
}

inline nlohmann::json to_json(const RunReport& rep) {
  nlohmann::json j;
  j["curve"] = rep.curve;
  j["conductor"] = rep.conductor;
  if (rep.lvalue) j["lvalue"] = {{"value", rep.lvalue->value}, {"mode", rep.lvalue->mode}, {"terms", rep.lvalue->terms}, {"sign", rep.lvalue->sign}};
  j["notes"] = rep.notes;
  j["divisors"] = nlohmann::json::array();
  for (const auto& d : rep.divisors) {
    nlohmann::json jd;
    jd["label"] = d.label;
    jd["divisor"] = d.divisor;
    jd["condition_a"] = {{"pass", d.condition_a}, {"m3", vector_str(d.moments.m3)}};
    jd["condition_b"] = nlohmann::json::array();
    for (const auto& row : d.condition_b.rows)
      jd["condition_b"].push_back({{"place", row.place}, {"pass", row.pass},
                                   {"vector", row.exact.empty() ? vector_str(row.real) : vector_str(row.exact)}});
    jd["condition_c"] = nlohmann::json::array();
    for (const auto& cr : d.condition_c)
      jd["condition_c"].push_back({{"place", cr.place}, {"pass", cr.pass}, {"sum", cr.witness}, {"notes", cr.notes}});
    jd["dilog"] = d.dilog;
    if (d.ratio) jd["ratio"] = *d.ratio;
    jd["pass"] = d.pass;
    j["divisors"].push_back(jd);
  }
  j["pass"] = rep.pass;
  return j;
}

inline std::string to_csv(const RunReport& rep) {
  std::ostringstream os;
  os << "label,condition_a,condition_b,condition_c,dilog,ratio,verdict\n";
  for (const auto& d : rep.divisors) {
    bool c = true;
    for (const auto& cr : d.condition_c) c = c && cr.pass;
    os << d.label << "," << (d.condition_a ? "pass" : "fail") << "," << (d.condition_b.pass ? "pass" : "fail") << ","
       << (c ? "pass" : "fail") << "," << fmt(d.dilog, 12) << "," << (d.ratio ? fmt(*d.ratio, 8) : "") << ","
       << (d.pass ? "pass" : "fail") << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Identity battery.

struct IdentityRow {
  std::string name;
  int samples = 0;
  double max_residual = 0;
  double threshold = 0;
  bool pass = false;
};

struct IdentityContext {
  Curve curve;
  LatticeData lattice;
  Point generator;
  std::mt19937_64 rng;
  int samples;

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  long integer(long a, long b) { return std::uniform_int_distribution<long>(a, b)(rng); }
  // z in the fundamental annulus, kept away from its boundary circles and from 1
  cplx random_z() {
    double lq = std::log(std::abs(lattice.q));
    for (;;) {
      double r = std::exp(uniform(0.05, 0.95) * lq);
      cplx z = std::polar(r, uniform(-kPi, kPi));
      if (cdistance(z, 1.0, lattice) > 0.05) return z;
    }
  }
};

namespace detail {

inline IdentityRow finish(std::string name, int n, double worst, double thr) {
  return IdentityRow{std::move(name), n, worst, thr, worst < thr};
}

// k P for |k| in [1, kmax].
inline Point random_multiple(IdentityContext& ctx, long kmax) {
  long k = 0;
  while (k == 0) k = ctx.integer(-kmax, kmax);
  return scalar_mul(ctx.curve, k, ctx.generator);
}

inline long generator_multiple(IdentityContext& ctx, const Point& P) {
  for (long k = -40; k <= 40; ++k)
    if (scalar_mul(ctx.curve, k, ctx.generator) == P) return k;
  throw DomainError("point is not a small multiple of the generator");
}

}  // namespace detail

inline IdentityRow identity_dilog_antisymmetry(IdentityContext& ctx) {
  double worst = 0;
  for (int i = 0; i < ctx.samples; ++i) {
    cplx z = ctx.random_z();
    worst = std::max(worst, std::fabs(elliptic_dilog(1.0 / z, ctx.lattice) + elliptic_dilog(z, ctx.lattice)));
  }
  return detail::finish("L2q(1/z) = -L2q(z)", ctx.samples, worst, 1e-12);
}

inline IdentityRow identity_jq_antisymmetry(IdentityContext& ctx) {
  double worst = 0;
  for (int i = 0; i < ctx.samples; ++i) {
    cplx z = ctx.random_z();
    worst = std::max(worst, std::fabs(jq(1.0 / z, ctx.lattice) + jq(z, ctx.lattice)));
  }
  return detail::finish("Jq(1/z) = -Jq(z)", ctx.samples, worst, 1e-10);
}

inline IdentityRow identity_jq_periodicity(IdentityContext& ctx) {
  double worst = 0;
  for (int i = 0; i < ctx.samples; ++i) {
    cplx z = ctx.random_z();
    worst = std::max(worst, std::fabs(jq(ctx.lattice.q * z, ctx.lattice) - jq(z, ctx.lattice)));
  }
  return detail::finish("Jq(qz) = Jq(z)", ctx.samples, worst, 1e-10);
}

inline IdentityRow identity_k21(IdentityContext& ctx) {
  double worst = 0;
  for (int i = 0; i < ctx.samples; ++i) {
    cplx z = ctx.random_z();
    cplx xi = std::log(z) / kTwoPiI;
    cplx k = kronecker_k21(xi, ctx.lattice).value;
    cplx rhs(elliptic_dilog(z, ctx.lattice), -jq(z, ctx.lattice));
    worst = std::max(worst, std::abs(k - rhs));
  }
  return detail::finish("K21 = L2q - i Jq", ctx.samples, worst, 1e-8);
}

// Random tau: theta'(0)^2 against (2 pi i eta^2)^2.
inline IdentityRow identity_theta_prime(IdentityContext& ctx) {
  double worst = 0;
  for (int i = 0; i < ctx.samples; ++i) {
    cplx tau(ctx.uniform(-0.5, 0.5), ctx.uniform(0.6, 2.0));
    LatticeData L = lattice_from_tau(tau);
    cplx d = theta_prime_zero(L);
    cplx e = kTwoPiI * L.eta * L.eta;
    worst = std::max(worst, std::abs(d * d - e * e) / std::abs(e * e));
  }
  return detail::finish("theta'(0)^2 = (2 pi i eta^2)^2 (relative)", ctx.samples, worst, 1e-10);
}

inline IdentityRow identity_isogeny(IdentityContext& ctx, int n) {
  double worst = 0;
  for (int i = 0; i < ctx.samples; ++i) {
    cplx xi = std::log(ctx.random_z()) / kTwoPiI;
    worst = std::max(worst, theta_isogeny_check(n, xi, ctx.lattice));
  }
  return detail::finish("theta isogeny identity n=" + std::to_string(n), ctx.samples, worst, 1e-9);
}

// L2q(a) = 2 sum_{2b = a} L2q(b); the halves of z are +-sqrt(z), +-sqrt(qz).
inline IdentityRow identity_distribution(IdentityContext& ctx) {
  double worst = 0;
  for (int i = 0; i < ctx.samples; ++i) {
    cplx z = ctx.random_z();
    cplx r1 = std::sqrt(z), r2 = std::sqrt(ctx.lattice.q * z);
    double s = elliptic_dilog(r1, ctx.lattice) + elliptic_dilog(-r1, ctx.lattice) + elliptic_dilog(r2, ctx.lattice) +
               elliptic_dilog(-r2, ctx.lattice);
    worst = std::max(worst, std::fabs(elliptic_dilog(z, ctx.lattice) - 2.0 * s));
  }
  return detail::finish("distribution relation m=2", ctx.samples, worst, 1e-10);
}

inline IdentityRow identity_line_relations(IdentityContext& ctx, int count = 10) {
  double worst = 0;
  int done = 0;
  while (done < count) {
    cplx px(ctx.uniform(-2, 2), ctx.uniform(-2, 2)), py(ctx.uniform(-2, 2), ctx.uniform(-2, 2));
    std::array<cplx, 3> slopes;
    for (auto& s : slopes) s = cplx(ctx.uniform(-3, 3), ctx.uniform(-3, 3));
    try {
      CDivisor d = line_relation(ctx.curve, px, py, slopes, ctx.lattice);
      worst = std::max(worst, std::fabs(elliptic_dilog(d, ctx.lattice)));
      ++done;
    } catch (const PrecisionError&) {
      // resample near-degenerate configurations
    }
  }
  return detail::finish("L2q vanishes on line relations", count, worst, 1e-8);
}

// pv(a+b) pv(a-b) / (pv(a)^2 pv(b)^2) = (D^(-1/6) (x(a) - x(b)))^(-2).
inline IdentityRow identity_pairing_formula(IdentityContext& ctx) {
  double worst = 0;
  double disc = std::fabs(ctx.curve.discriminant().get_d());
  int done = 0;
  while (done < ctx.samples) {
    Point a = detail::random_multiple(ctx, 6), b = detail::random_multiple(ctx, 6);
    if (a == b || a == neg(ctx.curve, b)) continue;
    cplx xa = elliptic_log(ctx.curve, a, ctx.lattice).xi, xb = elliptic_log(ctx.curve, b, ctx.lattice).xi;
    cplx lhs = pairing_cross_ratio(xa, xb, ctx.lattice);
    double Xa = Rational(a.x() + ctx.curve.b2() / 12).get_d(), Xb = Rational(b.x() + ctx.curve.b2() / 12).get_d();
    cplx rhs = propo_rhs(disc, -1.0 / 6.0, Xa, Xb);
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    ++done;
  }
  return detail::finish("pairing cross-ratio vs D^(-1/6) x-difference (relative)", ctx.samples, worst, 1e-8);
}

inline IdentityRow identity_classical_wp(IdentityContext& ctx) {
  double worst = 0;
  for (int i = 0; i < ctx.samples; ++i) {
    cplx a = std::log(ctx.random_z()) / kTwoPiI, b = std::log(ctx.random_z()) / kTwoPiI;
    cplx lhs = normalized_wp(a, ctx.lattice) - normalized_wp(b, ctx.lattice);
    cplx rhs = theta_difference(a, b, ctx.lattice);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  return detail::finish("wp(a) - wp(b) theta formula", ctx.samples, worst, 1e-9);
}

namespace detail {

// Four random distinct nonzero multiples of the generator for which the explicit formula is defined.
inline std::array<long, 4> random_quadruple(IdentityContext& ctx, std::vector<Delta3Term>& terms) {
  for (;;) {
    std::array<long, 4> k;
    for (auto& v : k) {
      v = 0;
      while (v == 0) v = ctx.integer(-4, 4);
    }
    std::array<Point, 4> pts;
    for (int i = 0; i < 4; ++i) pts[i] = scalar_mul(ctx.curve, k[i], ctx.generator);
    try {
      terms = delta3_explicit(pts, ctx.curve);
      return k;
    } catch (const DomainError&) {
    }
  }
}

// The rank-one shadow of sum_i S_i (x) a_i: the valuation vector over primes and the real part.
struct Delta3Shadow {
  std::map<long, long> valuations;
  double log_part = 0;
};

inline Delta3Shadow delta3_shadow(const std::vector<Delta3Term>& terms, const std::array<long, 4>& k) {
  Delta3Shadow sh;
  for (int i = 0; i < 4; ++i) {
    const Rational& s = terms[i].scalar;
    for (const Integer* part : {&s.get_num(), &s.get_den()}) {
      for (const auto& [pr, e] : factor(abs(*part))) {
        (void)e;
        long p = pr.get_si();
        sh.valuations[p] += valuation(s, static_cast<unsigned long>(p)) * k[i];
      }
    }
    sh.log_part += k[i] * (log_abs(s.get_num()) - log_abs(s.get_den()));
  }
  for (auto it = sh.valuations.begin(); it != sh.valuations.end();) {
    if (it->second == 0) it = sh.valuations.erase(it);
    else ++it;
  }
  return sh;
}

}  // namespace detail

// Each permutation of (a1..a4) yields the same element after bilinear expansion.
inline IdentityRow identity_delta3_symmetry(IdentityContext& ctx) {
  double worst = 0;
  for (int i = 0; i < ctx.samples; ++i) {
    std::vector<Delta3Term> terms;
    std::array<long, 4> k = detail::random_quadruple(ctx, terms);
    detail::Delta3Shadow base = detail::delta3_shadow(terms, k);
    std::array<int, 4> perm = {0, 1, 2, 3};
    while (std::next_permutation(perm.begin(), perm.end())) {
      std::array<long, 4> kp;
      std::array<Point, 4> pts;
      for (int j = 0; j < 4; ++j) {
        kp[j] = k[perm[j]];
        pts[j] = scalar_mul(ctx.curve, kp[j], ctx.generator);
      }
      std::vector<Delta3Term> t2;
      try {
        t2 = delta3_explicit(pts, ctx.curve);
      } catch (const DomainError&) {
        continue;
      }
      detail::Delta3Shadow sh = detail::delta3_shadow(t2, kp);
      double r = std::fabs(sh.log_part - base.log_part) / std::max(1.0, std::fabs(base.log_part));
      if (sh.valuations != base.valuations) r = std::max(r, 1.0);
      worst = std::max(worst, r);
    }
  }
  return detail::finish("explicit four-point formula: permutation symmetry", ctx.samples, worst, 1e-8);
}

inline IdentityRow identity_delta3_theta(IdentityContext& ctx) {
  double worst = 0;
  for (int i = 0; i < ctx.samples; ++i) {
    std::vector<Delta3Term> terms;
    std::array<long, 4> k = detail::random_quadruple(ctx, terms);
    cplx xiP = elliptic_log(ctx.curve, ctx.generator, ctx.lattice).xi;
    std::array<cplx, 4> xi;
    for (int j = 0; j < 4; ++j) xi[j] = static_cast<double>(k[j]) * xiP;
    for (int j = 0; j < 4; ++j) {
      cplx t = delta3_theta_term(xi, j, ctx.lattice);
      double s = terms[j].scalar.get_d();
      worst = std::max(worst, std::abs(s - 1.0 / (t * t)) / std::fabs(s));
    }
  }
  return detail::finish("explicit four-point formula: theta form (relative)", ctx.samples, worst, 1e-8);
}

inline std::vector<IdentityRow> run_identities(const Curve& c, const Point& generator, std::uint64_t seed,
                                               int samples) {
  IdentityContext ctx{c, periods(c), generator, std::mt19937_64(seed), samples};
  std::vector<IdentityRow> rows;
  rows.push_back(identity_dilog_antisymmetry(ctx));
  rows.push_back(identity_jq_antisymmetry(ctx));
  rows.push_back(identity_jq_periodicity(ctx));
  rows.push_back(identity_k21(ctx));
  rows.push_back(identity_theta_prime(ctx));
  for (int n : {2, 3, 5}) rows.push_back(identity_isogeny(ctx, n));
  rows.push_back(identity_distribution(ctx));
  rows.push_back(identity_line_relations(ctx));
  rows.push_back(identity_pairing_formula(ctx));
  rows.push_back(identity_classical_wp(ctx));
  rows.push_back(identity_delta3_symmetry(ctx));
  rows.push_back(identity_delta3_theta(ctx));
  return rows;
}

inline std::string format_identities(const std::vector<IdentityRow>& rows, std::uint64_t seed) {
  std::ostringstream os;
  os << "seed " << seed << "\n";
  for (const auto& r : rows)
    os << (r.pass ? "pass  " : "FAIL  ") << r.name << "  samples " << r.samples << "  max residual "
       << fmt_sci(r.max_residual) << "  threshold " << fmt_sci(r.threshold) << "\n";
  return os.str();
}

}  // namespace elldilog

#endif  // ELLDILOG_VERIFIER_HPP
