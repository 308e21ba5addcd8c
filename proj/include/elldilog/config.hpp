#ifndef ELLDILOG_CONFIG_HPP
#define ELLDILOG_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "curve.hpp"
#include "divisor.hpp"
#include "errors.hpp"
#include "rational.hpp"
#include "tate.hpp"

namespace elldilog {

struct BadPrimeSpec {
  long p = 0;
  long e = 1;
  long f = 1;
  ComponentOverrides overrides;
};

struct DivisorSpec {
  std::string label;
  PointDivisor divisor;
  std::optional<double> expected_ratio;
};

struct Tolerances {
  double archimedean = 1e-6;
  double ratio = 5e-4;
};

struct RunConfig {
  std::string label;
  Curve curve{0, 0, 0, -1, 0};
  long conductor = 0;
  std::vector<Point> generators;
  std::optional<MWCoordinates> coords;
  std::vector<DivisorSpec> divisors;
  std::vector<long> primes;
  bool include_archimedean = true;
  std::vector<BadPrimeSpec> bad_primes;
  Tolerances tolerances;
  std::string lvalue_mode = "afe";
  long naive_bound = 100000;
  std::uint64_t seed = 0;
  int samples = 20;
  std::string out;
};

namespace detail {

using nlohmann::json;

inline Rational json_rational(const json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
  } catch (const std::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ": expected an integer or a rational string");
}

inline long json_long(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<long>();
}

inline Point json_point(const json& j, const Curve& c, const std::vector<Point>& gens, const std::string& where) {
  if (j.is_string()) {
    if (j.get<std::string>() == "infinity") return Point();
    throw ConfigError(where + ": unknown point token '" + j.get<std::string>() + "'");
  }
  if (j.is_array()) {
    if (j.size() != 2) throw ConfigError(where + ": a point is [x, y]");
    Point p(json_rational(j[0], where + ".x"), json_rational(j[1], where + ".y"));
    if (!on_curve(c, p)) throw ConfigError(where + ": point " + p.str() + " is not on the curve");
    return p;
  }
  if (j.is_object() && j.contains("multiple")) {
    if (gens.empty()) throw ConfigError(where + ": 'multiple' needs a generator");
    return scalar_mul(c, json_long(j["multiple"], where + ".multiple"), gens[0]);
  }
  throw ConfigError(where + ": expected [x, y], \"infinity\" or {\"multiple\": k}");
}

template <class T>
T json_get(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j[key].get<T>();
  } catch (const std::exception& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

}  // namespace detail

/// Parses and validates a run configuration.
inline RunConfig parse_config(const nlohmann::json& j) {
  using detail::json_long;
  using detail::json_point;
  using detail::json_rational;
  RunConfig cfg;
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (!j.contains("curve")) throw ConfigError("missing 'curve'");
  const auto& jc = j["curve"];
  const auto& ja = jc.is_object() ? jc.value("a", nlohmann::json()) : jc;
  if (!ja.is_array() || ja.size() != 5) throw ConfigError("curve: expected [a1, a2, a3, a4, a6]");
  std::array<Rational, 5> a;
  for (int i = 0; i < 5; ++i) a[i] = json_rational(ja[i], "curve.a[" + std::to_string(i) + "]");
  try {
    cfg.curve = Curve(a[0], a[1], a[2], a[3], a[4]);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("curve: ") + e.what());
  }
  if (jc.is_object()) {
    cfg.label = detail::json_get<std::string>(jc, "label", "");
    if (jc.contains("conductor")) cfg.conductor = json_long(jc["conductor"], "curve.conductor");
  }
  if (j.contains("generators")) {
    if (!j["generators"].is_array()) throw ConfigError("generators: expected a list");
    for (std::size_t i = 0; i < j["generators"].size(); ++i) {
      Point g = json_point(j["generators"][i], cfg.curve, {}, "generators[" + std::to_string(i) + "]");
      if (g.is_infinity()) throw ConfigError("generators: the identity is not a generator");
      cfg.generators.push_back(g);
    }
  }
  cfg.coords.emplace(cfg.curve, cfg.generators);
  if (j.contains("mw")) {
    const auto& jm = j["mw"];
    long kmax = detail::json_get<long>(jm, "multiples", 0);
    for (std::size_t g = 0; g < cfg.generators.size() && kmax > 0; ++g) cfg.coords->add_multiples(g, kmax);
    if (jm.contains("points")) {
      for (std::size_t i = 0; i < jm["points"].size(); ++i) {
        std::string where = "mw.points[" + std::to_string(i) + "]";
        const auto& e = jm["points"][i];
        Point p = json_point(e.at("point"), cfg.curve, cfg.generators, where);
        auto v = detail::json_get<std::vector<long long>>(e, "coords", {});
        try {
          cfg.coords->set(p, v, detail::json_get<bool>(e, "torsion", false));
        } catch (const std::exception& ex) {
          throw ConfigError(where + ": " + ex.what());
        }
      }
    }
  }
  if (j.contains("divisors")) {
    for (std::size_t i = 0; i < j["divisors"].size(); ++i) {
      std::string where = "divisors[" + std::to_string(i) + "]";
      const auto& jd = j["divisors"][i];
      DivisorSpec ds;
      ds.label = detail::json_get<std::string>(jd, "label", "D" + std::to_string(i));
      if (jd.contains("expected_ratio")) ds.expected_ratio = jd["expected_ratio"].get<double>();
      if (!jd.contains("terms") || !jd["terms"].is_array()) throw ConfigError(where + ": missing 'terms'");
      for (std::size_t t = 0; t < jd["terms"].size(); ++t) {
        std::string tw = where + ".terms[" + std::to_string(t) + "]";
        const auto& jt = jd["terms"][t];
        long long n = jt.contains("coeff") ? json_long(jt["coeff"], tw + ".coeff") : 1;
        if (jt.contains("Pk")) {
          if (cfg.generators.empty()) throw ConfigError(tw + ": 'Pk' needs a generator");
          ds.divisor += n * build_pk(json_long(jt["Pk"], tw + ".Pk"), cfg.generators[0], cfg.curve);
        } else if (jt.contains("point")) {
          ds.divisor.add_term(json_point(jt["point"], cfg.curve, cfg.generators, tw + ".point"), n);
        } else {
          throw ConfigError(tw + ": expected 'point' or 'Pk'");
        }
      }
      cfg.divisors.push_back(std::move(ds));
    }
  }
  if (j.contains("places")) {
    const auto& jp = j["places"];
    cfg.primes = detail::json_get<std::vector<long>>(jp, "primes", {});
    cfg.include_archimedean = detail::json_get<bool>(jp, "archimedean", true);
    for (long p : cfg.primes)
      if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) throw ConfigError("places.primes: " + std::to_string(p) + " is not prime");
    std::vector<long> sorted = cfg.primes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw ConfigError("places.primes: duplicates");
    if (jp.contains("bad_primes")) {
      for (std::size_t i = 0; i < jp["bad_primes"].size(); ++i) {
        std::string where = "places.bad_primes[" + std::to_string(i) + "]";
        const auto& jb = jp["bad_primes"][i];
        BadPrimeSpec b;
        b.p = json_long(jb.at("p"), where + ".p");
        b.e = jb.contains("e") ? json_long(jb["e"], where + ".e") : 1;
        b.f = jb.contains("f") ? json_long(jb["f"], where + ".f") : 1;
        if (b.e < 1 || b.f < 1) throw ConfigError(where + ": e and f must be positive");
        if (jb.contains("overrides")) {
          for (std::size_t k = 0; k < jb["overrides"].size(); ++k) {
            const auto& jo = jb["overrides"][k];
            std::string ow = where + ".overrides[" + std::to_string(k) + "]";
            b.overrides[json_point(jo.at("point"), cfg.curve, cfg.generators, ow)] = json_long(jo.at("nu"), ow + ".nu");
          }
        }
        cfg.bad_primes.push_back(b);
      }
    }
  }
  if (j.contains("tolerances")) {
    cfg.tolerances.archimedean = detail::json_get<double>(j["tolerances"], "archimedean", cfg.tolerances.archimedean);
    cfg.tolerances.ratio = detail::json_get<double>(j["tolerances"], "ratio", cfg.tolerances.ratio);
  }
  if (j.contains("lvalue")) {
    cfg.lvalue_mode = detail::json_get<std::string>(j["lvalue"], "mode", cfg.lvalue_mode);
    cfg.naive_bound = detail::json_get<long>(j["lvalue"], "naive_bound", cfg.naive_bound);
    if (cfg.lvalue_mode != "afe" && cfg.lvalue_mode != "naive") throw ConfigError("lvalue.mode: expected afe or naive");
    if (cfg.naive_bound < 1) throw ConfigError("lvalue.naive_bound must be positive");
  }
  cfg.seed = detail::json_get<std::uint64_t>(j, "seed", 0);
  cfg.samples = detail::json_get<int>(j, "samples", 20);
  if (cfg.samples < 1) throw ConfigError("samples must be positive");
  if (j.contains("outputs")) cfg.out = detail::json_get<std::string>(j["outputs"], "path", "");
  for (const auto& ds : cfg.divisors)
    for (const auto& [p, n] : ds.divisor) {
      (void)n;
      if (!cfg.coords->contains(p))
        throw ConfigError("divisor " + ds.label + ": no Mordell-Weil coordinates for " + p.str());
    }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

inline RunConfig parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

/// Bundled configuration for y^2 - y = x^3 - x.
inline const char* kExample37aConfig = R"json({
  "curve": {"label": "37a", "a": [0, 0, -1, -1, 0], "conductor": 37},
  "generators": [[0, 0]],
  "mw": {"multiples": 12},
  "divisors": [
    {"label": "P3", "terms": [{"Pk": 3}], "expected_ratio": -8},
    {"label": "P4", "terms": [{"Pk": 4}], "expected_ratio": -26},
    {"label": "P6", "terms": [{"Pk": 6}], "expected_ratio": -90},
    {"label": "P10-4P5", "terms": [{"Pk": 10}, {"Pk": 5, "coeff": -4}], "expected_ratio": -248}
  ],
  "places": {"primes": [2, 37], "archimedean": true, "bad_primes": [{"p": 37, "e": 1, "f": 1}]},
  "tolerances": {"archimedean": 1e-6, "ratio": 5e-4},
  "lvalue": {"mode": "afe", "naive_bound": 100000},
  "seed": 0,
  "samples": 20
})json";

}  // namespace elldilog

#endif  // ELLDILOG_CONFIG_HPP
