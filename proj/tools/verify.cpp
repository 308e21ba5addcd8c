#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "elldilog/verifier.hpp"

using namespace elldilog;

namespace {

int code(ExitCode c) { return static_cast<int>(c); }

RunConfig load(const std::string& path) { return path.empty() ? parse_config_text(kExample37aConfig) : load_config(path); }

void write_out(const std::string& path, const std::string& text, const nlohmann::json* j) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  if (j && path.size() >= 5 && path.substr(path.size() - 5) == ".json") f << j->dump(2) << "\n";
  else f << text;
}

std::string report_output(const std::string& path, const RunReport& rep) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return to_csv(rep);
  return format_text(rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divisor conditions, elliptic dilogarithms and L(E,2) for elliptic curves over Q"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  bool skip_arch = false;
  double tolerance = -1;
  std::uint64_t seed = 0;
  int samples = 20;
  std::string mode = "afe";
  long terms = -1;

  auto* check = app.add_subcommand("check", "verify conditions a), b), c) and the dilogarithm ratios");
  check->add_option("--config", config_path, "run configuration (JSON)")->required();
  check->add_flag("--skip-archimedean", skip_arch, "omit the archimedean height condition");
  check->add_option("--tolerance", tolerance, "archimedean tolerance");
  check->add_option("--out", out_path, "write the report (.json, .csv or text)");

  auto* dilog = app.add_subcommand("dilog", "evaluate the elliptic dilogarithm on the configured divisors");
  dilog->add_option("--config", config_path, "run configuration (JSON); default: bundled 37a");

  auto* lvalue = app.add_subcommand("lvalue", "compute L(E,2)");
  lvalue->add_option("--config", config_path, "run configuration (JSON); default: bundled 37a");
  lvalue->add_option("--mode", mode, "afe or naive")->check(CLI::IsMember({"afe", "naive"}));
  lvalue->add_option("--terms", terms, "naive: coefficient bound; afe: number of terms");

  auto* ident = app.add_subcommand("identities", "run the analytic identity battery");
  ident->add_option("--config", config_path, "run configuration (JSON); default: bundled 37a");
  auto* seed_opt = ident->add_option("--seed", seed, "random seed");
  ident->add_option("--samples", samples, "samples per identity")->check(CLI::PositiveNumber);
  ident->add_option("--out", out_path, "write the table");

  auto* repro = app.add_subcommand("reproduce-example", "run the bundled 37a example");
  repro->add_option("--out", out_path, "write the report (.json, .csv or text)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // usage errors share the config-error code
    return app.exit(e) == 0 ? code(ExitCode::ok) : code(ExitCode::config_error);
  }

  try {
    if (check->parsed() || repro->parsed()) {
      RunConfig cfg = check->parsed() ? load(config_path) : parse_config_text(kExample37aConfig);
      CheckOptions opt;
      opt.skip_archimedean = skip_arch;
      if (tolerance > 0) opt.tolerance = tolerance;
      RunReport rep = run_check(cfg, opt);
      std::cout << format_text(rep);
      nlohmann::json j = to_json(rep);
      write_out(out_path, report_output(out_path, rep), &j);
      return code(rep.pass ? ExitCode::ok : ExitCode::verdict_failed);
    }
    if (dilog->parsed()) {
      RunConfig cfg = load(config_path);
      LatticeData L = periods(cfg.curve);
      for (const auto& ds : cfg.divisors)
        std::cout << ds.label << "  " << fmt(elliptic_dilog(cfg.curve, ds.divisor, L), 15) << "\n";
      return code(ExitCode::ok);
    }
    if (lvalue->parsed()) {
      RunConfig cfg = load(config_path);
      if (cfg.conductor <= 0) throw ConfigError("curve.conductor is required for L-values");
      if (mode == "naive") {
        long B = terms > 0 ? terms : 10000000;
        ANTable t = an_table(cfg.curve, B, cfg.conductor);
        LValue v = l_value_naive(t);
        std::cout << "L(E,2) = " << fmt(v.value, 15) << "  mode naive  terms " << v.terms << "  error ~ "
                  << fmt_sci(v.error_estimate) << "\n";
      } else {
        long n = terms > 0 ? terms : afe_terms(cfg.conductor);
        ANTable t = an_table(cfg.curve, std::max(n, cfg.naive_bound), cfg.conductor);
        SignSelection sel = select_sign(t, cfg.naive_bound);
        LValue v = l_value_afe(t, sel.sign, n);
        std::cout << "L(E,2) = " << fmt(v.value, 15) << "  mode afe  terms " << v.terms << "  sign "
                  << (sel.sign > 0 ? "+1" : "-1") << "  (naive partial sum to " << sel.naive.terms << ": "
                  << fmt(sel.naive.value, 10) << ")\n";
      }
      return code(ExitCode::ok);
    }
    if (ident->parsed()) {
      RunConfig cfg = load(config_path);
      if (cfg.generators.empty()) throw ConfigError("identities need a generator");
      if (seed_opt->count() == 0) seed = cfg.seed;
      auto rows = run_identities(cfg.curve, cfg.generators[0], seed, samples);
      std::string text = format_identities(rows, seed);
      std::cout << text;
      write_out(out_path, text, nullptr);
      bool ok = true;
      for (const auto& r : rows) ok = ok && r.pass;
      return code(ok ? ExitCode::ok : ExitCode::verdict_failed);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return code(ExitCode::config_error);
  } catch (const CoordinateError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return code(ExitCode::config_error);
  } catch (const UnsupportedPlace& e) {
    std::cerr << "unsupported place: " << e.what() << "\n";
    return code(ExitCode::unsupported_place);
  } catch (const PrecisionError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return code(ExitCode::numeric_error);
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return code(ExitCode::config_error);
  }
  return code(ExitCode::ok);
}
