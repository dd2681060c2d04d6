// ez: Epstein zeta evaluators and experiment harness.
//
// exit codes: 0 success, 1 numeric failure, 2 usage error

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ez/harness.hpp"
#include "json.hpp"

namespace {

using namespace ez;

// parses "a", "a+bi", "a-bi", "bi"
cplx parse_complex(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) fail(errc::bad_input, "empty complex literal");
  if (t.back() == 'i' || t.back() == 'j') {
    t.pop_back();
    // split at the last +/- that is not an exponent sign
    std::size_t split = std::string::npos;
    for (std::size_t i = t.size(); i-- > 1;) {
      if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
        split = i;
        break;
      }
    }
    if (split == std::string::npos) {
      std::string im = t.empty() ? "1" : t;
      if (im == "+" || im == "-") im += "1";
      return cplx(0.0, std::stod(im));
    }
    std::string re = t.substr(0, split);
    std::string im = t.substr(split);
    if (im == "+" || im == "-") im += "1";
    return cplx(std::stod(re), std::stod(im));
  }
  return cplx(std::stod(t), 0.0);
}

Config load_config(const std::string& path) {
  Config cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) fail(errc::bad_input, "cannot open config " + path);
  nlohmann::json j;
  in >> j;
  if (j.contains("precision")) cfg.precision = j["precision"].get<int>();
  if (j.contains("budget")) cfg.budget = j["budget"].get<double>();
  if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Epstein zeta-function evaluators and experiments"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config {precision, budget, workers}");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate E(Z, s) at one point");
  std::string eval_form, eval_s, eval_method = "gamma";
  int eval_prec = 0;
  eval_cmd->add_option("--form", eval_form, "form JSON file")->required();
  eval_cmd->add_option("--s", eval_s, "complex point, e.g. 0.5+14.2i")->required();
  eval_cmd->add_option("--method", eval_method, "gamma | direct | afe")
      ->check(CLI::IsMember({"gamma", "direct", "afe"}));
  eval_cmd->add_option("--prec", eval_prec, "decimal digits of precision");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "critical-line sweep to CSV");
  std::string sweep_form, sweep_out;
  double sw_t0 = 0, sw_t1 = 0, sw_step = 0;
  int sweep_workers = 0;
  sweep_cmd->add_option("--form", sweep_form)->required();
  sweep_cmd->add_option("--t0", sw_t0)->required();
  sweep_cmd->add_option("--t1", sw_t1)->required();
  sweep_cmd->add_option("--step", sw_step)->required();
  sweep_cmd->add_option("--out", sweep_out, "output CSV path (default stdout)");
  sweep_cmd->add_option("--workers", sweep_workers);

  // meansquare
  auto* ms_cmd = app.add_subcommand("meansquare", "int_0^X |E(1/2+it)|^2 dt");
  std::string ms_form;
  double ms_X = 0, ms_step = 0;
  ms_cmd->add_option("--form", ms_form)->required();
  ms_cmd->add_option("--X", ms_X)->required();
  ms_cmd->add_option("--step", ms_step)->required();

  // theta-moment
  auto* tm_cmd = app.add_subcommand("theta-moment", "fourth-moment window of theta");
  std::string tm_form;
  double tm_T = 0, tm_R = 0, tm_step = 0;
  tm_cmd->add_option("--form", tm_form)->required();
  tm_cmd->add_option("--T", tm_T)->required();
  tm_cmd->add_option("--R", tm_R)->required();
  tm_cmd->add_option("--step", tm_step)->required();

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run an invariant battery");
  std::string suite;
  int verify_k = 0;
  verify_cmd->add_option("--suite", suite, "fe | unimodular | closedform | cohen | oracle")
      ->required();
  verify_cmd->add_option("--k", verify_k, "restrict closedform/cohen to one k");

  // random-form
  auto* rf_cmd = app.add_subcommand("random-form", "seeded random diagonal form");
  int rf_k = 0;
  double rf_lo = 0, rf_hi = 0;
  uint64_t rf_seed = 0;
  rf_cmd->add_option("--k", rf_k)->required();
  rf_cmd->add_option("--lo", rf_lo)->required();
  rf_cmd->add_option("--hi", rf_hi)->required();
  rf_cmd->add_option("--seed", rf_seed)->required();

  // lattice
  auto* lat_cmd = app.add_subcommand("lattice", "lattice point utilities");
  lat_cmd->require_subcommand(1);
  auto* lat_count = lat_cmd->add_subcommand("count", "count points with Q(x) <= R");
  std::string lc_form;
  double lc_radius = 0;
  lat_count->add_option("--form", lc_form)->required();
  lat_count->add_option("--radius", lc_radius)->required();
  auto* lat_reps = lat_cmd->add_subcommand("reps", "representation numbers r_k(n)");
  int lr_k = 0;
  int64_t lr_n = 0;
  lat_reps->add_option("--k", lr_k)->required();
  lat_reps->add_option("--n", lr_n)->required();

  // specfun selftest (hidden)
  auto* sf_cmd = app.add_subcommand("specfun", "special-function selftest");
  sf_cmd->group("");  // hidden
  std::string sf_sub;
  sf_cmd->add_option("cmd", sf_sub)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Config cfg = load_config(config_path);

    if (eval_cmd->parsed()) {
      if (eval_prec > 0) cfg.precision = eval_prec;
      auto form = load_form_file(eval_form);
      cplx s = parse_complex(eval_s);
      EvalOptions opt;
      opt.config = cfg;
      EvalResult r;
      if (eval_method == "direct")
        r = evaluate_direct(form, s, std::pow(10.0, -(cfg.precision - 5)), opt);
      else if (eval_method == "afe")
        r = evaluate_afe(form, s.imag(), opt);
      else
        r = evaluate(form, s, opt);
      std::cout << format_double(r.value.real()) << ',' << format_double(r.value.imag()) << ','
                << format_double(std::abs(r.value)) << ',' << format_double(r.err) << ','
                << format_double(r.points) << '\n';
      return 0;
    }

    if (sweep_cmd->parsed()) {
      if (sweep_workers > 0) cfg.workers = sweep_workers;
      auto form = load_form_file(sweep_form);
      auto rows = sweep_critical_line(form, sw_t0, sw_t1, sw_step, cfg);
      std::string csv = sweep_to_csv(rows);
      if (sweep_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(sweep_out, std::ios::binary);
        if (!out) fail(errc::bad_input, "cannot open " + sweep_out);
        out << csv;
      }
      return 0;
    }

    if (ms_cmd->parsed()) {
      auto form = load_form_file(ms_form);
      double v = mean_square(form, ms_X, ms_step, cfg);
      std::cout << format_double(v) << '\n';
      return 0;
    }

    if (tm_cmd->parsed()) {
      auto form = load_form_file(tm_form);
      auto rec = theta_fourth_moment(form, tm_T, tm_R, tm_step, cfg);
      std::cout << "T,R,step,moment,samples\n";
      std::cout << format_double(rec.T) << ',' << format_double(rec.R) << ','
                << format_double(rec.step) << ',' << format_double(rec.moment) << ','
                << rec.samples << '\n';
      return 0;
    }

    if (verify_cmd->parsed()) {
      std::string name = suite;
      if (verify_k > 0 && (suite == "closedform" || suite == "cohen"))
        name += std::to_string(verify_k);
      VerifyReport rep = verify(name, cfg);
      std::cout << rep.to_json() << '\n';
      return rep.ok() ? 0 : 1;
    }

    if (rf_cmd->parsed()) {
      auto form = random_diagonal_form(rf_k, rf_lo, rf_hi, rf_seed);
      std::cout << form_to_json(form) << '\n';
      return 0;
    }

    if (lat_count->parsed()) {
      auto form = load_form_file(lc_form);
      int64_t count = 0;
      enumerate_values(
          form, lc_radius, [&](double, double m) { count += static_cast<int64_t>(m); },
          cfg.budget);
      std::cout << count << '\n';
      return 0;
    }

    if (lat_reps->parsed()) {
      auto rc = representation_counts(lr_k, lr_n, cfg.budget);
      std::cout << "n,count\n";
      for (int64_t n = 1; n <= lr_n; ++n) std::cout << n << ',' << rc.r(n) << '\n';
      return 0;
    }

    if (sf_cmd->parsed()) {
      if (sf_sub != "selftest") fail(errc::bad_input, "unknown specfun command " + sf_sub);
      auto rep = specfun_selftest();
      std::cout << rep.to_json() << '\n';
      return rep.ok() ? 0 : 1;
    }
  } catch (const ez_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return (e.kind() == errc::unknown_suite || e.kind() == errc::bad_input) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
