#include "ez/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace ez {

double laplace_eigenvalue(int k, double t) {
  if (k < 2) fail(errc::bad_dimension, "k must be >= 2");
  double k3 = static_cast<double>(k) * k * k;
  return (k3 - k) / 24.0 + 0.5 * k * (k - 1.0) * t * t;
}

double purity_ratio(int k, double t, double sup_abs) {
  if (sup_abs <= 0.0 || t == 0.0) fail(errc::degenerate_input, "need sup_abs > 0 and t != 0");
  return std::log(sup_abs) / std::log(laplace_eigenvalue(k, t));
}

double expected_delta(int k) {
  if (k == 2) return 1.0 / 6.0;
  if (k == 3) return 0.25;
  return 0.5;
}

std::vector<SweepRecord> sweep_critical_line(const QuadraticForm& q, double t0, double t1,
                                             double step, const Config& cfg) {
  if (!(t0 >= 0.0) || !(t1 > t0) || !(step > 0.0)) fail(errc::bad_range, "need 0 <= t0 < t1, step > 0");
  int64_t n = static_cast<int64_t>(std::floor((t1 - t0) / step + 1e-9)) + 1;
  std::vector<SweepRecord> rows(n);
  EvalOptions opt;
  opt.config = cfg;
  opt.use_cache = true;
  // size the shared cache once at the top of the range
  try {
    evaluate(q, cplx(0.5, t1), opt);
  } catch (const ez_error&) {
  }
  parallel_for_index(static_cast<std::size_t>(n), cfg.workers, [&](std::size_t i) {
    double t = t0 + step * static_cast<double>(i);
    SweepRecord& r = rows[i];
    r.t = t;
    r.lambda = laplace_eigenvalue(q.k(), t);
    try {
      auto e = evaluate(q, cplx(0.5, t), opt);
      r.re = e.value.real();
      r.im = e.value.imag();
      r.abs = std::abs(e.value);
      r.err = e.err;
    } catch (const ez_error&) {
      r.failed = true;
      r.re = r.im = r.abs = std::nan("");
      r.err = std::numeric_limits<double>::infinity();
    }
  });
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRecord>& rows) {
  std::string out = "t,re,im,abs,err,lambda\n";
  for (const SweepRecord& r : rows) {
    out += format_double(r.t);
    out += ',';
    out += format_double(r.re);
    out += ',';
    out += format_double(r.im);
    out += ',';
    out += format_double(r.abs);
    out += ',';
    out += format_double(r.err);
    out += ',';
    out += format_double(r.lambda);
    out += '\n';
  }
  return out;
}

GrowthFit fit_growth_exponent(const std::vector<SweepRecord>& records, FitMode mode) {
  std::vector<double> xs, ys;
  if (mode == FitMode::envelope) {
    double runmax = 0.0;
    for (const auto& r : records) {
      if (r.failed || !(r.t > 0.0) || !(r.abs > 0.0) || !std::isfinite(r.abs)) continue;
      if (r.abs > runmax) {
        runmax = r.abs;
        xs.push_back(std::log(r.t));
        ys.push_back(std::log(runmax));
      }
    }
  } else {
    for (const auto& r : records) {
      if (r.failed || !(r.t > 0.0) || !(r.abs > 0.0) || !std::isfinite(r.abs)) continue;
      xs.push_back(std::log(r.t));
      ys.push_back(std::log(r.abs));
    }
  }
  std::size_t n = xs.size();
  if (n < 8) fail(errc::span_too_small, "need at least 8 usable records");
  double xmin = *std::min_element(xs.begin(), xs.end());
  double xmax = *std::max_element(xs.begin(), xs.end());
  if (xmax - xmin < std::log(10.0) * 0.999)
    fail(errc::span_too_small, "records must span at least one decade in t");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  GrowthFit fit;
  fit.mode = mode;
  fit.n = static_cast<int>(n);
  fit.exponent = sxy / sxx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double resid = ys[i] - my - fit.exponent * (xs[i] - mx);
    ss += resid * resid;
  }
  fit.stderr_ = (n > 2) ? std::sqrt(ss / ((n - 2) * sxx)) : 0.0;
  return fit;
}

double mean_square(const QuadraticForm& q, double X, double step, const Config& cfg) {
  if (!(X > 0.0)) fail(errc::bad_range, "X must be positive");
  if (step > 0.25 / q.k() * (1.0 + 1e-12))
    fail(errc::step_too_coarse, "step must be <= 0.25 / k to resolve the oscillation");
  int64_t n = static_cast<int64_t>(std::ceil(X / step));
  if (n % 2) ++n;
  double h = X / static_cast<double>(n);
  EvalOptions opt;
  opt.config = cfg;
  try {
    evaluate(q, cplx(0.5, X), opt);
  } catch (const ez_error&) {
  }
  std::vector<double> y(n + 1);
  parallel_for_index(static_cast<std::size_t>(n + 1), cfg.workers, [&](std::size_t j) {
    double t = h * static_cast<double>(j);
    auto e = evaluate(q, cplx(0.5, t), opt);
    double a = std::abs(e.value);
    y[j] = a * a;
  });
  KahanSum acc;
  acc.add(y[0]);
  acc.add(y[n]);
  for (int64_t j = 1; j < n; ++j) acc.add((j % 2 ? 4.0 : 2.0) * y[j]);
  return acc.value() * h / 3.0;
}

// ---------------------------------------------------------------------------
// verification suites
// ---------------------------------------------------------------------------

namespace {

QuadraticForm identity_form(int k) {
  std::vector<double> g(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) g[i * k + i] = 1.0;
  return make_form(k, g);
}

struct CaseResult {
  bool ok;
  double residual;
};

VerifyReport run_cases(const std::string& name, std::size_t n, int workers,
                       const std::function<CaseResult(std::size_t)>& fn) {
  std::vector<CaseResult> results(n);
  parallel_for_index(n, workers, [&](std::size_t i) {
    try {
      results[i] = fn(i);
    } catch (const std::exception&) {
      results[i] = {false, std::numeric_limits<double>::infinity()};
    }
  });
  VerifyReport rep;
  rep.suite = name;
  rep.cases = static_cast<int>(n);
  for (const auto& r : results) {
    if (r.ok) ++rep.passed;
    rep.max_residual = std::max(rep.max_residual, r.residual);
  }
  return rep;
}

VerifyReport verify_fe(const Config& cfg) {
  // 100 random forms, k in {2..6}, sigma in [0.1, 0.9], |t| <= 50; the two
  // sides run with different rotation budgets so the identity is exercised,
  // not replayed.
  return run_cases("fe", 100, cfg.workers, [&](std::size_t i) -> CaseResult {
    SplitMix64 rng(0x5eed0000 + i);
    int k = 2 + static_cast<int>(i % 5);
    auto q = random_form(k, 0.75, 1.6, 0xfe000 + i);
    cplx s(rng.uniform(0.1, 0.9), rng.uniform(-50.0, 50.0));
    EvalOptions a, b;
    a.config = cfg;
    b.config = cfg;
    b.rotation_scale = 1.45;
    cplx left = completed_lambda(q, s, a);
    cplx right = completed_lambda(inverse_form(q), 1.0 - s, b) / std::sqrt(q.det());
    double resid = std::abs(left - right) / std::max(std::abs(left), std::abs(right));
    return {resid <= 1e-9, resid};
  });
}

VerifyReport verify_unimodular(const Config& cfg) {
  return run_cases("unimodular", 24, cfg.workers, [&](std::size_t i) -> CaseResult {
    SplitMix64 rng(0xabc123 + i);
    int k = 2 + static_cast<int>(i % 4);
    auto q = random_form(k, 0.8, 1.5, 0x7777 + i);
    // conjugate by up to 10 elementary integer shears
    std::vector<double> g = q.gram_data();
    int ops = 2 + static_cast<int>(rng.below(9));
    for (int t = 0; t < ops; ++t) {
      int a = static_cast<int>(rng.below(static_cast<uint64_t>(k)));
      int b = static_cast<int>(rng.below(static_cast<uint64_t>(k)));
      if (a == b) continue;
      double m = (rng.next() & 1) ? 1.0 : -1.0;
      for (int r = 0; r < k; ++r) g[r * k + b] += m * g[r * k + a];
      for (int c = 0; c < k; ++c) g[b * k + c] += m * g[a * k + c];
      for (int r = 0; r < k; ++r)
        for (int c = r + 1; c < k; ++c) {
          double v = 0.5 * (g[r * k + c] + g[c * k + r]);
          g[r * k + c] = v;
          g[c * k + r] = v;
        }
    }
    auto qu = make_form(k, g);
    cplx s(rng.uniform(0.15, 0.9), rng.uniform(-20.0, 20.0));
    EvalOptions opt;
    opt.config = cfg;
    auto a1 = evaluate(q, s, opt);
    auto a2 = evaluate(qu, s, opt);
    double resid = std::abs(a1.value - a2.value) / std::abs(a1.value);
    return {resid <= 1e-10, resid};
  });
}

VerifyReport verify_closedform(const Config& cfg, int k_only) {
  // constants are fixed by the n <= 64 Dirichlet coefficients (deep in the
  // absolute-convergence region); the critical line is out-of-sample
  std::vector<int> ks;
  if (k_only > 0)
    ks = {k_only};
  else
    ks = {4, 6, 8};
  struct Case {
    int k;
    double t;
  };
  std::vector<Case> cases;
  for (int k : ks) {
    auto rc = representation_counts(k, 64);
    auto coeffs = closed_form_dirichlet_coeffs(k, 64);
    for (int64_t n = 1; n <= 64; ++n)
      if (std::abs(coeffs[n - 1] - static_cast<double>(rc.r(n))) > 1e-9)
        fail(errc::fit_failed, "coefficient mismatch");
    for (int i = 0; i < 50; ++i) {
      // 50 deterministic critical-line points, 2 <= |t| <= 100
      double t = 2.0 + 98.0 * (i / 49.0);
      if (i % 2) t = -t;
      cases.push_back({k, t});
    }
  }
  return run_cases("closedform", cases.size(), cfg.workers, [&](std::size_t i) -> CaseResult {
    int k = cases[i].k;
    cplx s(0.5, cases[i].t);
    cplx model = (k == 6) ? eisenstein_mod4_2(6, s) : eisenstein_mod4_0(k, s);
    EvalOptions opt;
    opt.config = cfg;
    auto e = evaluate(identity_form(k), s, opt);
    double resid = std::abs(model - e.value) / std::abs(e.value);
    return {resid <= 1e-7, resid};
  });
}

VerifyReport verify_cohen(const Config& cfg, int k_only, int64_t dmax) {
  std::vector<int> ks;
  if (k_only > 0)
    ks = {k_only};
  else
    ks = {5, 7};
  VerifyReport rep;
  rep.suite = "cohen";
  std::ostringstream detail;
  for (int k : ks) {
    // ratio oracle / series at the five points Re s = 2, Im s = 0..4
    std::vector<cplx> ratios(5);
    std::vector<double> tails(5);
    std::vector<CaseResult> sub(5);
    parallel_for_index(5, cfg.workers, [&](std::size_t i) {
      cplx s(2.0, static_cast<double>(i));
      EvalOptions opt;
      opt.config = cfg;
      auto direct = evaluate_direct(identity_form(k), s, 1e-9, opt);
      auto series = cohen_series(k, s, dmax);
      auto series2 = cohen_series(k, s, 2 * dmax);
      ratios[i] = direct.value / series.value;
      tails[i] = series.tail_bound;
      // doubling D_max moves the value by less than the reported tail bound
      sub[i] = {std::abs(series2.value - series.value) <= series.tail_bound,
                std::abs(series2.value - series.value) / std::max(series.tail_bound, 1e-300)};
    });
    cplx mean = 0.0;
    for (auto& r : ratios) mean += r;
    mean /= 5.0;
    double worst = 0.0;
    for (auto& r : ratios) worst = std::max(worst, std::abs(r - mean) / std::abs(mean));
    rep.cases += 6;
    bool constancy = worst <= 1e-5;
    if (constancy) ++rep.passed;
    rep.max_residual = std::max(rep.max_residual, worst);
    for (auto& scase : sub)
      if (scase.ok) ++rep.passed;
    detail << "c_" << k << " = " << format_double(mean.real());
    if (std::abs(mean.imag()) > 1e-7 * std::abs(mean.real()))
      detail << " + " << format_double(mean.imag()) << "i";
    detail << " (ratio spread " << worst << "); ";
  }
  rep.detail = detail.str();
  return rep;
}

VerifyReport verify_oracle(const Config& cfg) {
  // part 1: evaluate vs evaluate_direct at s = 2 on 50 random forms
  Config heavy = cfg;
  heavy.budget = std::max(cfg.budget, 4e9);
  VerifyReport part1 = run_cases("oracle", 50, cfg.workers, [&](std::size_t i) -> CaseResult {
    int k = 2 + static_cast<int>(i % 3);
    auto q = random_diagonal_form(k, 0.9, 1.15, 0x0c0de + i);
    EvalOptions opt;
    opt.config = heavy;
    opt.use_cache = false;
    auto quick = evaluate(q, cplx(2.0), opt);
    double eps = 0.35e-8 * std::abs(quick.value);
    auto direct = evaluate_direct(q, cplx(2.0), eps, opt);
    double resid = std::abs(quick.value - direct.value) / std::abs(direct.value);
    return {resid <= 1e-8, resid};
  });
  // part 2: evaluate_afe vs evaluate at s = 1/2 + it
  struct Case {
    int k;
    double t;
  };
  std::vector<Case> cases;
  for (int k : {2, 3, 4})
    for (double t : {10.0, 20.0, 50.0, 100.0, 200.0}) cases.push_back({k, t});
  VerifyReport part2 = run_cases("oracle-afe", cases.size(), cfg.workers,
                                 [&](std::size_t i) -> CaseResult {
    auto q = random_form(cases[i].k, 0.85, 1.4, 0xafe00 + cases[i].k);
    EvalOptions opt;
    opt.config = heavy;
    auto a = evaluate_afe(q, cases[i].t, opt);
    auto b = evaluate(q, cplx(0.5, cases[i].t), opt);
    double resid = std::abs(a.value - b.value) / std::abs(b.value);
    return {resid <= 1e-6, resid};
  });
  VerifyReport rep;
  rep.suite = "oracle";
  rep.cases = part1.cases + part2.cases;
  rep.passed = part1.passed + part2.passed;
  rep.max_residual = std::max(part1.max_residual, part2.max_residual);
  rep.detail = "direct max " + format_double(part1.max_residual) + ", afe max " +
               format_double(part2.max_residual);
  return rep;
}

}  // namespace

std::string VerifyReport::to_json() const {
  nlohmann::json j;
  j["suite"] = suite;
  j["cases"] = cases;
  j["passed"] = passed;
  j["max_residual"] = max_residual;
  if (!detail.empty()) j["detail"] = detail;
  return j.dump();
}

VerifyReport verify(const std::string& suite, const Config& cfg) {
  if (suite == "fe") return verify_fe(cfg);
  if (suite == "unimodular") return verify_unimodular(cfg);
  if (suite == "closedform") return verify_closedform(cfg, 0);
  if (suite == "closedform4") return verify_closedform(cfg, 4);
  if (suite == "closedform6") return verify_closedform(cfg, 6);
  if (suite == "closedform8") return verify_closedform(cfg, 8);
  if (suite == "cohen") return verify_cohen(cfg, 0, 10000);
  if (suite == "cohen5") return verify_cohen(cfg, 5, 10000);
  if (suite == "cohen7") return verify_cohen(cfg, 7, 10000);
  if (suite == "oracle") return verify_oracle(cfg);
  fail(errc::unknown_suite, "no suite named '" + suite + "'");
}

VerifyReport specfun_selftest() {
  VerifyReport rep;
  rep.suite = "specfun";
  auto check = [&](bool ok, double resid) {
    ++rep.cases;
    if (ok) ++rep.passed;
    rep.max_residual = std::max(rep.max_residual, resid);
  };
  SplitMix64 rng(2718281828);
  // zeta reflection
  for (int i = 0; i < 100; ++i) {
    cplx s(rng.uniform(-1.5, 2.5), rng.uniform(-100.0, 100.0));
    if (std::abs(s - cplx(1.0)) < 0.1 || std::abs(s) < 0.1) continue;
    cplx lhs = riemann_zeta(s);
    cplx rhs = std::pow(2.0, s) * std::pow(kPi, s - 1.0) * std::sin(kPi * s / 2.0) *
               std::exp(log_gamma(1.0 - s)) * riemann_zeta(1.0 - s);
    double resid = std::abs(lhs - rhs) / std::abs(lhs);
    check(resid <= 1e-9, resid);
  }
  // incomplete gamma recurrence
  for (int i = 0; i < 100; ++i) {
    cplx a(rng.uniform(0.3, 5.0), rng.uniform(-25.0, 25.0));
    double x = std::exp(rng.uniform(-2.0, 3.0));
    cplx lhs = upper_incomplete_gamma(a + 1.0, x);
    cplx rhs = a * upper_incomplete_gamma(a, x) + std::exp(a * std::log(cplx(x)) - x);
    double resid = std::abs(lhs - rhs) / std::abs(rhs);
    check(resid <= 1e-10, resid);
  }
  // quadrature doubling self-test
  for (double ratio : {0.85, 1.0, 1.15}) {
    cplx a(0.8, 150.0);
    cplx z = std::polar(ratio * std::abs(a), 1.30);
    IgammaOptions o1, o2;
    o2.mesh_refine = 1;
    cplx d = std::exp(log_igamma_upper(a, z, o1) - log_igamma_upper(a, z, o2));
    double resid = std::abs(d - 1.0);
    check(resid <= 1e-11, resid);
  }
  // L functional equation, D in {-4, 8, -8}
  for (int64_t D : {int64_t{-4}, int64_t{8}, int64_t{-8}}) {
    int a = (D < 0) ? 1 : 0;
    for (int i = 0; i < 20; ++i) {
      cplx s(rng.uniform(0.2, 0.8), rng.uniform(-100.0, 100.0));
      auto lg_lambda = [&](cplx zz) {
        return 0.5 * (zz + cplx(a)) * std::log(std::abs(D) / kPi) +
               log_gamma(0.5 * (zz + cplx(a))) + std::log(dirichlet_L(zz, D));
      };
      cplx diff = lg_lambda(s) - lg_lambda(1.0 - s);
      double resid = std::abs(std::exp(diff) - 1.0);
      check(resid <= 1e-8, resid);
    }
  }
  // conjugation across the surface
  for (int i = 0; i < 25; ++i) {
    cplx s(rng.uniform(-0.5, 2.0), rng.uniform(0.5, 60.0));
    double r1 = std::abs(riemann_zeta(std::conj(s)) - std::conj(riemann_zeta(s)));
    check(r1 <= 1e-10 * std::abs(riemann_zeta(s)), r1);
  }
  return rep;
}

}  // namespace ez
