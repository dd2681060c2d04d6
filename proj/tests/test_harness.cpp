#include <cmath>

#include "doctest.h"
#include "ez/harness.hpp"

using namespace ez;

namespace {

QuadraticForm identity(int k) {
  std::vector<double> g(k * k, 0.0);
  for (int i = 0; i < k; ++i) g[i * k + i] = 1.0;
  return make_form(k, g);
}

}  // namespace

TEST_CASE("laplace eigenvalue formula") {
  CHECK(laplace_eigenvalue(4, 0.0) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(laplace_eigenvalue(3, 1.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(laplace_eigenvalue(5, -3.0) == laplace_eigenvalue(5, 3.0));
  CHECK(laplace_eigenvalue(2, 7.0) == doctest::Approx(0.25 + 49.0).epsilon(1e-14));
}

TEST_CASE("purity ratio") {
  double lam = laplace_eigenvalue(4, 30.0);
  CHECK(purity_ratio(4, 30.0, std::pow(lam, 0.25)) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(purity_ratio(4, 30.0, 1.0) == doctest::Approx(0.0));
  // k=4: sup ~ t^{1/2} gives ratio -> 1/4 = k/8 - 1/4
  // the approach to k/8 - 1/4 is logarithmically slow
  double t = 1e12;
  double ratio = purity_ratio(4, t, std::sqrt(t));
  CHECK(std::abs(ratio - 0.25) < 0.02);
  CHECK(std::abs(purity_ratio(4, 1e6, std::sqrt(1e6)) - 0.25) >
        std::abs(ratio - 0.25));
  CHECK_THROWS_AS(purity_ratio(4, 0.0, 2.0), ez_error);
  CHECK_THROWS_AS(purity_ratio(4, 1.0, 0.0), ez_error);
}

TEST_CASE("growth fits on synthetic data") {
  std::vector<SweepRecord> rows;
  for (double t = 10.0; t <= 1000.0; t *= 1.07) {
    SweepRecord r;
    r.t = t;
    r.abs = 3.0 * std::sqrt(t);
    rows.push_back(r);
  }
  auto fit = fit_growth_exponent(rows, FitMode::envelope);
  CHECK(std::abs(fit.exponent - 0.5) < 1e-12);
  CHECK(fit.stderr_ < 1e-12);
  auto fit2 = fit_growth_exponent(rows, FitMode::all_points);
  CHECK(std::abs(fit2.exponent - 0.5) < 1e-12);

  for (auto& r : rows) r.abs = 7.0;
  auto flat = fit_growth_exponent(rows, FitMode::all_points);
  CHECK(std::abs(flat.exponent) < 1e-12);

  // modulated power law: the envelope fit stays near the true exponent
  for (auto& r : rows) r.abs = std::sqrt(r.t) * (1.0 + 0.3 * std::sin(r.t));
  auto env = fit_growth_exponent(rows, FitMode::envelope);
  CHECK(env.exponent > 0.45);
  CHECK(env.exponent < 0.55);

  std::vector<SweepRecord> few(rows.begin(), rows.begin() + 5);
  CHECK_THROWS_AS(fit_growth_exponent(few, FitMode::envelope), ez_error);
  std::vector<SweepRecord> narrow;
  for (double t = 10.0; t < 20.0; t += 1.0) {
    SweepRecord r;
    r.t = t;
    r.abs = t;
    narrow.push_back(r);
  }
  CHECK_THROWS_AS(fit_growth_exponent(narrow, FitMode::envelope), ez_error);
}

TEST_CASE("sweep grid contract and determinism across workers") {
  auto q = identity(3);
  Config one;
  one.workers = 1;
  Config four;
  four.workers = 4;
  auto rows1 = sweep_critical_line(q, 5.0, 9.0, 0.5, one);
  auto rows4 = sweep_critical_line(q, 5.0, 9.0, 0.5, four);
  CHECK(rows1.size() == 9);  // floor((t1-t0)/step) + 1
  std::string csv1 = sweep_to_csv(rows1);
  std::string csv4 = sweep_to_csv(rows4);
  CHECK(csv1 == csv4);

  // single row equals a direct evaluation at the same point
  auto e = evaluate(q, cplx(0.5, 7.0));
  bool found = false;
  for (auto& r : rows1)
    if (r.t == 7.0) {
      found = true;
      CHECK(r.re == doctest::Approx(e.value.real()).epsilon(1e-12));
      CHECK(r.im == doctest::Approx(e.value.imag()).epsilon(1e-12));
      CHECK(r.lambda == doctest::Approx(laplace_eigenvalue(3, 7.0)));
      CHECK(r.abs * r.abs == doctest::Approx(r.re * r.re + r.im * r.im).epsilon(1e-12));
    }
  CHECK(found);
}

TEST_CASE("mean square: halving contract and windows") {
  auto q = random_diagonal_form(2, 1.0, 2.0, 3);
  Config cfg;
  cfg.workers = 2;
  double X = 12.0;
  double m1 = mean_square(q, X, 0.1, cfg);
  double m2 = mean_square(q, X, 0.05, cfg);
  CHECK(std::abs(m1 - m2) <= 0.01 * std::abs(m2));
  CHECK(m1 > 0.0);

  // window additivity against a test-side Simpson over [X/2, X]
  double mhalf = mean_square(q, X / 2, 0.05, cfg);
  int n = 120;
  double h = (X / 2) / n;
  double acc = 0.0;
  for (int j = 0; j <= n; ++j) {
    double t = X / 2 + h * j;
    double a = std::abs(evaluate(q, cplx(0.5, t)).value);
    double w = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    acc += w * a * a;
  }
  acc *= h / 3.0;
  CHECK(std::abs((mhalf + acc) - m2) <= 0.01 * m2);

  CHECK_THROWS_AS(mean_square(q, 10.0, 0.2, cfg), ez_error);  // step > 0.25/k
}

TEST_CASE("verify dispatch and the specfun battery") {
  CHECK_THROWS_AS(verify("nonsense"), ez_error);
  auto rep = specfun_selftest();
  CHECK(rep.ok());
  CHECK(rep.cases > 200);
  CHECK(rep.to_json().find("\"suite\"") != std::string::npos);
}

TEST_CASE("expected subconvexity exponents") {
  CHECK(expected_delta(2) == doctest::Approx(1.0 / 6.0));
  CHECK(expected_delta(3) == doctest::Approx(0.25));
  CHECK(expected_delta(4) == doctest::Approx(0.5));
  CHECK(expected_delta(9) == doctest::Approx(0.5));
}
