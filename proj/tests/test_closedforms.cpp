#include <cmath>

#include "doctest.h"
#include "ez/closedforms.hpp"

using namespace ez;

namespace {

QuadraticForm identity(int k) {
  std::vector<double> g(k * k, 0.0);
  for (int i = 0; i < k; ++i) g[i * k + i] = 1.0;
  return make_form(k, g);
}

double relc(cplx got, cplx want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace

TEST_CASE("Jacobi four-square divisor sum matches the counts up to 500") {
  auto rc = representation_counts(4, 500);
  for (int64_t n = 1; n <= 500; ++n) {
    int64_t divisor_sum = 0;
    for (int64_t d = 1; d <= n; ++d)
      if (n % d == 0 && d % 4 != 0) divisor_sum += d;
    CHECK(rc.r(n) == 8 * divisor_sum);
  }
}

TEST_CASE("closed form k=4: the lattice oracle picks the Jacobi variant") {
  CHECK(closed_form_k4_adopted_jacobi());
  auto direct = evaluate_direct(identity(4), cplx(2.0), 1e-6);
  // adopted form
  CHECK(std::abs(closed_form_k4(cplx(2.0)) - direct.value) < 1e-5);
  // the printed alternative 8 (1 - 2^{1-2s}) zeta(2s) zeta(1-2s) misses badly
  cplx printed = 8.0 * (1.0 - std::pow(2.0, 1.0 - 2.0 * 2.0)) * riemann_zeta(cplx(4.0)) *
                 riemann_zeta(cplx(-3.0));
  CHECK(std::abs(printed - direct.value) > 0.5 * std::abs(direct.value));
}

TEST_CASE("closed form k=4 on and off the critical line") {
  auto e = evaluate(identity(4), cplx(0.5, 10.0));
  CHECK(relc(closed_form_k4(cplx(0.5, 10.0)), e.value) < 1e-8);
  // continuous through s = 1/2 (deflated zeta limit); the limit value is
  // 8 * ln4 * zeta(0) = -4 ln 4
  cplx at_half = closed_form_k4(cplx(0.5));
  cplx near_half = closed_form_k4(cplx(0.5 + 1e-7));
  CHECK(std::abs(at_half - near_half) < 1e-5 * std::abs(at_half));
  CHECK(at_half.real() == doctest::Approx(-4.0 * std::log(4.0)).epsilon(1e-9));
  CHECK(std::abs(at_half.imag()) < 1e-10);
}

TEST_CASE("eisenstein closed forms for k = 4, 6, 8") {
  // k=4 reduces to the adopted closed form
  for (cplx s : {cplx(2.0), cplx(0.5, 7.0), cplx(1.3, -2.0)}) {
    CHECK(relc(eisenstein_mod4_0(4, s), closed_form_k4(s)) < 1e-10);
  }
  // k=8 matches the direct oracle in the convergence region
  auto d8 = evaluate_direct(identity(8), cplx(2.0), 1e-8);
  CHECK(relc(eisenstein_mod4_0(8, cplx(2.0)), d8.value) < 1e-8);
  // k=6 two-term formula with chi_{-4}
  auto d6 = evaluate_direct(identity(6), cplx(2.0), 1e-8);
  CHECK(relc(eisenstein_mod4_2(6, cplx(2.0)), d6.value) < 1e-8);
  CHECK(kronecker_chi(-4, 3) == -1);
  CHECK_THROWS_AS(eisenstein_mod4_0(6, cplx(2.0)), ez_error);
  CHECK_THROWS_AS(eisenstein_mod4_2(10, cplx(2.0)), ez_error);
}

TEST_CASE("closed-form Dirichlet coefficients equal r_k(n) for n <= 64") {
  for (int k : {4, 6, 8}) {
    auto rc = representation_counts(k, 64);
    auto coeffs = closed_form_dirichlet_coeffs(k, 64);
    for (int64_t n = 1; n <= 64; ++n)
      CHECK(std::abs(coeffs[n - 1] - static_cast<double>(rc.r(n))) < 1e-9);
  }
  // c_6 = 4 exactly (n = 1 coefficient matching with r_6(1) = 12)
  auto c6 = closed_form_dirichlet_coeffs(6, 1);
  CHECK(c6[0] == doctest::Approx(12.0).epsilon(1e-12));
}

TEST_CASE("cohen series: ratio constancy defines c_5") {
  CohenParams p = cohen_params(5);
  CHECK(p.alpha == doctest::Approx(-1.0));
  CHECK(p.beta == doctest::Approx(2.0));
  CHECK(p.beta == doctest::Approx(1.0 - p.alpha));
  CHECK(std::abs(p.w(cplx(1.0)) - cplx(1.0)) < 1e-14);

  auto id5 = identity(5);
  std::vector<cplx> ratios;
  for (int im = 0; im <= 4; ++im) {
    cplx s(2.0, static_cast<double>(im));
    auto direct = evaluate_direct(id5, s, 1e-8);
    auto series = cohen_series(5, s, 2000);
    CHECK(std::abs(series.value) > 0.0);
    ratios.push_back(direct.value / series.value);
  }
  cplx mean = 0.0;
  for (auto& r : ratios) mean += r;
  mean /= 5.0;
  for (auto& r : ratios) CHECK(std::abs(r - mean) / std::abs(mean) < 1e-5);
  CHECK(std::abs(mean) > 1e-6);

  // tail-bound contract: growing D_max moves the value within the bound
  auto a = cohen_series(5, cplx(2.0), 1000);
  auto b = cohen_series(5, cplx(2.0), 2000);
  CHECK(std::abs(a.value - b.value) <= a.tail_bound);

  CHECK_THROWS_AS(cohen_series(5, cplx(0.9), 1000), ez_error);  // not convergent
  CHECK_THROWS_AS(cohen_series(4, cplx(2.0), 1000), ez_error);  // bad k
  CHECK_THROWS_AS(cohen_series(5, cplx(2.0), 50), ez_error);    // D_max too small
}

TEST_CASE("cohen series k=7 runs on negative discriminants") {
  auto id7 = identity(7);
  cplx s(2.0, 1.0);
  auto direct = evaluate_direct(id7, s, 1e-8);
  auto s1 = cohen_series(7, s, 1000);
  auto s2 = cohen_series(7, cplx(2.0, 3.0), 1000);
  auto d2 = evaluate_direct(id7, cplx(2.0, 3.0), 1e-8);
  cplx r1 = direct.value / s1.value;
  cplx r2 = d2.value / s2.value;
  CHECK(std::abs(r1 - r2) / std::abs(r1) < 1e-5);
}

TEST_CASE("fit_constants contracts") {
  std::vector<cplx> model = {cplx(1.0, 0.2), cplx(2.0, -0.3), cplx(0.5, 0.9), cplx(1.5, 0.0)};
  std::vector<cplx> powers = {0.5, 0.25, 0.125, 0.0625};
  std::vector<cplx> oracle(4);
  for (int i = 0; i < 4; ++i) oracle[i] = 3.0 * model[i];
  auto fit = fit_constants(oracle, model, powers, 0, true, 1e-10);
  CHECK(std::abs(fit.c - cplx(3.0)) < 1e-12);
  for (double r : fit.residuals) CHECK(r < 1e-12);

  for (int i = 0; i < 4; ++i) oracle[i] = model[i] * (1.0 + 1e-12);
  fit = fit_constants(oracle, model, powers, 0, true, 1e-10);
  CHECK(std::abs(fit.c - cplx(1.0)) < 1e-11);

  // incompatible ratios at degree 0 must fail
  oracle = {model[0], 2.0 * model[1], model[2], 2.0 * model[3]};
  CHECK_THROWS_AS(fit_constants(oracle, model, powers, 0, true, 1e-6), ez_error);

  // singular design: identical powers cannot support degree 1
  std::vector<cplx> m2 = {cplx(1.0), cplx(1.0), cplx(1.0)};
  std::vector<cplx> p2 = {cplx(0.5), cplx(0.5), cplx(0.5)};
  std::vector<cplx> o2 = {cplx(1.0), cplx(1.0), cplx(1.0)};
  CHECK_THROWS_AS(fit_constants(o2, m2, p2, 1, true, 1e-6), ez_error);
}
