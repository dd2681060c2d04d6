#include <cmath>

#include "doctest.h"
#include "ez/theta.hpp"

using namespace ez;

namespace {

QuadraticForm identity(int k) {
  std::vector<double> g(k * k, 0.0);
  for (int i = 0; i < k; ++i) g[i * k + i] = 1.0;
  return make_form(k, g);
}

}  // namespace

TEST_CASE("theta at s = pi against the one-dimensional sum") {
  // sum_{x in Z} e^{-pi x^2} stabilizes to 15 digits within 10 terms
  double one_dim = 1.0;
  for (int n = 1; n <= 10; ++n) one_dim += 2.0 * std::exp(-kPi * n * n);
  double want = one_dim * one_dim - 1.0;
  cplx got = theta_eval(identity(2), cplx(kPi));
  CHECK(std::abs(got.real() - want) < 1e-13);
  CHECK(std::abs(got.imag()) < 1e-15);
  CHECK(got.real() == doctest::Approx(0.1803407).epsilon(1e-6));
}

TEST_CASE("theta conjugation and leading-term dominance") {
  auto q = random_form(3, 0.8, 1.6, 99);
  cplx s(0.8, 2.7);
  CHECK(std::abs(theta_eval(q, std::conj(s)) - std::conj(theta_eval(q, s))) < 1e-14);

  // Re s -> infinity: theta ~ (#minimal vectors) e^{-s min Q}; the log-ratio
  // between s = 50 and s = 60 recovers min Q
  auto id2 = identity(2);
  double t50 = theta_eval(id2, cplx(50.0)).real();
  double t60 = theta_eval(id2, cplx(60.0)).real();
  CHECK(std::log(t50 / t60) == doctest::Approx(10.0).epsilon(1e-4));
  CHECK(t50 == doctest::Approx(4.0 * std::exp(-50.0)).epsilon(1e-3));

  CHECK_THROWS_AS(theta_eval(id2, cplx(-0.1, 3.0)), ez_error);
}

TEST_CASE("Poisson transformation (the engine of the functional equation)") {
  for (uint64_t seed : {4u, 9u}) {
    auto q = random_form(2 + seed % 2, 0.8, 1.5, seed);
    auto qi = inverse_form(q);
    for (double s : {0.5, 1.0, 2.2, 5.0}) {
      cplx lhs = theta_eval(q, cplx(s)) + 1.0;
      cplx rhs = std::pow(kPi / s, 0.5 * q.k()) / std::sqrt(q.det()) *
                 (theta_eval(qi, cplx(kPi * kPi / s)) + 1.0);
      CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs));
    }
  }
}

TEST_CASE("modulus bound and growth band") {
  auto q = random_form(2, 0.9, 1.4, 12);
  double T = 20.0;
  double bound = theta_eval(q, cplx(1.0 / T)).real();
  for (double tau : {0.3, 2.0, 11.0, 47.0}) {
    CHECK(std::abs(theta_eval(q, cplx(1.0 / T, tau))) <= bound * (1.0 + 1e-12));
  }
  // theta(Q, 1/T) / T^{k/2} stays in a narrow band
  double lo = 1e308, hi = 0.0;
  for (double t : {10.0, 30.0, 100.0, 300.0, 1000.0}) {
    double ratio = theta_eval(q, cplx(1.0 / t)).real() / std::pow(t, 0.5 * q.k());
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(hi / lo < 4.0);
}

TEST_CASE("fourth moment basics") {
  auto q = make_form(3, {1.0, 0, 0, 0, 1.3, 0, 0, 0, 1.7});
  // modulus bound at T = 1: moment <= theta(Q,1)^4 R
  double b = theta_eval(q, cplx(1.0)).real();
  auto rec = theta_fourth_moment(q, 1.0, 0.5, 1e-3);
  CHECK(rec.moment >= 0.0);
  CHECK(rec.moment <= std::pow(b, 4) * 0.5 * 1.0001);
  CHECK(rec.samples >= 100);

  // halving the step moves the Simpson estimate by well under 1%
  auto a1 = theta_fourth_moment(q, 5.0, 5.0, 1e-3);
  auto a2 = theta_fourth_moment(q, 5.0, 5.0, 5e-4);
  CHECK(std::abs(a1.moment - a2.moment) <= 0.01 * std::abs(a2.moment));

  // R -> 0: the moment vanishes with the window
  auto tiny = theta_fourth_moment(q, 2.0, 1e-3, 1e-5);
  CHECK(tiny.moment <= std::pow(theta_eval(q, cplx(0.5)).real(), 4) * 1e-3 * 1.001);

  CHECK_THROWS_AS(theta_fourth_moment(q, 40.0, 40.0, 1.0), ez_error);  // too coarse
  CHECK_THROWS_AS(theta_fourth_moment(q, 2.0, 1e-4, 1e-5), ez_error);  // < 100 samples
}
