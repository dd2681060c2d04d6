#include "ez/theta.hpp"

#include <algorithm>
#include <cmath>

#include "ez/common.hpp"

namespace ez {

cplx theta_eval(const QuadraticForm& q, cplx s, const Config& cfg) {
  if (!(s.real() > 0.0)) fail(errc::nonpositive_real_part, "theta needs Re s > 0");
  double R = (cfg.precision * 2.302585092994046 + 5.0) / s.real();
  double diag_min = q.gram(0, 0);
  for (int i = 1; i < q.k(); ++i) diag_min = std::min(diag_min, q.gram(i, i));
  R = std::max(R, diag_min * 1.000001);  // keep the minimal vectors in range
  auto arr = LatticeCache::instance().get(q, R, cfg.budget);
  KahanSumC acc;
  std::size_t hi = std::upper_bound(arr->values.begin(), arr->values.end(), R) - arr->values.begin();
  for (std::size_t i = 0; i < hi; ++i) {
    double v = arr->values[i];
    double mod = arr->mults[i] * std::exp(-s.real() * v);
    double ph = -s.imag() * v;
    acc.add(mod * cplx(std::cos(ph), std::sin(ph)));
  }
  return acc.value();
}

ThetaMomentRecord theta_fourth_moment(const QuadraticForm& q, double T, double R, double step,
                                      const Config& cfg) {
  if (T < 1.0) fail(errc::bad_range, "T must be >= 1");
  if (R <= 0.0) fail(errc::bad_range, "R must be positive");
  double max_step = 0.1 / (T * std::log(T + 2.0));
  if (step > max_step * (1.0 + 1e-12))
    fail(errc::step_too_coarse, "step must be <= 0.1 / (T ln(T+2)) = " + std::to_string(max_step));

  int64_t n = static_cast<int64_t>(std::ceil(R / step));
  if (n < 100) fail(errc::step_too_coarse, "need at least 100 subintervals");
  if (n % 2) ++n;
  double h = R / static_cast<double>(n);

  double cutoff = (cfg.precision * 2.302585092994046 + 5.0) * T;
  auto arr = LatticeCache::instance().get(q, cutoff, cfg.budget);
  std::size_t m = std::upper_bound(arr->values.begin(), arr->values.end(), cutoff) -
                  arr->values.begin();
  if (static_cast<double>(n + 1) * static_cast<double>(m) > 40.0 * cfg.budget)
    fail(errc::budget, "tau grid times lattice size exceeds the budget");

  std::vector<double> values(arr->values.begin(), arr->values.begin() + m);
  std::vector<double> weights(m);
  for (std::size_t i = 0; i < m; ++i) weights[i] = arr->mults[i] * std::exp(-values[i] / T);

  // |theta|^4 on the Simpson grid; tau-blocks are independent and merged in
  // index order, so the worker count never changes the result
  std::vector<double> y(n + 1);
  const int64_t block = 2048;
  int64_t nblocks = (n + 1 + block - 1) / block;
  parallel_for_index(static_cast<std::size_t>(nblocks), cfg.workers, [&](std::size_t bi) {
    int64_t j0 = static_cast<int64_t>(bi) * block;
    int64_t j1 = std::min<int64_t>(j0 + block, n + 1);
    // phase stepping within the block: rotor_i *= e^{-i h v_i} per node
    std::vector<double> cr(m), ci(m), sr(m), si(m);
    double tau0 = R + h * static_cast<double>(j0);
    for (std::size_t i = 0; i < m; ++i) {
      double ph0 = -tau0 * values[i];
      cr[i] = std::cos(ph0);
      ci[i] = std::sin(ph0);
      double phs = -h * values[i];
      sr[i] = std::cos(phs);
      si[i] = std::sin(phs);
    }
    for (int64_t j = j0; j < j1; ++j) {
      double re = 0.0, im = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        re += weights[i] * cr[i];
        im += weights[i] * ci[i];
        double nr = cr[i] * sr[i] - ci[i] * si[i];
        ci[i] = cr[i] * si[i] + ci[i] * sr[i];
        cr[i] = nr;
      }
      double a2 = re * re + im * im;
      y[j] = a2 * a2;
    }
  });

  KahanSum integral;
  integral.add(y[0]);
  integral.add(y[n]);
  for (int64_t j = 1; j < n; ++j) integral.add((j % 2 ? 4.0 : 2.0) * y[j]);

  ThetaMomentRecord rec;
  rec.T = T;
  rec.R = R;
  rec.step = step;
  rec.samples = static_cast<int64_t>(std::floor(R / step));
  rec.moment = integral.value() * h / 3.0;
  return rec;
}

}  // namespace ez
