#include "ez/common.hpp"

#include <atomic>
#include <cstdio>
#include <mutex>
#include <thread>

namespace ez {

const char* errc_name(errc c) {
  switch (c) {
    case errc::not_symmetric: return "NotSymmetric";
    case errc::not_positive_definite: return "NotPositiveDefinite";
    case errc::bad_dimension: return "BadDimension";
    case errc::bad_range: return "BadRange";
    case errc::cutoff_too_large: return "CutoffTooLarge";
    case errc::budget: return "Budget";
    case errc::pole: return "Pole";
    case errc::envelope_exceeded: return "EnvelopeExceeded";
    case errc::not_convergent: return "NotConvergent";
    case errc::regime: return "RegimeError";
    case errc::nonpositive_real_part: return "NonpositiveRealPart";
    case errc::step_too_coarse: return "StepTooCoarse";
    case errc::fit_failed: return "FitFailed";
    case errc::singular: return "Singular";
    case errc::span_too_small: return "SpanTooSmall";
    case errc::bad_discriminant: return "BadDiscriminant";
    case errc::bad_k: return "BadK";
    case errc::degenerate_input: return "DegenerateInput";
    case errc::unknown_suite: return "UnknownSuite";
    case errc::bad_input: return "BadInput";
  }
  return "Error";
}

void parallel_for_index(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) break;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  int nthreads = std::min<std::size_t>(workers, n);
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
}

namespace {

// Newton iteration on Legendre P_16; nodes are symmetric, converge in a few steps.
void build_gl16(std::vector<double>& x, std::vector<double>& w) {
  const int n = 16;
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n / 2; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    double p0 = 1.0, p1 = t;
    for (int j = 2; j <= n; ++j) {
      double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (t * p1 - p0) / (t * t - 1.0);
    x[i] = -t;
    x[n - 1 - i] = t;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

std::once_flag g_gl_once;
std::vector<double> g_gl_x, g_gl_w;

void ensure_gl16() {
  std::call_once(g_gl_once, [] { build_gl16(g_gl_x, g_gl_w); });
}

}  // namespace

const std::vector<double>& GL16::nodes() {
  ensure_gl16();
  return g_gl_x;
}

const std::vector<double>& GL16::weights() {
  ensure_gl16();
  return g_gl_w;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace ez
