#pragma once

// Template core of the Fincke-Pohst enumeration. Kept header-only so the hot
// lattice folds in the evaluators inline their per-point work.

#include <cmath>
#include <cstdint>
#include <vector>

#include "ez/forms.hpp"

namespace ez::detail {

struct EnumContext {
  int k;
  std::vector<double> udiag2;  // U_ii^2
  std::vector<double> mu;      // mu[i*k+j] = U_ij / U_ii for j > i
  explicit EnumContext(const QuadraticForm& q) : k(q.k()) {
    const auto& u = q.chol_upper();
    udiag2.resize(k);
    mu.assign(static_cast<std::size_t>(k) * k, 0.0);
    for (int i = 0; i < k; ++i) {
      double d = u[i * k + i];
      udiag2[i] = d * d;
      for (int j = i + 1; j < k; ++j) mu[i * k + j] = u[i * k + j] / d;
    }
  }
};

// Full enumeration in lexicographic order on (x_{k-1}, ..., x_0).
// Emit signature: emit(const int64_t* coords, double value).
template <class Emit>
void enumerate_full(const EnumContext& ctx, double R, Emit&& emit) {
  const int k = ctx.k;
  std::vector<int64_t> x(k, 0);
  std::vector<double> center(k, 0.0), partial(k + 1, 0.0);
  // walk levels k-1 .. 0; partial[i] = sum of completed rows above level i
  struct Frame {
    int64_t cur, hi;
  };
  std::vector<Frame> frame(k);
  int level = k - 1;
  auto enter = [&](int i) -> bool {
    double c = 0.0;
    for (int j = i + 1; j < k; ++j) c -= ctx.mu[i * k + j] * static_cast<double>(x[j]);
    double room = R - partial[i + 1];
    if (room < 0) return false;
    double w = std::sqrt(room / ctx.udiag2[i]);
    int64_t lo = static_cast<int64_t>(std::ceil(c - w - 1e-12));
    int64_t hi = static_cast<int64_t>(std::floor(c + w + 1e-12));
    if (lo > hi) return false;
    center[i] = c;
    frame[i] = {lo, hi};
    return true;
  };
  if (!enter(level)) return;
  for (;;) {
    Frame& f = frame[level];
    if (f.cur > f.hi) {
      ++level;
      if (level >= k) break;
      ++frame[level].cur;
      continue;
    }
    x[level] = f.cur;
    double d = static_cast<double>(f.cur) - center[level];
    double val = partial[level + 1] + ctx.udiag2[level] * d * d;
    if (val > R + 1e-12 * (1.0 + R)) {  // numerically safe reject
      ++f.cur;
      continue;
    }
    if (level == 0) {
      bool zero = true;
      for (int j = 0; j < k; ++j)
        if (x[j] != 0) {
          zero = false;
          break;
        }
      if (!zero) emit(x.data(), val);
      ++f.cur;
    } else {
      partial[level] = val;
      --level;
      if (!enter(level)) {
        ++level;
        ++frame[level].cur;
      }
    }
  }
}

// Half-lattice: one representative of each {x,-x} with multiplicity 2 (the
// representative has its highest-index nonzero coordinate positive).
// Emit signature: emit(double value).
template <class Emit>
void enumerate_half_values(const EnumContext& ctx, double R, Emit&& emit) {
  const int k = ctx.k;
  std::vector<int64_t> x(k, 0);
  std::vector<double> center(k, 0.0), partial(k + 1, 0.0);
  struct Frame {
    int64_t cur, hi;
  };
  std::vector<Frame> frame(k);
  std::vector<char> zero_above(k + 1, 1);
  int level = k - 1;
  auto enter = [&](int i) -> bool {
    double c = 0.0;
    if (!zero_above[i + 1])
      for (int j = i + 1; j < k; ++j) c -= ctx.mu[i * k + j] * static_cast<double>(x[j]);
    double room = R - partial[i + 1];
    if (room < 0) return false;
    double w = std::sqrt(room / ctx.udiag2[i]);
    int64_t lo = zero_above[i + 1] ? 0 : static_cast<int64_t>(std::ceil(c - w - 1e-12));
    int64_t hi = static_cast<int64_t>(std::floor(c + w + 1e-12));
    if (lo > hi) return false;
    center[i] = c;
    frame[i] = {lo, hi};
    return true;
  };
  if (!enter(level)) return;
  for (;;) {
    Frame& f = frame[level];
    if (f.cur > f.hi) {
      ++level;
      if (level >= k) break;
      ++frame[level].cur;
      continue;
    }
    x[level] = f.cur;
    double d = static_cast<double>(f.cur) - center[level];
    double val = partial[level + 1] + ctx.udiag2[level] * d * d;
    if (val > R + 1e-12 * (1.0 + R)) {
      ++f.cur;
      continue;
    }
    if (level == 0) {
      if (!(zero_above[1] && f.cur == 0)) emit(val);
      ++f.cur;
    } else {
      partial[level] = val;
      zero_above[level] = zero_above[level + 1] && (f.cur == 0);
      --level;
      if (!enter(level)) {
        ++level;
        ++frame[level].cur;
      }
    }
  }
}

}  // namespace ez::detail
