#include "ez/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "ez/lattice_enum.hpp"

namespace ez {

namespace {

double unit_ball_volume(int k) {
  // V_k = pi^{k/2} / Gamma(k/2 + 1)
  return std::pow(kPi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

void check_budget(const QuadraticForm& q, double R, double budget) {
  double predicted = predicted_point_count(q, R);
  if (predicted > budget)
    fail(errc::cutoff_too_large, "predicted " + std::to_string(predicted) +
                                     " lattice points exceeds budget " + std::to_string(budget));
}

double scaled_identity_impl(const QuadraticForm& q) {
  double c = q.gram(0, 0);
  for (int i = 0; i < q.k(); ++i)
    for (int j = 0; j < q.k(); ++j) {
      double want = (i == j) ? c : 0.0;
      if (std::abs(q.gram(i, j) - want) > 1e-14 * std::max(1.0, c)) return 0.0;
    }
  return c;
}

}  // namespace

double scaled_identity_factor(const QuadraticForm& q) { return scaled_identity_impl(q); }

double predicted_point_count(const QuadraticForm& q, double R) {
  if (R <= 0) return 0.0;
  return unit_ball_volume(q.k()) * std::pow(R, 0.5 * q.k()) / std::sqrt(q.det()) + 16.0;
}

void enumerate_below(const QuadraticForm& q, double R,
                     const std::function<void(std::span<const int64_t>, double)>& emit,
                     double budget) {
  if (R < 0) fail(errc::bad_range, "cutoff must be >= 0");
  if (R == 0) return;
  check_budget(q, R, budget);
  detail::EnumContext ctx(q);
  enumerate_full(ctx, R, [&](const int64_t* x, double v) {
    emit(std::span<const int64_t>(x, static_cast<std::size_t>(q.k())), v);
  });
}

void enumerate_values(const QuadraticForm& q, double R,
                      const std::function<void(double, double)>& emit, double budget) {
  if (R < 0) fail(errc::bad_range, "cutoff must be >= 0");
  if (R == 0) return;
  check_budget(q, R, budget);
  detail::EnumContext ctx(q);
  enumerate_half_values(ctx, R, [&](double v) { emit(v, 2.0); });
}

RepCounts representation_counts(int k, int64_t N, double budget) {
  if (k < 2) fail(errc::bad_dimension, "k must be >= 2");
  if (N < 1) fail(errc::bad_range, "N must be >= 1");
  if (static_cast<double>(N) * k > budget || N > (int64_t{1} << 40))
    fail(errc::budget, "representation table too large");

  // theta-series coefficients including n = 0; r_{a+b} = r_a (*) r_b.
  std::vector<int64_t> one(N + 1, 0);
  one[0] = 1;
  for (int64_t m = 1; m * m <= N; ++m) one[m * m] = 2;

  auto convolve = [&](const std::vector<int64_t>& a, const std::vector<int64_t>& b) {
    std::vector<int64_t> out(N + 1, 0);
    for (int64_t i = 0; i <= N; ++i) {
      if (a[i] == 0) continue;
      __int128 ai = a[i];
      for (int64_t j = 0; i + j <= N; ++j) {
        if (b[j] == 0) continue;
        __int128 acc = static_cast<__int128>(out[i + j]) + ai * b[j];
        if (acc > INT64_MAX) fail(errc::budget, "representation count overflows 64 bits");
        out[i + j] = static_cast<int64_t>(acc);
      }
    }
    return out;
  };

  std::vector<int64_t> result(N + 1, 0);
  result[0] = 1;
  std::vector<int64_t> base = one;
  int e = k;
  while (e > 0) {
    if (e & 1) result = convolve(result, base);
    e >>= 1;
    if (e > 0) base = convolve(base, base);
  }

  RepCounts rc;
  rc.k = k;
  rc.N = N;
  rc.counts.assign(result.begin() + 1, result.end());
  return rc;
}

ValueArray build_value_array(const QuadraticForm& q, double R, double budget) {
  ValueArray out;
  out.R = R;
  out.integral = q.integer_valued();
  if (R <= 0) return out;

  double ident = scaled_identity_impl(q);
  if (ident > 0) {
    // Exact counts from the theta-power convolution; no enumeration needed.
    int64_t N = static_cast<int64_t>(std::floor(R / ident + 1e-9));
    if (N >= 1) {
      RepCounts rc = representation_counts(q.k(), N, budget);
      out.integral = true;
      out.values.reserve(N);
      out.mults.reserve(N);
      double total = 0.0;
      for (int64_t n = 1; n <= N; ++n) {
        if (rc.counts[n - 1] == 0) continue;
        out.values.push_back(ident * static_cast<double>(n));
        out.mults.push_back(static_cast<double>(rc.counts[n - 1]));
        total += static_cast<double>(rc.counts[n - 1]);
      }
      out.point_count = total;
    }
    return out;
  }

  check_budget(q, R, budget);
  detail::EnumContext ctx(q);
  if (out.integral) {
    int64_t N = static_cast<int64_t>(std::floor(R + 1e-9));
    std::vector<double> bins(static_cast<std::size_t>(N) + 1, 0.0);
    detail::enumerate_half_values(ctx, R, [&](double v) {
      int64_t n = static_cast<int64_t>(std::llround(v));
      if (n >= 1 && n <= N && std::abs(v - static_cast<double>(n)) < 1e-6 * (1.0 + v))
        bins[n] += 2.0;
    });
    double total = 0.0;
    for (int64_t n = 1; n <= N; ++n) {
      if (bins[n] == 0.0) continue;
      out.values.push_back(static_cast<double>(n));
      out.mults.push_back(bins[n]);
      total += bins[n];
    }
    out.point_count = total;
    return out;
  }

  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(std::min(budget, predicted_point_count(q, R) / 2 + 64)));
  detail::enumerate_half_values(ctx, R, [&](double v) { vals.push_back(v); });
  std::sort(vals.begin(), vals.end());
  double total = 0.0;
  for (std::size_t i = 0; i < vals.size();) {
    std::size_t j = i + 1;
    while (j < vals.size() && vals[j] == vals[i]) ++j;
    out.values.push_back(vals[i]);
    out.mults.push_back(2.0 * static_cast<double>(j - i));
    total += 2.0 * static_cast<double>(j - i);
    i = j;
  }
  out.point_count = total;
  return out;
}

struct LatticeCache::Impl {
  std::mutex mu;
  std::map<uint64_t, std::shared_ptr<const ValueArray>> entries;
};

LatticeCache::LatticeCache() : impl_(new Impl) {}
LatticeCache::~LatticeCache() = default;

LatticeCache& LatticeCache::instance() {
  static LatticeCache cache;
  return cache;
}

std::shared_ptr<const ValueArray> LatticeCache::get(const QuadraticForm& q, double R,
                                                    double budget) {
  uint64_t key = q.digest();
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    auto it = impl_->entries.find(key);
    if (it != impl_->entries.end() && it->second->R >= R) return it->second;
  }
  // Build outside the lock; last writer wins with a value-identical entry.
  auto built = std::make_shared<const ValueArray>(build_value_array(q, R, budget));
  std::lock_guard<std::mutex> lock(impl_->mu);
  auto& slot = impl_->entries[key];
  if (!slot || slot->R < built->R) slot = built;
  return slot;
}

void LatticeCache::clear() {
  std::lock_guard<std::mutex> lock(impl_->mu);
  impl_->entries.clear();
}

}  // namespace ez
