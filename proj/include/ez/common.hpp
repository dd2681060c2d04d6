#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ez {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Error kinds named after the failure modes of the public operations.
enum class errc {
  not_symmetric,
  not_positive_definite,
  bad_dimension,
  bad_range,
  cutoff_too_large,
  budget,
  pole,
  envelope_exceeded,
  not_convergent,
  regime,
  nonpositive_real_part,
  step_too_coarse,
  fit_failed,
  singular,
  span_too_small,
  bad_discriminant,
  bad_k,
  degenerate_input,
  unknown_suite,
  bad_input,
};

const char* errc_name(errc c);

class ez_error : public std::runtime_error {
 public:
  ez_error(errc kind, const std::string& msg)
      : std::runtime_error(std::string(errc_name(kind)) + ": " + msg), kind_(kind) {}
  errc kind() const { return kind_; }

 private:
  errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& msg) { throw ez_error(kind, msg); }

// Evaluation knobs shared by the evaluators and the harness.
struct Config {
  int precision = 15;        // decimal digits P; governs tail cutoffs
  double budget = 1e9;       // max predicted lattice points per enumeration
  int workers = 1;           // data-parallel grid workers (sweeps, quadrature)
};

// Neumaier compensated accumulator.
class KahanSum {
 public:
  void add(double x) {
    double t = s_ + x;
    if (std::abs(s_) >= std::abs(x))
      c_ += (s_ - t) + x;
    else
      c_ += (x - t) + s_;
    s_ = t;
  }
  double value() const { return s_ + c_; }

 private:
  double s_ = 0.0, c_ = 0.0;
};

class KahanSumC {
 public:
  void add(const cplx& z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }

 private:
  KahanSum re_, im_;
};

// splitmix64: portable seeded bit generator (identical output on every platform).
struct SplitMix64 {
  uint64_t state;
  explicit SplitMix64(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0,1) built from the top 53 bits
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // uniform integer in [0, n)
  uint64_t below(uint64_t n) { return next() % n; }
};

// Runs fn(i) for i in [0,n) on `workers` threads; fn must only write to
// per-index slots so the result is independent of the schedule.
void parallel_for_index(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

// 16-point Gauss-Legendre rule on [-1,1].
struct GL16 {
  static const std::vector<double>& nodes();
  static const std::vector<double>& weights();
};

std::string format_double(double v);  // shortest round-trip-exact decimal

}  // namespace ez
