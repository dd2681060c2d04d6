#pragma once

#include <optional>
#include <string>

#include "ez/closedforms.hpp"
#include "ez/epstein.hpp"
#include "ez/theta.hpp"

namespace ez {

struct SweepRecord {
  double t = 0.0;
  double re = 0.0, im = 0.0, abs = 0.0;
  double lambda = 0.0;
  double err = 0.0;
  bool failed = false;
};

// Laplacian eigenvalue of the degenerate Eisenstein series:
// (k^3 - k)/24 + k (k-1) t^2 / 2.
double laplace_eigenvalue(int k, double t);

// log(sup_abs) / log(lambda(t)); reported against the target k/8 - 1/4.
double purity_ratio(int k, double t, double sup_abs);

// Critical-line sweep at t0, t0+step, ...; rows independent and
// deterministic, so worker count never changes the output.
std::vector<SweepRecord> sweep_critical_line(const QuadraticForm& q, double t0, double t1,
                                             double step, const Config& cfg = {});

std::string sweep_to_csv(const std::vector<SweepRecord>& rows);

enum class FitMode { envelope, all_points };

struct GrowthFit {
  double exponent = 0.0;
  double stderr_ = 0.0;
  int n = 0;
  FitMode mode = FitMode::envelope;
};

// Least-squares slope of log|E| (or its running max at envelope breakpoints)
// against log t. Needs >= 8 usable records spanning a decade.
GrowthFit fit_growth_exponent(const std::vector<SweepRecord>& records, FitMode mode);

// Composite-Simpson estimate of int_0^X |E(Z, 1/2 + it)|^2 dt.
// step <= 0.25/k required (StepTooCoarse).
double mean_square(const QuadraticForm& q, double X, double step, const Config& cfg = {});

struct VerifyReport {
  std::string suite;
  int cases = 0;
  int passed = 0;
  double max_residual = 0.0;
  std::string detail;
  bool ok() const { return cases == passed; }
  std::string to_json() const;
};

// Invariant batteries: fe, unimodular, closedform, cohen, oracle.
VerifyReport verify(const std::string& suite, const Config& cfg = {});

// Hidden specfun battery behind `ez specfun selftest`.
VerifyReport specfun_selftest();

// Reporting-only subconvexity exponents from the growth theorem:
// delta_2 = 1/6, delta_3 = 1/4, delta_k = 1/2 for k >= 4.
double expected_delta(int k);

}  // namespace ez
