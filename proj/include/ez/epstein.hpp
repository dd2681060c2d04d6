#pragma once

#include "ez/forms.hpp"
#include "ez/lattice.hpp"
#include "ez/specfun.hpp"

namespace ez {

// One evaluation of E(Z, s) with its truncation radius, number of lattice
// points consumed, and an absolute error estimate.
struct EvalResult {
  cplx value;
  double err = 0.0;
  double radius = 0.0;
  double points = 0.0;
};

struct EvalOptions {
  Config config;
  bool use_cache = true;       // aggregate+cache values (sweeps); else stream
  double radius_override = 0;  // > 0 forces the truncation radius (tests)
  double rotation_scale = 1;   // scales the contour-rotation budget (tests)
  int force_path = 0;          // 0 auto, 1 exact kernels, 2 streamed tables
};

// Residue of E(Z, s) at s = 1: 2 pi^{k/2} / (k Gamma(k/2) sqrt(det Z)).
double residue_at_1(const QuadraticForm& q);

// Direct Dirichlet sum over Q(x) <= R, absolute-convergence oracle.
// Requires Re s >= 1 + 1/k + margin; the error field dominates the analytic
// tail bound sum_{Q(x)>R} Q(x)^{-k sigma/2}.
EvalResult evaluate_direct(const QuadraticForm& q, cplx s, double tail_eps,
                           const EvalOptions& opt = {});

// Main path, valid for all s outside {0, 1}: the incomplete-gamma lattice
// representation with both pole terms built in. Accurate to the reported
// absolute err.
EvalResult evaluate(const QuadraticForm& q, cplx s, const EvalOptions& opt = {});

// Completed function Lambda(s) = Gamma_R(ks) E(Z, s), computed from the same
// representation without forming E (no Gamma_R overflow cancellation).
cplx completed_lambda(const QuadraticForm& q, cplx s, const EvalOptions& opt = {});

// Smoothed approximate functional equation at s = 1/2 + it, |t| >= 10:
// two weighted lattice sums plus the exact polar correction terms.
EvalResult evaluate_afe(const QuadraticForm& q, double t, const EvalOptions& opt = {});

// Smoothing weight W_t^{+-}(y): quadrature on the vertical line Re u = 1,
// tabulated over log y for the lattice folds.
class WeightTable {
 public:
  // sign = +1 builds W^+ (s-side), -1 builds W^- ((1-s)-side).
  WeightTable(int k, double t, int sign, double y_min, double y_max);
  cplx operator()(double y) const;
  double y_cutoff() const { return y_max_; }

 private:
  double x0_, h_, y_max_;
  std::vector<cplx> grid_;
};

// Truncation point: |W(y)| <= eps once y >= this (decay law of the shifted
// contour, e^{-L^2/4} with L = log(y / Y0)).
double weight_cutoff_y(int k, double t, double eps);

}  // namespace ez
