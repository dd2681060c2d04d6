#pragma once

#include "ez/forms.hpp"
#include "ez/lattice.hpp"

namespace ez {

// theta(Q, s) = sum_{x != 0} e^{-s Q(x)}, Re s > 0. Truncated at
// R_cut = (P ln 10 + 5) / Re s; absolute error <= 1e-(P-2).
cplx theta_eval(const QuadraticForm& q, cplx s, const Config& cfg = {});

struct ThetaMomentRecord {
  double T = 0.0;
  double R = 0.0;
  double step = 0.0;
  double moment = 0.0;  // estimated int_R^{2R} |theta(Q, 1/T + i tau)|^4 dtau
  int64_t samples = 0;  // Simpson subintervals
};

// Composite-Simpson estimate of the fourth moment on [R, 2R] at Re s = 1/T.
// step must resolve the phase: step <= 0.1 / (T ln(T+2)), else StepTooCoarse.
ThetaMomentRecord theta_fourth_moment(const QuadraticForm& q, double T, double R, double step,
                                      const Config& cfg = {});

}  // namespace ez
