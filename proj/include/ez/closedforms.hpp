#pragma once

#include "ez/epstein.hpp"

namespace ez {

// Exponents of the odd-k discriminant-sum formula.
struct CohenParams {
  int k;
  double alpha;  // (3-k)/2
  double beta;   // (k-1)/2 = 1 - alpha
  cplx w(cplx s) const { return 0.5 * k * s - 0.5 * k + 1.0; }
};

CohenParams cohen_params(int k);

struct FittedModel {
  cplx c;                         // fitted leading constant
  std::vector<double> poly;       // polynomial coefficients, poly[0] = 1
  std::vector<double> residuals;  // per-point relative mismatch
  int degree = 0;
};

// Least-squares fit oracle(s) ~= c * model(s) * P(2^{-ks/2}) with P of the
// given degree and P(0) = 1 when constrained. Throws Singular / FitFailed.
FittedModel fit_constants(const std::vector<cplx>& oracle, const std::vector<cplx>& model,
                          const std::vector<cplx>& powers, int degree, bool constrain_p0,
                          double tol);

// Verified closed form for E(I_4, s); the normalization is the one that
// matches the lattice oracle (see closed_form_k4_adopted_jacobi).
cplx closed_form_k4(cplx s);

// True when the adopted k=4 normalization is the Jacobi divisor-sum variant
// 8 (1 - 4^{1-2s}) zeta(2s) zeta(2s-1) rather than the alternative
// 8 (1 - 2^{1-2s}) zeta(2s) zeta(1-2s).
bool closed_form_k4_adopted_jacobi();

// Eisenstein closed form for k in {4, 8}: c_k zeta(ks/2) zeta(ks/2-k/2+1)
// P(2^{-ks/2}) with integer coefficients matched against r_k(n), n <= 64.
cplx eisenstein_mod4_0(int k, cplx s);

// k = 6 two-term formula with chi_{-4}; c_6 = 4 from the n = 1 coefficient.
cplx eisenstein_mod4_2(int k, cplx s);

// Coefficients of the fitted Dirichlet expansion for k in {4, 6, 8}, used by
// the exact coefficient checks. Returns a(n) for 1 <= n <= N.
std::vector<double> closed_form_dirichlet_coeffs(int k, int64_t N);

struct CohenResult {
  cplx value;        // partial sum over |D| <= D_max, without c_k
  double tail_bound; // bound on the dropped |D| > D_max discriminants
  int terms;         // number of discriminants summed
};

// Partial discriminant sum of the odd-k Eisenstein representation
// sum_D L(beta, chi_D) zeta(ks) zeta(ks + 2 alpha - 1) / (D^w L(ks+alpha, chi_D)),
// D fundamental with (-1)^{(k-1)/2} D > 0. Requires Re w > 1 (NotConvergent).
CohenResult cohen_series(int k, cplx s, int64_t D_max);

}  // namespace ez
