#pragma once

#include <cstdint>
#include <vector>

#include "ez/common.hpp"

namespace ez {

// Principal-branch log-gamma: Stirling asymptotics after an upward recurrence
// shift to |z| >= 12, reflection for Re z < 0.5. Relative error <= ~1e-13 for
// |z| <= 1e4 on the right half-plane.
cplx log_gamma(cplx z);

// Gamma_R(s) = pi^{-s/2} Gamma(s/2); log form keeps |Im s| ~ 1e4 usable.
cplx log_gamma_R(cplx s);
cplx gamma_R(cplx s);

// Euler-Maclaurin Riemann zeta; pole at s = 1.
cplx riemann_zeta(cplx s);

// Hurwitz zeta(s, a) for 0 < a <= 1 (same Euler-Maclaurin engine).
cplx hurwitz_zeta(cplx s, double a);

// Hurwitz zeta at real integer exponent beta >= 2; the hot kernel of the
// odd-k discriminant sums.
double hurwitz_zeta_int(int beta, double a);

// Kronecker symbol (a|n), completely multiplicative, defined for all integers.
int kronecker_symbol(int64_t a, int64_t n);

// chi_D(n) for D a fundamental discriminant (or 1); BadDiscriminant otherwise.
int kronecker_chi(int64_t D, int64_t n);

bool is_fundamental_discriminant(int64_t D);

// All fundamental discriminants with the sign of `sign_positive` and
// 1 <= |D| <= max_abs, ascending in |D|. D = 1 is included for the positive
// family (the principal character term of the discriminant sums).
std::vector<int64_t> fundamental_discriminants(bool positive, int64_t max_abs);

// L(s, chi_D) via the Hurwitz decomposition |D|^{-s} sum_a chi(a) zeta(s, a/|D|).
// D = 1 reduces to riemann_zeta.
cplx dirichlet_L(cplx s, int64_t D);

// L(beta, chi_D) for integer beta >= 2 (real fast path).
double dirichlet_L_int(int beta, int64_t D);

struct IgammaOptions {
  double tol = 1e-13;
  int mesh_refine = 0;  // halves the quadrature panel width per unit
};

// log Gamma(a, z) for Re z > 0 (principal branch of the log). Series /
// continued-fraction / rotated-ray quadrature regimes; the log form survives
// |Im a| up to the 1e4 envelope where the value itself under- or overflows.
cplx log_igamma_upper(cplx a, cplx z, const IgammaOptions& opt = {});

// Gamma(a, x) = int_x^inf u^{a-1} e^{-u} du for real x >= 0 (x = 0 needs
// Re a > 0). EnvelopeExceeded for |Im a| > 1e4.
cplx upper_incomplete_gamma(cplx a, double x, const IgammaOptions& opt = {});

}  // namespace ez
