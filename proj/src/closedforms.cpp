#include "ez/closedforms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>

namespace ez {

namespace {

constexpr double kLn4 = 1.3862943611198906;
constexpr double kEulerGamma = 0.5772156649015328606;

// sigma_nu(n) = sum of d^nu over divisors d | n
int64_t sigma_pow(int64_t n, int nu) {
  int64_t s = 0;
  for (int64_t d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    int64_t e = n / d;
    int64_t dp = 1, ep = 1;
    for (int i = 0; i < nu; ++i) {
      dp *= d;
      ep *= e;
    }
    s += dp;
    if (e != d) s += ep;
  }
  return s;
}

// (1 - 4^{1-2s}) zeta(2s), holomorphic through s = 1/2 (the zero of the
// polynomial factor cancels the zeta pole)
cplx deflated_zeta_k4(cplx s) {
  cplx x = 2.0 * s - 1.0;
  if (std::abs(x) < 1e-5) return kLn4 * (1.0 + x * (kEulerGamma - 0.5 * kLn4));
  return (1.0 - std::exp(-x * kLn4)) * riemann_zeta(1.0 + x);
}

struct Mod40Fit {
  double c;
  std::array<double, 4> q;  // a(n) = sum_j q[j] sigma_nu(n / 2^j)
  int degree;
};

// Coefficients of c_k zeta(z) zeta(z - nu) P(2^{-z}) matched against r_k(n):
// the n = 2^j rows determine q exactly, the first 64 coefficients verify it.
const Mod40Fit& mod40_fit(int k) {
  static std::mutex mu;
  static std::array<Mod40Fit, 2> fits;
  static std::array<bool, 2> ready = {false, false};
  int slot = (k == 4) ? 0 : 1;
  std::lock_guard<std::mutex> lock(mu);
  if (!ready[slot]) {
    int nu = k / 2 - 1;
    auto rc = representation_counts(k, 64);
    Mod40Fit f{};
    f.q = {0, 0, 0, 0};
    for (int j = 0; j <= 3; ++j) {
      int64_t n = int64_t{1} << j;
      double acc = 0;
      for (int i = 0; i < j; ++i) acc += f.q[i] * static_cast<double>(sigma_pow(n >> i, nu));
      f.q[j] = static_cast<double>(rc.r(n)) - acc;
    }
    f.degree = 0;
    for (int j = 1; j <= 3; ++j)
      if (f.q[j] != 0.0) f.degree = j;
    f.c = f.q[0];
    if (f.c <= 0) fail(errc::fit_failed, "leading constant is not positive");
    for (int64_t n = 1; n <= 64; ++n) {
      double a = 0;
      for (int j = 0; j <= 3; ++j)
        if (n % (int64_t{1} << j) == 0) a += f.q[j] * static_cast<double>(sigma_pow(n >> j, nu));
      if (std::abs(a - static_cast<double>(rc.r(n))) > 1e-9)
        fail(errc::fit_failed, "Dirichlet coefficient mismatch at n = " + std::to_string(n));
    }
    fits[slot] = f;
    ready[slot] = true;
  }
  return fits[slot];
}

struct Mod42Fit {
  double c;  // from the n = 1 coefficient: c (chi_{-4}(3) + 2^{k/2-1}) = r_6(1)
};

const Mod42Fit& mod42_fit() {
  static std::mutex mu;
  static Mod42Fit fit;
  static bool ready = false;
  std::lock_guard<std::mutex> lock(mu);
  if (!ready) {
    auto rc = representation_counts(6, 64);
    double denom = kronecker_chi(-4, 3) + 4.0;
    fit.c = static_cast<double>(rc.r(1)) / denom;
    for (int64_t n = 1; n <= 64; ++n) {
      double t1 = 0, t2 = 0;
      for (int64_t d = 1; d <= n; ++d) {
        if (n % d) continue;
        t1 += kronecker_chi(-4, d) * static_cast<double>(d * d);
        t2 += kronecker_chi(-4, n / d) * static_cast<double>(d * d);
      }
      double a = fit.c * (kronecker_chi(-4, 3) * t1 + 4.0 * t2);
      if (std::abs(a - static_cast<double>(rc.r(n))) > 1e-9)
        fail(errc::fit_failed, "k=6 coefficient mismatch at n = " + std::to_string(n));
    }
    ready = true;
  }
  return fit;
}

}  // namespace

CohenParams cohen_params(int k) {
  if (k < 3 || k % 2 == 0) fail(errc::bad_k, "cohen parameters need odd k >= 3");
  CohenParams p;
  p.k = k;
  p.alpha = 0.5 * (3 - k);
  p.beta = 0.5 * (k - 1);
  return p;
}

FittedModel fit_constants(const std::vector<cplx>& oracle, const std::vector<cplx>& model,
                          const std::vector<cplx>& powers, int degree, bool constrain_p0,
                          double tol) {
  std::size_t n = oracle.size();
  if (model.size() != n || powers.size() != n) fail(errc::bad_input, "length mismatch");
  int unknowns = degree + 1;
  if (static_cast<int>(n) < unknowns + 1) fail(errc::bad_input, "need >= degree + 2 samples");
  for (const cplx& m : model)
    if (std::abs(m) == 0.0) fail(errc::bad_input, "model values must be nonzero");

  // least squares for y_i = sum_j q_j x_i^j with y = oracle / model;
  // q_0 = c and p_j = q_j / c, which pins P(0) = 1
  std::vector<std::vector<cplx>> A(n, std::vector<cplx>(unknowns));
  std::vector<cplx> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx xp = 1.0;
    for (int j = 0; j < unknowns; ++j) {
      A[i][j] = xp;
      xp *= powers[i];
    }
    y[i] = oracle[i] / model[i];
  }
  std::vector<std::vector<cplx>> N(unknowns, std::vector<cplx>(unknowns, 0.0));
  std::vector<cplx> b(unknowns, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (int r = 0; r < unknowns; ++r) {
      b[r] += std::conj(A[i][r]) * y[i];
      for (int c = 0; c < unknowns; ++c) N[r][c] += std::conj(A[i][r]) * A[i][c];
    }
  for (int col = 0; col < unknowns; ++col) {
    int piv = col;
    for (int r = col + 1; r < unknowns; ++r)
      if (std::abs(N[r][col]) > std::abs(N[piv][col])) piv = r;
    if (std::abs(N[piv][col]) < 1e-13) fail(errc::singular, "ill-conditioned design matrix");
    std::swap(N[col], N[piv]);
    std::swap(b[col], b[piv]);
    for (int r = col + 1; r < unknowns; ++r) {
      cplx f = N[r][col] / N[col][col];
      for (int c = col; c < unknowns; ++c) N[r][c] -= f * N[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<cplx> qv(unknowns);
  for (int r = unknowns - 1; r >= 0; --r) {
    cplx acc = b[r];
    for (int c = r + 1; c < unknowns; ++c) acc -= N[r][c] * qv[c];
    qv[r] = acc / N[r][r];
  }

  FittedModel out;
  out.c = qv[0];
  out.degree = degree;
  out.poly.assign(degree + 1, 0.0);
  out.poly[0] = 1.0;
  for (int j = 1; j <= degree; ++j)
    out.poly[j] = (std::abs(qv[0]) > 0) ? (qv[j] / qv[0]).real() : 0.0;
  (void)constrain_p0;
  out.residuals.resize(n);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cplx fitv = 0.0;
    cplx xp = 1.0;
    for (int j = 0; j < unknowns; ++j) {
      fitv += qv[j] * xp;
      xp *= powers[i];
    }
    fitv *= model[i];
    out.residuals[i] = std::abs(fitv - oracle[i]) / std::max(std::abs(oracle[i]), 1e-300);
    worst = std::max(worst, out.residuals[i]);
  }
  if (worst > tol)
    fail(errc::fit_failed, "fit residual " + std::to_string(worst) + " above tolerance");
  return out;
}

bool closed_form_k4_adopted_jacobi() { return true; }

cplx closed_form_k4(cplx s) {
  // Adopted normalization: 8 (1 - 4^{1-2s}) zeta(2s) zeta(2s-1), the variant
  // the lattice oracle forces through r_4(n) = 8 sum_{d|n, 4 nmid d} d. The
  // alternative 8 (1 - 2^{1-2s}) zeta(2s) zeta(1-2s) misses the oracle by two
  // orders of magnitude at s = 2; the verification suite records both.
  cplx z = 2.0 * s;
  if (std::abs(z - 1.0) < 1e-5) return 8.0 * deflated_zeta_k4(s) * riemann_zeta(z - 1.0);
  return 8.0 * (1.0 - std::exp((1.0 - z) * kLn4)) * riemann_zeta(z) * riemann_zeta(z - 1.0);
}

cplx eisenstein_mod4_0(int k, cplx s) {
  if (k != 4 && k != 8) fail(errc::bad_k, "k must be 4 or 8 (cusp forms appear at k >= 9)");
  const Mod40Fit& f = mod40_fit(k);
  int nu = k / 2 - 1;
  cplx z = 0.5 * k * s;
  if (k == 4 && std::abs(z - 1.0) < 1e-5) return closed_form_k4(s);
  cplx x = std::exp(-z * std::log(cplx(2.0)));
  cplx P = 0.0, xp = 1.0;
  for (int j = 0; j <= 3; ++j) {
    P += (f.q[j] / f.c) * xp;
    xp *= x;
  }
  return f.c * riemann_zeta(z) * riemann_zeta(z - static_cast<double>(nu)) * P;
}

cplx eisenstein_mod4_2(int k, cplx s) {
  if (k != 6) fail(errc::bad_k, "only k = 6 (k = 10 has cusp forms)");
  const Mod42Fit& f = mod42_fit();
  cplx z = 3.0 * s;
  double chi3 = kronecker_chi(-4, 3);
  return f.c * (riemann_zeta(z) * dirichlet_L(z - 2.0, -4) * chi3 +
                dirichlet_L(z, -4) * riemann_zeta(z - 2.0) * 4.0);
}

std::vector<double> closed_form_dirichlet_coeffs(int k, int64_t N) {
  std::vector<double> a(N, 0.0);
  if (k == 4 || k == 8) {
    const Mod40Fit& f = mod40_fit(k);
    int nu = k / 2 - 1;
    for (int64_t n = 1; n <= N; ++n) {
      double v = 0;
      for (int j = 0; j <= 3; ++j)
        if (n % (int64_t{1} << j) == 0) v += f.q[j] * static_cast<double>(sigma_pow(n >> j, nu));
      a[n - 1] = v;
    }
  } else if (k == 6) {
    const Mod42Fit& f = mod42_fit();
    for (int64_t n = 1; n <= N; ++n) {
      double t1 = 0, t2 = 0;
      for (int64_t d = 1; d <= n; ++d) {
        if (n % d) continue;
        t1 += kronecker_chi(-4, d) * static_cast<double>(d * d);
        t2 += kronecker_chi(-4, n / d) * static_cast<double>(d * d);
      }
      a[n - 1] = f.c * (kronecker_chi(-4, 3) * t1 + 4.0 * t2);
    }
  } else {
    fail(errc::bad_k, "closed-form coefficients exist for k in {4, 6, 8}");
  }
  return a;
}

CohenResult cohen_series(int k, cplx s, int64_t D_max) {
  if (k != 5 && k != 7) fail(errc::bad_k, "cohen_series supports k in {5, 7}");
  if (D_max < 100) fail(errc::bad_range, "D_max must be >= 100");
  CohenParams p = cohen_params(k);
  cplx w = p.w(s);
  if (w.real() < 1.05)
    fail(errc::not_convergent, "discriminant sum needs Re(ks/2 - k/2 + 1) > 1 + margin");

  bool positive = (k % 4 == 1);  // (-1)^{(k-1)/2} D > 0
  int beta = static_cast<int>(p.beta);
  cplx ks = static_cast<double>(k) * s;
  cplx zz = riemann_zeta(ks) * riemann_zeta(ks + 2.0 * p.alpha - 1.0);
  cplx denom_arg = ks + p.alpha;

  // Each discriminant term L(beta, chi_D) zz / (D^w L(ks+alpha, chi_D))
  // carries a 2-adic completion factor. The bare sum only grades indices
  // n = 0, 1 mod 4; re-weighting the dyadic part by
  //   A (1 - 1/F_D) + chi_8(k) 2^beta   (odd D),   A + chi_8(k) 2^beta (4 | D)
  // with A = 4^{ks/2} and F_D the dyadic Euler factor of the term makes the
  // Dirichlet coefficients equal r_k(n) exactly (checked against the counts
  // for n <= 512 in the tests; the overall constant is the caller's fit).
  double mult = ((k % 8 == 1 || k % 8 == 7) ? 1.0 : -1.0) * std::pow(2.0, beta);
  cplx x2 = std::exp(-ks * std::log(cplx(2.0)));  // 2^{-ks}
  cplx A = 1.0 / x2;
  double twoa = std::pow(2.0, -p.alpha);
  double twob = std::pow(2.0, 1.0 - 2.0 * p.alpha);

  auto discs = fundamental_discriminants(positive, D_max);
  KahanSumC sum;
  for (int64_t D : discs) {
    double num = dirichlet_L_int(beta, D);
    cplx den = dirichlet_L(denom_arg, D);
    cplx dpw = std::exp(-w * std::log(cplx(static_cast<double>(std::abs(D)))));
    cplx term = num * dpw / den;
    cplx factor;
    if (std::abs(D) % 2 == 1) {
      double chi2 = kronecker_symbol(D, 2);
      cplx invF = (1.0 - x2) * (1.0 - twob * x2) / (1.0 - chi2 * twoa * x2);
      factor = A * (1.0 - invF) + mult;
    } else {
      factor = A + mult;
    }
    sum.add(term * factor);
  }
  CohenResult out;
  out.value = zz * sum.value();
  out.terms = static_cast<int>(discs.size());
  // tail: |L(beta, chi_D)| <= zeta(beta), 1/|L(s', chi_D)| <= zeta(s')/zeta(2s'),
  // fundamental-discriminant density < 1 per unit, integral comparison in D;
  // the dyadic factor is bounded by |A (1-1/F)| + |mult| <= C_2
  double sig = denom_arg.real();
  int sig_i = std::max(2, static_cast<int>(std::floor(sig)));
  double linv = hurwitz_zeta_int(sig_i, 1.0) / hurwitz_zeta_int(std::min(2 * sig_i, 30), 1.0);
  double tail_d = std::pow(static_cast<double>(D_max), 1.0 - w.real()) / (w.real() - 1.0);
  // even discriminants carry the full |A| = |4^{ks/2}| in their factor
  double c2 = 1.3 * (std::abs(A) + std::abs(mult));
  out.tail_bound = std::abs(zz) * hurwitz_zeta_int(beta, 1.0) * linv * tail_d * c2;
  return out;
}

}  // namespace ez
