#include "ez/epstein.hpp"

#include <algorithm>
#include <cmath>

#include "ez/lattice_enum.hpp"

namespace ez {

namespace {

double unit_ball_volume(int k) { return std::pow(kPi, 0.5 * k) / std::tgamma(0.5 * k + 1.0); }

// Contour-rotation budget: the split point delta = e^{i psi} is rotated
// toward the imaginary axis just far enough that the largest term exceeds
// |Lambda| by at most ~e^{kappa}. kappa trades cancellation noise against the
// truncation radius (~ |t_w| / pi at full rotation).
constexpr double kRotationKappa = 9.2;  // e^{9.2} ~ 1e4

struct Rotation {
  double psi;   // arg(delta), carries the sign of t_w
  double sinc;  // cos(psi) = sin(c), radial decay multiplier
  double M;     // pieces are accumulated times e^{M}
};

Rotation pick_rotation(double tw, double scale) {
  double kappa = kRotationKappa * scale;
  double c = std::min(kPi / 2, kappa / std::max(std::abs(tw), 1e-9));
  double psi = (c >= kPi / 2) ? 0.0 : (tw >= 0 ? 1.0 : -1.0) * (kPi / 2 - c);
  return {psi, std::cos(psi), std::abs(psi * tw)};
}

// Truncation radius in Q-value units: past R the summands decay like
// e^{-pi v sin c}; push them e^{-A} below the scaled piece size, and also
// honor the envelope rule pi R >= |w| + P ln 10.
double pick_radius(cplx w, const Rotation& rot, int precision) {
  double A = (precision + 4) * 2.302585092994046;
  double c = kPi / 2 - std::abs(rot.psi);
  double R = (c * std::abs(w.imag()) + A) / (kPi * rot.sinc);
  double R2 = (std::abs(w) + precision * 2.302585092994046) / kPi;
  return std::max({R, R2, 4.0});
}

// Scaled tail bound of one lattice sum past radius R: the summand modulus is
// below ~e^{-pi v sinc}/(pi v) and the shell density is
// (k/2) V_k v^{k/2-1} / sqrt(det).
double tail_bound_scaled(int k, double det, double R, double sinc) {
  double rate = kPi * sinc;
  double shell = 0.5 * k * unit_ball_volume(k) / std::sqrt(det);
  double p = 0.5 * k - 2.0;
  double corr = 1.0;
  if (p > 0) {
    double ratio = p / (rate * R);
    corr = (ratio < 0.9) ? 1.0 / (1.0 - ratio) : 10.0;
  }
  double lg = std::log(shell / rate) + p * std::log(R) - rate * R;
  if (lg < -700) return 0.0;
  return 3.0 * corr * std::exp(lg) / kPi;
}

struct SumAccum {
  KahanSumC sum;
  double abssum = 0.0;
  double points = 0.0;
};

// --- exact path: one log-kernel evaluation per distinct value -------------

void fold_exact(const ValueArray& arr, double R, cplx a, cplx pow_exp, cplx delta, double M,
                SumAccum* acc) {
  // term(v) = exp(pow_exp * ln(pi v) + log Gamma(a, pi v delta) + M)
  IgammaOptions opt;
  opt.tol = 1e-13;
  const double lnpi = std::log(kPi);
  std::size_t hi = std::upper_bound(arr.values.begin(), arr.values.end(), R) - arr.values.begin();
  for (std::size_t i = 0; i < hi; ++i) {
    double v = arr.values[i];
    double m = arr.mults[i];
    cplx z = kPi * v * delta;
    cplx lg = log_igamma_upper(a, z, opt);
    cplx term = std::exp(pow_exp * (std::log(v) + lnpi) + lg + M);
    acc->sum.add(m * term);
    acc->abssum += m * std::abs(term);
    acc->points += m;
  }
}

// --- table path: smooth kernels interpolated over z' = pi v ---------------

// Lagrange-8 interpolation on a uniform grid (barycentric form).
class CplxTable {
 public:
  CplxTable() = default;
  CplxTable(double x0, double h, std::vector<cplx> vals)
      : x0_(x0), h_(h), vals_(std::move(vals)) {}
  bool empty() const { return vals_.empty(); }
  cplx operator()(double x) const {
    double u = (x - x0_) / h_;
    int64_t i0 = static_cast<int64_t>(std::floor(u)) - 3;
    i0 = std::clamp<int64_t>(i0, 0, static_cast<int64_t>(vals_.size()) - 8);
    double t = u - static_cast<double>(i0);
    static const double bw[8] = {-1.0 / 5040, 1.0 / 720, -1.0 / 240, 1.0 / 144,
                                 -1.0 / 144,  1.0 / 240, -1.0 / 720, 1.0 / 5040};
    double den = 0, sr = 0, si = 0;
    for (int j = 0; j < 8; ++j) {
      double d = t - j;
      if (std::abs(d) < 1e-12) return vals_[i0 + j];
      double wj = bw[j] / d;
      den += wj;
      sr += wj * vals_[i0 + j].real();
      si += wj * vals_[i0 + j].imag();
    }
    return cplx(sr / den, si / den);
  }

 private:
  double x0_ = 0, h_ = 1;
  std::vector<cplx> vals_;
};

// S(z) = int_0^1 tau^{a-1} e^{-z tau} dtau = gamma(a, z) z^{-a}: smooth and
// non-oscillatory along the rotated ray. Series below the turning point,
// (Gamma(a) - Gamma(a,z)) z^{-a} above it.
cplx s_kernel(cplx a, cplx lgam_a, cplx z) {
  double za = std::abs(z), aa = std::abs(a);
  if (za <= 0.93 * aa || za < 20.0) {
    cplx term = 1.0 / a;
    cplx sum = term;
    for (int n = 1; n < 60000; ++n) {
      term *= z / (a + cplx(static_cast<double>(n)));
      sum += term;
      if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    }
    return std::exp(-z) * sum;
  }
  cplx lza = a * std::log(z);
  return std::exp(lgam_a - lza) - std::exp(log_igamma_upper(a, z) - lza);
}

// u(z) = Gamma(a, z) z^{-a} e^{z}, smooth for |z| beyond the turning point.
cplx u_kernel(cplx a, cplx z) {
  return std::exp(log_igamma_upper(a, z) - a * std::log(z) + z);
}

struct SumTables {
  cplx a;
  cplx lgam_a;
  double split = 0;  // z' boundary between the S-form and the u-form
  CplxTable s_tab;   // S(z' delta) over z' in [0, split]
  CplxTable u_tab;   // u(z' delta) over z' in (split, pi R]
};

SumTables build_tables(cplx a, cplx delta, double R) {
  SumTables T;
  T.a = a;
  T.lgam_a = log_gamma(a);
  double zmax = kPi * R * 1.0001 + 1.0;
  T.split = std::min(1.2 * std::abs(a) + 8.0, zmax);
  {
    double h = 0.05;
    int n = static_cast<int>(std::ceil(T.split / h)) + 9;
    std::vector<cplx> vals(n);
    for (int i = 0; i < n; ++i) vals[i] = s_kernel(a, T.lgam_a, (1e-30 + i * h) * delta);
    T.s_tab = CplxTable(0.0, h, std::move(vals));
  }
  if (zmax > T.split) {
    double h = 0.5;
    double x0 = T.split - 4 * h;
    int n = static_cast<int>(std::ceil((zmax - x0) / h)) + 9;
    std::vector<cplx> vals(n);
    for (int i = 0; i < n; ++i) vals[i] = u_kernel(a, (x0 + i * h) * delta);
    T.u_tab = CplxTable(x0, h, std::move(vals));
  }
  return T;
}

// Accumulators for the three stream pieces:
//   pw: sum m v^{-pow}            (combined with Gamma(a) pi^{-pow} later)
//   sp: sum m S(pi v delta)       for pi v <= split
//   up: sum m e^{-pi v delta} u   for pi v > split
struct StreamAccum {
  KahanSumC pw, sp, up;
  double abs_pw = 0.0, abs_sp = 0.0, abs_up = 0.0;
  double points = 0.0;
};

inline void stream_point(const SumTables& T, const cplx& pow_exp, double dre, double dim,
                         double v, double m, StreamAccum* acc) {
  double zp = kPi * v;
  if (zp <= T.split) {
    // Gamma(a, z) = Gamma(a) - z^a S(z): power piece plus the S piece
    double lv = std::log(v);
    double mod = m * std::exp(-pow_exp.real() * lv);
    double ph = -pow_exp.imag() * lv;
    acc->pw.add(mod * cplx(std::cos(ph), std::sin(ph)));
    acc->abs_pw += mod;
    cplx s = T.s_tab(zp);
    acc->sp.add(m * s);
    acc->abs_sp += m * std::abs(s);
  } else {
    // the whole term in one factorized piece: delta^a e^{-z} u(z)
    double em = m * std::exp(-zp * dre);
    double ep = -zp * dim;
    cplx uv = (em * cplx(std::cos(ep), std::sin(ep))) * T.u_tab(zp);
    acc->up.add(uv);
    acc->abs_up += std::abs(uv);
  }
  acc->points += m;
}

struct CoreResult {
  cplx sum_scaled;    // all representation pieces, scaled by e^{M}
  double abs_scaled;  // sum of |pieces| for the roundoff estimate
  double points;
  double radius;
  double tail_scaled;
};

// Full representation with split point delta = e^{i psi}:
//   pi^{-w} Gamma(w) E = -delta^w / w - d^{-1/2} delta^{w-k/2} / (k/2 - w)
//     + sum_x (pi Q)^{-w} Gamma(w, pi Q delta)
//     + d^{-1/2} sum_x (pi Q_-)^{w-k/2} Gamma(k/2 - w, pi Q_- / delta),
// every piece carried times e^{M}. delta-independence is exactly the theta
// functional equation, which the tests exercise.
CoreResult evaluate_core(const QuadraticForm& q, const QuadraticForm& qinv, cplx s,
                         const EvalOptions& opt) {
  const int k = q.k();
  const cplx w = 0.5 * static_cast<double>(k) * s;
  Rotation rot = pick_rotation(w.imag(), opt.rotation_scale);
  const double R = (opt.radius_override > 0) ? opt.radius_override
                                             : pick_radius(w, rot, opt.config.precision);
  const cplx delta = std::polar(1.0, rot.psi);
  const cplx deltac = std::conj(delta);
  const double M = rot.M;
  const cplx a1 = w;
  const cplx a2 = cplx(0.5 * k) - w;
  const double dsqrt_inv = 1.0 / std::sqrt(q.det());
  const double lnpi = std::log(kPi);

  // pole pieces: delta^w e^M = exp(i psi w + M) with M = |psi t_w|
  cplx dw_scaled = std::exp(cplx(0.0, rot.psi) * w + M);
  cplx dwk_scaled = std::exp(cplx(0.0, rot.psi) * (w - cplx(0.5 * k)) + M);
  cplx poles = -dw_scaled / w - dsqrt_inv * dwk_scaled / (cplx(0.5 * k) - w);

  CoreResult out;
  out.radius = R;
  out.tail_scaled = tail_bound_scaled(k, q.det(), R, rot.sinc) +
                    dsqrt_inv * tail_bound_scaled(k, qinv.det(), R, rot.sinc);

  double predicted = predicted_point_count(q, R) + predicted_point_count(qinv, R);
  if (predicted > opt.config.budget)
    fail(errc::budget, "evaluate needs ~" + std::to_string(predicted) +
                           " lattice points, over budget " + std::to_string(opt.config.budget));

  bool integral_pair = q.integer_valued() && qinv.integer_valued();
  bool exact = predicted / 2.0 <= 60000.0 || (integral_pair && R <= 2.5e5);
  if (opt.force_path == 1) exact = true;
  if (opt.force_path == 2) exact = false;

  cplx total = poles;
  double absacc = std::abs(poles);
  double points = 0.0;

  if (exact) {
    auto arr1 = opt.use_cache
                    ? LatticeCache::instance().get(q, R, opt.config.budget)
                    : std::make_shared<const ValueArray>(build_value_array(q, R, opt.config.budget));
    auto arr2 = opt.use_cache
                    ? LatticeCache::instance().get(qinv, R, opt.config.budget)
                    : std::make_shared<const ValueArray>(
                          build_value_array(qinv, R, opt.config.budget));
    SumAccum s1, s2;
    fold_exact(*arr1, R, a1, -w, delta, M, &s1);
    fold_exact(*arr2, R, a2, w - cplx(0.5 * k), deltac, M, &s2);
    total += s1.sum.value() + dsqrt_inv * s2.sum.value();
    absacc += s1.abssum + dsqrt_inv * s2.abssum;
    points = s1.points + s2.points;
  } else {
    SumTables T1 = build_tables(a1, delta, R);
    SumTables T2 = build_tables(a2, deltac, R);
    StreamAccum A1, A2;
    detail::EnumContext ctx1(q), ctx2(qinv);
    detail::enumerate_half_values(
        ctx1, R, [&](double v) { stream_point(T1, w, delta.real(), delta.imag(), v, 2.0, &A1); });
    detail::enumerate_half_values(ctx2, R, [&](double v) {
      stream_point(T2, cplx(0.5 * k) - w, deltac.real(), deltac.imag(), v, 2.0, &A2);
    });
    // sum1 terms: (pi v)^{-w} Gamma(w, z') with z' = pi v delta splits into
    //   pi^{-w} Gamma(w) v^{-w}  -  delta^w S(z')        (z' <= split)
    //   delta^w e^{-z'} u(z')                            (z' >  split)
    cplx pref_pow1 = std::exp(T1.lgam_a - w * lnpi + M);
    cplx dws = std::exp(cplx(0.0, rot.psi) * w + M);  // delta^w e^M
    cplx sum1 = pref_pow1 * A1.pw.value() - dws * A1.sp.value() + dws * A1.up.value();
    double abs1 = std::abs(pref_pow1) * A1.abs_pw + std::abs(dws) * (A1.abs_sp + A1.abs_up);
    cplx a2p = cplx(0.5 * k) - w;  // both the order and the power exponent
    cplx pref_pow2 = std::exp(T2.lgam_a - a2p * lnpi + M);
    cplx dws2 = std::exp(cplx(0.0, -rot.psi) * a2p + M);  // deltac^{a2} e^M
    cplx sum2 = pref_pow2 * A2.pw.value() - dws2 * A2.sp.value() + dws2 * A2.up.value();
    double abs2 = std::abs(pref_pow2) * A2.abs_pw + std::abs(dws2) * (A2.abs_sp + A2.abs_up);
    total += sum1 + dsqrt_inv * sum2;
    absacc += abs1 + dsqrt_inv * abs2;
    points = A1.points + A2.points;
  }

  out.sum_scaled = total;
  out.abs_scaled = absacc;
  out.points = points;
  return out;
}

void check_eval_preconditions(cplx s, int k) {
  if (std::abs(s - cplx(1.0)) < 1e-13) fail(errc::pole, "E(Z, s) has a simple pole at s = 1");
  if (std::abs(s) < 1e-13) fail(errc::pole, "s = 0 is a pole of the completed function");
  if (std::abs(0.5 * k * s.imag()) > 1e4)
    fail(errc::envelope_exceeded, "|Im(ks/2)| beyond the 1e4 specfun envelope");
}

}  // namespace

double residue_at_1(const QuadraticForm& q) {
  int k = q.k();
  return 2.0 * std::pow(kPi, 0.5 * k) / (k * std::tgamma(0.5 * k) * std::sqrt(q.det()));
}

EvalResult evaluate(const QuadraticForm& q, cplx s, const EvalOptions& opt) {
  check_eval_preconditions(s, q.k());
  QuadraticForm qinv = inverse_form(q);
  CoreResult core = evaluate_core(q, qinv, s, opt);
  cplx w = 0.5 * static_cast<double>(q.k()) * s;
  Rotation rot = pick_rotation(w.imag(), opt.rotation_scale);
  // E = exp(lnG - M) * sum_scaled, lnG = w ln pi - log Gamma(w);
  // Re(lnG) - M ~ c |t_w| stays representable at every t in the envelope.
  cplx pref = std::exp(w * std::log(kPi) - log_gamma(w) - cplx(rot.M));
  EvalResult res;
  res.value = pref * core.sum_scaled;
  res.radius = core.radius;
  res.points = core.points;
  double prefabs = std::abs(pref);
  double mean_term = core.abs_scaled / std::max(core.points, 1.0);
  res.err = prefabs * core.tail_scaled +
            10.0 * 1e-13 * std::sqrt(std::max(core.points, 1.0)) * prefabs * mean_term + 1e-300;
  return res;
}

cplx completed_lambda(const QuadraticForm& q, cplx s, const EvalOptions& opt) {
  check_eval_preconditions(s, q.k());
  QuadraticForm qinv = inverse_form(q);
  CoreResult core = evaluate_core(q, qinv, s, opt);
  Rotation rot = pick_rotation(0.5 * q.k() * s.imag(), opt.rotation_scale);
  if (core.sum_scaled == cplx(0.0)) return 0.0;
  cplx lg = std::log(core.sum_scaled) - cplx(rot.M);
  if (lg.real() < -707.0) return 0.0;
  return std::exp(lg);
}

EvalResult evaluate_direct(const QuadraticForm& q, cplx s, double tail_eps,
                           const EvalOptions& opt) {
  int k = q.k();
  if (tail_eps <= 0) fail(errc::bad_range, "tail_eps must be positive");
  double margin = 1.0 + 1.0 / k + 0.009;
  if (s.real() < margin)
    fail(errc::not_convergent, "evaluate_direct needs Re s >= 1 + 1/k + margin");
  double sw = 0.5 * k * s.real();
  // analytic tail: sum_{Q(x) > R} Q^{-k sigma/2} <= C R^{k/2 - k sigma/2}
  double C = k * unit_ball_volume(k) / std::sqrt(q.det()) / (sw - 0.5 * k);
  double R = std::max(std::pow(tail_eps / C, 1.0 / (0.5 * k - sw)), 4.0);
  // scaled-identity forms aggregate through the exact convolution counts, so
  // the raw point count is not the cost model there
  double ident = scaled_identity_factor(q);
  bool exact_counts = ident > 0 && R / ident <= 5e4;
  double predicted = predicted_point_count(q, R);
  if (!exact_counts && predicted > opt.config.budget)
    fail(errc::budget, "direct sum needs ~" + std::to_string(predicted) + " points");

  cplx w = 0.5 * static_cast<double>(k) * s;
  KahanSumC sum;
  double points = 0.0;
  bool plain_real = std::abs(s.imag()) < 1e-300;
  if (exact_counts || (q.integer_valued() && R > 4096.0 && opt.use_cache)) {
    auto arr = LatticeCache::instance().get(q, R, opt.config.budget);
    std::size_t hi =
        std::upper_bound(arr->values.begin(), arr->values.end(), R) - arr->values.begin();
    for (std::size_t i = 0; i < hi; ++i) {
      double v = arr->values[i], m = arr->mults[i];
      cplx term = plain_real ? cplx(std::pow(v, -w.real())) : std::exp(-w * std::log(cplx(v)));
      sum.add(m * term);
      points += m;
    }
  } else {
    detail::EnumContext ctx(q);
    if (plain_real) {
      double wr = w.real();
      detail::enumerate_half_values(ctx, R, [&](double v) {
        sum.add(cplx(2.0 * std::pow(v, -wr)));
        points += 2.0;
      });
    } else {
      detail::enumerate_half_values(ctx, R, [&](double v) {
        double lv = std::log(v);
        double mod = 2.0 * std::exp(-w.real() * lv);
        double ph = -w.imag() * lv;
        sum.add(mod * cplx(std::cos(ph), std::sin(ph)));
        points += 2.0;
      });
    }
  }
  EvalResult res;
  res.value = sum.value();
  res.radius = R;
  res.points = points;
  res.err = C * std::pow(R, 0.5 * k - sw) + 1e-15 * std::sqrt(points) * std::abs(res.value);
  return res;
}

// ---------------------------------------------------------------------------
// smoothed approximate functional equation
// ---------------------------------------------------------------------------

double weight_cutoff_y(int k, double t, double eps) {
  // |W(y)| <~ e^{-L^2/4 + 2.5} with L = log(y / Y0), Y0 = (k t / 2 pi e)^{k/2}
  double y0 = std::pow(k * std::max(std::abs(t), 1.0) / (2.0 * kPi * std::exp(1.0)), 0.5 * k);
  double L = 2.0 * std::sqrt(std::max(std::log(1.0 / eps), 1.0) + 2.5);
  return y0 * std::exp(L);
}

WeightTable::WeightTable(int k, double t, int sign, double y_min, double y_max) {
  // W(y) = (1/2 pi) int e^{(1+iv)^2} [Gamma_R(k(s_b+1+iv))/Gamma_R(k s_b)]
  //        y^{-(1+iv)} dv / (1+iv),  s_b = 1/2 + i sign t.
  y_max_ = y_max;
  cplx sb(0.5, sign * t);
  cplx lgs = log_gamma_R(static_cast<double>(k) * sb);
  // contour reach: e^{1-v^2} against Gamma-ratio growth ~ e^{pi k |v| / 4}
  double piK = kPi * k / 4.0;
  double V = 0.5 * (piK + std::sqrt(piK * piK + 4.0 * 46.0));
  x0_ = std::log(std::max(y_min, 1e-6)) - 0.1;
  double x1 = std::log(y_max) + 0.1;
  h_ = 0.05;
  int n = static_cast<int>(std::ceil((x1 - x0_) / h_)) + 9;

  double xabs = std::max(std::abs(x0_), std::abs(x1));
  double panel = std::min(0.5, 2.0 * kPi / (6.0 * std::max(1.0, xabs)));
  const auto& gx = GL16::nodes();
  const auto& gw = GL16::weights();
  std::vector<double> vs;
  std::vector<cplx> cw;
  for (double p0 = -V; p0 < V; p0 += panel) {
    double p1 = std::min(p0 + panel, V);
    double mid = 0.5 * (p0 + p1), half = 0.5 * (p1 - p0);
    for (int i = 0; i < 16; ++i) {
      double v = mid + half * gx[i];
      cplx u(1.0, v);
      cplx ratio = std::exp(log_gamma_R(static_cast<double>(k) * (sb + u)) - lgs);
      cw.push_back(gw[i] * half * std::exp(u * u) * ratio / u / (2.0 * kPi));
      vs.push_back(v);
    }
  }
  grid_.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = x0_ + i * h_;
    KahanSumC acc;
    for (std::size_t j = 0; j < vs.size(); ++j)
      acc.add(cw[j] * cplx(std::cos(vs[j] * x), -std::sin(vs[j] * x)));
    grid_[i] = acc.value() * std::exp(-x);
  }
}

cplx WeightTable::operator()(double y) const {
  double x = std::log(y);
  if (x >= x0_ + h_ * (static_cast<double>(grid_.size()) - 1.0)) return 0.0;
  double u = (x - x0_) / h_;
  int64_t i0 = static_cast<int64_t>(std::floor(u)) - 3;
  i0 = std::clamp<int64_t>(i0, 0, static_cast<int64_t>(grid_.size()) - 8);
  double tt = u - static_cast<double>(i0);
  static const double bw[8] = {-1.0 / 5040, 1.0 / 720, -1.0 / 240, 1.0 / 144,
                               -1.0 / 144,  1.0 / 240, -1.0 / 720, 1.0 / 5040};
  double den = 0, sr = 0, si = 0;
  for (int j = 0; j < 8; ++j) {
    double d = tt - j;
    if (std::abs(d) < 1e-12) return grid_[i0 + j];
    double wj = bw[j] / d;
    den += wj;
    sr += wj * grid_[i0 + j].real();
    si += wj * grid_[i0 + j].imag();
  }
  return cplx(sr / den, si / den);
}

EvalResult evaluate_afe(const QuadraticForm& q, double t, const EvalOptions& opt) {
  if (std::abs(t) < 10.0) fail(errc::regime, "evaluate_afe needs |t| >= 10");
  const int k = q.k();
  if (std::abs(0.5 * k * t) > 1e4) fail(errc::envelope_exceeded, "|Im(ks/2)| beyond envelope");
  QuadraticForm qinv = inverse_form(q);
  const cplx s(0.5, t);
  const cplx w = 0.5 * static_cast<double>(k) * s;

  const double eps_w = 1e-10;
  double y_cut = weight_cutoff_y(k, t, eps_w);
  double R = std::pow(y_cut, 2.0 / k);
  double predicted = predicted_point_count(q, R) + predicted_point_count(qinv, R);
  if (predicted > opt.config.budget) fail(errc::budget, "afe truncation exceeds the budget");

  double ymin = std::pow(0.9 * std::min(q.lambda_min(), qinv.lambda_min()), 0.5 * k);
  WeightTable Wp(k, t, +1, std::min(ymin, 1.0), y_cut);
  WeightTable Wm(k, t, -1, std::min(ymin, 1.0), y_cut);

  KahanSumC Sp, Sm;
  double points = 0.0, absp = 0.0, absm = 0.0;
  detail::EnumContext ctx1(q), ctx2(qinv);
  const double halfk = 0.5 * k;
  detail::enumerate_half_values(ctx1, R, [&](double v) {
    double lv = std::log(v);
    cplx wt = Wp(std::exp(halfk * lv) * 1.0);
    double mod = 2.0 * std::exp(-w.real() * lv);
    double ph = -w.imag() * lv;
    cplx term = wt * (mod * cplx(std::cos(ph), std::sin(ph)));
    Sp.add(term);
    absp += std::abs(term);
    points += 2.0;
  });
  const cplx wbar = std::conj(w);  // k(1-s)/2 on the critical line
  detail::enumerate_half_values(ctx2, R, [&](double v) {
    double lv = std::log(v);
    cplx wt = Wm(std::exp(halfk * lv) * 1.0);
    double mod = 2.0 * std::exp(-wbar.real() * lv);
    double ph = -wbar.imag() * lv;
    cplx term = wt * (mod * cplx(std::cos(ph), std::sin(ph)));
    Sm.add(term);
    absm += std::abs(term);
    points += 2.0;
  });

  cplx pref = std::exp(log_gamma_R(static_cast<double>(k) * (1.0 - s)) -
                       log_gamma_R(static_cast<double>(k) * s)) /
              std::sqrt(q.det());

  // exact polar corrections from the contour shift (size ~ e^{-t^2} here)
  cplx lgRs = log_gamma_R(static_cast<double>(k) * s);
  cplx lgG1 = log_gamma_R(cplx(static_cast<double>(k)));
  cplx lr1 = (1.0 - s) * (1.0 - s) + lgG1 - std::log(1.0 - s) - lgRs;
  cplx R1 = (lr1.real() < -700) ? 0.0 : std::exp(lr1) * residue_at_1(q);
  cplx lr0 = s * s - std::log(static_cast<double>(k) * s) - lgRs + std::log(2.0);
  cplx R0 = (lr0.real() < -700) ? 0.0 : std::exp(lr0);

  EvalResult res;
  res.value = Sp.value() + pref * Sm.value() - R1 - R0;
  res.radius = R;
  res.points = points;
  res.err = 50.0 * eps_w * (1.0 + std::pow(R, 0.25 * k)) + 1e-9 * (absp + absm) + 1e-12;
  return res;
}

}  // namespace ez
