#include "ez/forms.hpp"

#include <algorithm>
#include <cmath>

namespace ez {

namespace {

// Cyclic Jacobi on a copy of the Gram matrix; only the extreme eigenvalues
// are kept. k <= 10 at desk scale, cost is negligible.
void jacobi_extremes(int k, std::vector<double> a, double* emin, double* emax) {
  auto at = [&](int i, int j) -> double& { return a[i * k + j]; };
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-22) break;
    for (int p = 0; p < k; ++p) {
      for (int q = p + 1; q < k; ++q) {
        double apq = at(p, q);
        if (std::abs(apq) < 1e-300) continue;
        double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int i = 0; i < k; ++i) {
          double aip = at(i, p), aiq = at(i, q);
          at(i, p) = c * aip - s * aiq;
          at(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < k; ++i) {
          double api = at(p, i), aqi = at(q, i);
          at(p, i) = c * api - s * aqi;
          at(q, i) = s * api + c * aqi;
        }
      }
    }
  }
  double lo = a[0], hi = a[0];
  for (int i = 1; i < k; ++i) {
    lo = std::min(lo, at(i, i));
    hi = std::max(hi, at(i, i));
  }
  *emin = lo;
  *emax = hi;
}

uint64_t fnv1a(const void* data, std::size_t n, uint64_t h = 1469598103934665603ull) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

bool near_integer(double v, double tol, int64_t* out) {
  double r = std::nearbyint(v);
  if (std::abs(v - r) <= tol) {
    *out = static_cast<int64_t>(r);
    return true;
  }
  return false;
}

}  // namespace

double QuadraticForm::value(std::span<const int64_t> x) const {
  // Q(x) = ||U x||^2 via the cached Cholesky factor; all pivots positive.
  double q = 0.0;
  for (int i = 0; i < k_; ++i) {
    double row = 0.0;
    for (int j = i; j < k_; ++j) row += chol_[i * k_ + j] * static_cast<double>(x[j]);
    q += row * row;
  }
  return q;
}

double QuadraticForm::value(std::span<const double> x) const {
  double q = 0.0;
  for (int i = 0; i < k_; ++i) {
    double row = 0.0;
    for (int j = i; j < k_; ++j) row += chol_[i * k_ + j] * x[j];
    q += row * row;
  }
  return q;
}

QuadraticForm make_form(int k, const std::vector<double>& gram) {
  if (k < 2) fail(errc::bad_dimension, "form dimension must be >= 2, got " + std::to_string(k));
  if (gram.size() != static_cast<std::size_t>(k) * k)
    fail(errc::bad_dimension, "gram matrix is not k x k");

  double scale = 0.0;
  for (double v : gram) {
    if (!std::isfinite(v)) fail(errc::bad_input, "gram entries must be finite");
    scale = std::max(scale, std::abs(v));
  }
  if (scale == 0.0) fail(errc::not_positive_definite, "zero matrix");

  QuadraticForm q;
  q.k_ = k;
  q.gram_.assign(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      double a = gram[i * k + j], b = gram[j * k + i];
      if (std::abs(a - b) > 1e-12 * scale)
        fail(errc::not_symmetric, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                      ") differs from its transpose beyond tolerance");
      double v = 0.5 * (a + b);
      q.gram_[i * k + j] = v;
      q.gram_[j * k + i] = v;
    }
  }

  // Cholesky Z = U^T U, U upper; failure of a pivot is the definiteness test.
  q.chol_.assign(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      double s = q.gram_[i * k + j];
      for (int m = 0; m < i; ++m) s -= q.chol_[m * k + i] * q.chol_[m * k + j];
      if (i == j) {
        if (s <= 1e-14 * scale)
          fail(errc::not_positive_definite, "Cholesky pivot " + std::to_string(i) + " is not positive");
        q.chol_[i * k + i] = std::sqrt(s);
      } else {
        q.chol_[i * k + j] = s / q.chol_[i * k + i];
      }
    }
  }
  double det = 1.0;
  for (int i = 0; i < k; ++i) det *= q.chol_[i * k + i] * q.chol_[i * k + i];
  q.det_ = det;

  jacobi_extremes(k, q.gram_, &q.lambda_min_, &q.lambda_max_);

  q.integer_valued_ = true;
  for (int i = 0; i < k && q.integer_valued_; ++i)
    for (int j = i; j < k; ++j) {
      int64_t dummy;
      double v = (i == j) ? q.gram_[i * k + j] : 2.0 * q.gram_[i * k + j];
      if (!near_integer(v, 1e-12 * std::max(1.0, scale), &dummy)) {
        q.integer_valued_ = false;
        break;
      }
    }

  // Digest over entries rounded to ~1e-12 relative plus the overall scale,
  // so a form and the inverse of its inverse hash identically while scaled
  // copies of the same shape stay distinct.
  std::vector<int64_t> quantized(q.gram_.size() + 2);
  double sc = q.gram_[0];
  for (double v : q.gram_) sc = std::max(sc, std::abs(v));
  for (std::size_t i = 0; i < q.gram_.size(); ++i)
    quantized[i] = static_cast<int64_t>(std::nearbyint(q.gram_[i] / sc * 1e12));
  int sexp = 0;
  double smant = std::frexp(sc, &sexp);
  quantized[q.gram_.size()] = static_cast<int64_t>(std::nearbyint(smant * (int64_t{1} << 40)));
  quantized[q.gram_.size() + 1] = sexp;
  uint64_t h = fnv1a(&k, sizeof(k));
  h = fnv1a(quantized.data(), quantized.size() * sizeof(int64_t), h);
  q.digest_ = h;
  return q;
}

QuadraticForm inverse_form(const QuadraticForm& q) {
  int k = q.k();
  const std::vector<double>& u = q.chol_upper();
  // Invert U (upper triangular), then Z^{-1} = U^{-1} U^{-T}.
  std::vector<double> inv(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = k - 1; i >= 0; --i) {
    inv[i * k + i] = 1.0 / u[i * k + i];
    for (int j = i + 1; j < k; ++j) {
      double s = 0.0;
      for (int m = i + 1; m <= j; ++m) s += u[i * k + m] * inv[m * k + j];
      inv[i * k + j] = -s / u[i * k + i];
    }
  }
  std::vector<double> g(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      double s = 0.0;
      for (int m = std::max(i, j); m < k; ++m) s += inv[i * k + m] * inv[j * k + m];
      g[i * k + j] = s;
      g[j * k + i] = s;
    }
  return make_form(k, g);
}

BinaryReduction reduce_binary(const QuadraticForm& q) {
  if (q.k() != 2) fail(errc::bad_dimension, "reduce_binary requires k = 2");
  double a = q.gram(0, 0), b = 2.0 * q.gram(0, 1), c = q.gram(1, 1);
  // U acts on coordinates: new Gram is U^T Z U. Stored row-major 2x2.
  int64_t u00 = 1, u01 = 0, u10 = 0, u11 = 1;
  auto apply = [&](int64_t m00, int64_t m01, int64_t m10, int64_t m11) {
    int64_t n00 = u00 * m00 + u01 * m10;
    int64_t n01 = u00 * m01 + u01 * m11;
    int64_t n10 = u10 * m00 + u11 * m10;
    int64_t n11 = u10 * m01 + u11 * m11;
    u00 = n00; u01 = n01; u10 = n10; u11 = n11;
  };
  for (int iter = 0; iter < 256; ++iter) {
    if (c < a) {  // (x,y) -> (-y,x): (a,b,c) -> (c,-b,a)
      std::swap(a, c);
      b = -b;
      apply(0, -1, 1, 0);
      continue;
    }
    if (std::abs(b) > a) {  // shift x -> x - m y
      double m = std::nearbyint(b / (2.0 * a));
      int64_t mi = static_cast<int64_t>(m);
      double bn = b - 2.0 * a * m;
      double cn = c - b * m + a * m * m;
      b = bn;
      c = cn;
      apply(1, -mi, 0, 1);
      continue;
    }
    break;
  }
  if (c < a || std::abs(b) > a + 1e-9 * a)
    fail(errc::bad_input, "binary reduction failed to converge");
  // Tie normalization: b >= 0 when |b| == a or a == c.
  if (b < 0 && (std::abs(std::abs(b) - a) <= 1e-12 * a || std::abs(a - c) <= 1e-12 * c)) {
    b = -b;
    apply(1, 0, 0, -1);
  }
  std::vector<double> g = {a, b / 2.0, b / 2.0, c};
  BinaryReduction out;
  out.form = make_form(2, g);
  out.transform = {u00, u01, u10, u11};
  return out;
}

QuadraticForm random_diagonal_form(int k, double lo, double hi, uint64_t seed) {
  if (k < 2) fail(errc::bad_dimension, "k must be >= 2");
  if (lo <= 0.0 || lo > hi) fail(errc::bad_range, "need 0 < lo <= hi");
  SplitMix64 rng(seed);
  std::vector<double> g(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) g[i * k + i] = rng.uniform(lo, hi);
  return make_form(k, g);
}

QuadraticForm random_form(int k, double lo, double hi, uint64_t seed) {
  QuadraticForm d = random_diagonal_form(k, lo, hi, seed);
  SplitMix64 rng(seed ^ 0xabcdef1234567890ull);
  std::vector<double> g = d.gram_data();
  // Conjugate by a few elementary shears E = I + m e_i e_j^T (x_i += m x_j):
  // Z -> E^T Z E keeps the determinant and breaks diagonality.
  int ops = 2 + static_cast<int>(rng.below(3));
  for (int t = 0; t < ops; ++t) {
    int i = static_cast<int>(rng.below(static_cast<uint64_t>(k)));
    int j = static_cast<int>(rng.below(static_cast<uint64_t>(k)));
    if (i == j) continue;
    double m = (rng.next() & 1) ? 1.0 : -1.0;
    for (int r = 0; r < k; ++r) g[r * k + j] += m * g[r * k + i];  // Z E
    for (int c = 0; c < k; ++c) g[j * k + c] += m * g[i * k + c];  // E^T (Z E)
    for (int r = 0; r < k; ++r)
      for (int c = r + 1; c < k; ++c) {
        double v = 0.5 * (g[r * k + c] + g[c * k + r]);
        g[r * k + c] = v;
        g[c * k + r] = v;
      }
  }
  return make_form(k, g);
}

}  // namespace ez
