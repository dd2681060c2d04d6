#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ez/common.hpp"

namespace ez {

// Positive-definite quadratic form Q(x) = x^T Z x. Immutable after
// construction; the Cholesky factor and eigenvalue bounds are cached so the
// enumerators and evaluators never re-factor.
class QuadraticForm {
 public:
  int k() const { return k_; }
  double gram(int i, int j) const { return gram_[i * k_ + j]; }
  const std::vector<double>& gram_data() const { return gram_; }
  double det() const { return det_; }
  // Upper-triangular U with Z = U^T U (row-major, zeros below diagonal).
  const std::vector<double>& chol_upper() const { return chol_; }
  double lambda_min() const { return lambda_min_; }
  double lambda_max() const { return lambda_max_; }

  double value(std::span<const int64_t> x) const;
  double value(std::span<const double> x) const;

  // True when Q takes integer values on Z^k (integer diagonal, half-integer
  // off-diagonal entries); lets the lattice layer bin values exactly.
  bool integer_valued() const { return integer_valued_; }
  // Digest of the rounded Gram matrix; identical forms (up to 1e-12 relative
  // entry-wise) share lattice caches.
  uint64_t digest() const { return digest_; }

  QuadraticForm() = default;  // empty shell; every real instance comes from make_form

 private:
  friend QuadraticForm make_form(int k, const std::vector<double>& gram);

  int k_ = 0;
  std::vector<double> gram_;
  std::vector<double> chol_;
  double det_ = 0.0;
  double lambda_min_ = 0.0, lambda_max_ = 0.0;
  bool integer_valued_ = false;
  uint64_t digest_ = 0;
};

// Validates, symmetrizes (tolerance 1e-12 relative) and factors the matrix.
// Throws NotSymmetric / NotPositiveDefinite / BadDimension.
QuadraticForm make_form(int k, const std::vector<double>& gram);

// Form with Gram matrix Z^{-1}; det(Q) * det(inverse) == 1 to 1e-12.
QuadraticForm inverse_form(const QuadraticForm& q);

struct BinaryReduction {
  QuadraticForm form;                 // reduced: |b| <= a <= c
  std::array<int64_t, 4> transform;  // column-action U with Z_red = U^T Z U
};

// Gauss reduction of a binary form, coefficients (a,b,c) = (Z11, 2*Z12, Z22).
// Ties are resolved to b >= 0 when |b| == a or a == c.
BinaryReduction reduce_binary(const QuadraticForm& q);

// Diagonal Gram with entries drawn uniformly from [lo, hi]; same seed gives
// the identical form on every platform.
QuadraticForm random_diagonal_form(int k, double lo, double hi, uint64_t seed);

// Random positive-definite test form: uniform diagonal in [lo, hi] conjugated
// by a short product of elementary unimodular matrices.
QuadraticForm random_form(int k, double lo, double hi, uint64_t seed);

// JSON object {"k": int, "gram": [[...], ...]}.
std::string form_to_json(const QuadraticForm& q);
QuadraticForm form_from_json(const std::string& text);
QuadraticForm load_form_file(const std::string& path);

}  // namespace ez
