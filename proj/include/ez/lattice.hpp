#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "ez/forms.hpp"

namespace ez {

struct LatticePoint {
  std::vector<int64_t> coords;  // x != 0
  double value;                 // Q(x) > 0
};

// Streams every x in Z^k \ {0} with Q(x) <= R exactly once, in lexicographic
// order on coordinates from the last to the first. The Cholesky box-bound
// recursion makes the enumeration exhaustive. Throws CutoffTooLarge when the
// ellipsoid volume predicts more points than `budget`.
void enumerate_below(const QuadraticForm& q, double R,
                     const std::function<void(std::span<const int64_t>, double)>& emit,
                     double budget = 1e9);

// Half-lattice stream: one of each {x, -x} pair with multiplicity 2. The fast
// path behind every lattice sum; order is deterministic but unspecified.
void enumerate_values(const QuadraticForm& q, double R,
                      const std::function<void(double value, double mult)>& emit,
                      double budget = 1e9);

// Predicted point count (ellipsoid volume), used for budget checks.
double predicted_point_count(const QuadraticForm& q, double R);

struct RepCounts {
  int k = 0;
  int64_t N = 0;
  std::vector<int64_t> counts;  // counts[n-1] = r_k(n), 1 <= n <= N
  int64_t r(int64_t n) const { return (n >= 1 && n <= N) ? counts[n - 1] : 0; }
};

// r_k(n) = #{x in Z^k : ||x||^2 = n} for 1 <= n <= N, exact integers.
// Computed by convolving theta-series coefficient vectors, so large k stays
// cheap; enumeration serves as the independent cross-check in the tests.
RepCounts representation_counts(int k, int64_t N, double budget = 1e9);

// Aggregated Q-values with multiplicities for all nonzero points with
// Q <= R, sorted ascending. Integer-valued forms are binned exactly.
struct ValueArray {
  double R = 0.0;
  bool integral = false;
  double point_count = 0.0;       // total lattice points represented
  std::vector<double> values;     // distinct values, ascending
  std::vector<double> mults;      // multiplicities (exact integers)
};

// Process-wide cache of aggregated value arrays keyed by form digest.
// Entries only ever grow in R; concurrent readers share immutable snapshots.
class LatticeCache {
 public:
  static LatticeCache& instance();
  std::shared_ptr<const ValueArray> get(const QuadraticForm& q, double R, double budget);
  void clear();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  LatticeCache();
  ~LatticeCache();
};

// Builds the aggregated array without touching the cache.
ValueArray build_value_array(const QuadraticForm& q, double R, double budget);

// c > 0 when the form is c * I_k (counts come from the exact theta-power
// convolution instead of enumeration); 0 otherwise.
double scaled_identity_factor(const QuadraticForm& q);

}  // namespace ez
