#pragma once

#include <cstdint>
#include <vector>

#include "levyma/simulate.hpp"

namespace levyma {

struct PowerVariationReport {
  double p = 2.0;
  int k = 1;
  std::int64_t n = 0;
  double V = 0.0;
  double scaled_r1 = 0.0;  // n^(alpha p) V
  double scaled_r2 = 0.0;  // n^(alpha p) V / ln n
  double alpha_used = 0.0;
};

// Entry i - k (i = k..n) is sum_j (-1)^j binom(k, j) X_{(i-j)/n}, evaluated as
// k rounds of first differences.
std::vector<double> increments(const std::vector<double>& values, int k);
std::vector<double> increments(const SamplePath& path, int k);

// Single pass over path values; the sum runs in ascending i.
class PowerVariationAccumulator {
 public:
  PowerVariationAccumulator(int k, double p);
  void push(double x);
  double value() const { return sum_; }
  double max_term() const { return max_term_; }
  std::int64_t count() const { return count_; }

 private:
  int k_;
  double p_;
  std::vector<double> last_;  // latest difference of each order 0..k-1
  std::int64_t seen_ = 0;
  std::int64_t count_ = 0;
  double sum_ = 0.0;
  double max_term_ = 0.0;
};

PowerVariationReport power_variation(const SamplePath& path, double p, int k, double alpha);
PowerVariationReport power_variation(const std::vector<double>& values, double p, int k,
                                     double alpha);

// Fills the two scaled fields from V, n, alpha and p.
PowerVariationReport make_report(double V, std::int64_t n, double p, int k, double alpha);

}  // namespace levyma
