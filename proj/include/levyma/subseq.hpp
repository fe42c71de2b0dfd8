#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace levyma {

// x - floor(x), kept strictly below 1 when rounding would give 1.0.
double frac(double x);

// Distance on the circle [0, 1) with wraparound.
double circle_distance(double a, double b);

struct RationalTheta {
  std::size_t index = 0;  // position in SubsequencePlan::thetas
  std::int64_t p = 0;
  std::int64_t q = 1;
  // Fractional parts {n theta} can reach only j / q, j = 0..q-1.
};

struct SubsequencePlan {
  std::vector<double> thetas;
  std::vector<double> etas;
  double tolerance = 0.0;
  std::vector<std::int64_t> terms;
  std::vector<std::vector<double>> achieved;  // {n_j theta_z} per term
  std::vector<double> residuals;              // max_z circle distance per term
  std::int64_t best_n = 0;                    // smallest residual in the scanned range
  double best_residual = 1.0;
  std::vector<RationalTheta> rational;
  // Per theta: true when the target eta lies on the reachable set (always
  // true for irrational theta).
  std::vector<bool> reachable;

  bool empty() const { return terms.empty(); }
};

// Scans n in [n_min, n_max] for max_z dist({n theta_z}, eta_z) <= tolerance.
SubsequencePlan find_subsequence(const std::vector<double>& thetas,
                                 const std::vector<double>& etas, double tolerance,
                                 std::int64_t n_min, std::int64_t n_max,
                                 std::size_t max_terms);

// Continued-fraction test: returns p/q when |theta - p/q| <= 8 eps max(1, |theta|)
// with q <= max_q.
std::optional<std::pair<std::int64_t, std::int64_t>> rational_approximation(double theta,
                                                                            std::int64_t max_q);

using DensitySampler = std::function<double(std::mt19937_64&)>;

// Beta(2, 2) as the median of three uniforms.
double sample_beta22(std::mt19937_64& rng);

// One-sample KS distance to the uniform law on [0, 1).
double ks_uniform(std::vector<double> sample);

// KS distance of {n T + n theta} to uniform for each n; draws are fresh per n,
// from stream (seed, position of n, shift_law domain).
std::vector<double> shift_law_check(const DensitySampler& sampler, double theta,
                                    const std::vector<std::int64_t>& n_terms,
                                    std::int64_t draws, std::uint64_t seed);

}  // namespace levyma
