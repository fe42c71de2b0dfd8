#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levyma/kernels.hpp"
#include "levyma/levy.hpp"

namespace levyma {

struct PathProvenance {
  std::string kernel_id;
  std::uint64_t levy_hash = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  double window_a = 0.0;
  double window_b = 1.0;
  std::size_t jumps_used = 0;
};

struct SamplePath {
  std::int64_t n = 0;
  std::vector<double> values;  // X_{i/n}, i = 0..n
  double past_window = 0.0;
  PathProvenance provenance;
};

// X_{i/n} = sum_m J_m (g(i/n - T_m) - g0(-T_m)) over jumps in [-T_past, 1].
// T_past defaults to kernel.default_past_window(). Throws PreconditionError if
// the record window does not cover [-T_past, 1].
SamplePath simulate_path(const KernelSpec& kernel, const JumpRecord& jumps, std::int64_t n,
                         std::optional<double> past_window = std::nullopt);

// Adds the contribution of `jumps` to an existing path (no window check).
void accumulate_path(const KernelSpec& kernel, const JumpRecord& jumps, std::int64_t n,
                     std::vector<double>& values);

struct TruncationReport {
  double past_window = 0.0;
  // Bound on E sup_{t in [0,1]} |d/dt of the omitted part|, i.e. the expected
  // activity times int_{T_past}^inf sup_{t in [0,1]} |g'(t + u)| du.
  double lipschitz_bound = 0.0;

  // Omitted part of one k-th order increment: |Delta| <= 2^(k-1) L / n.
  double increment_bound(std::int64_t n, int k) const;
  // Omitted part of the power variation, first order in the increment bound.
  double power_variation_bound(std::int64_t n, int k, double p) const;
};

TruncationReport truncation_error_report(const KernelSpec& kernel, const LevySpec& levy,
                                         double past_window);

}  // namespace levyma
