#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "levyma/kernels.hpp"
#include "levyma/levy.hpp"

namespace levyma {

struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;
  std::int64_t R = 0;
};

// Bound on the omitted terms |r| > R of sum_r |h(r + 1 - shift)|^p, from
// |h(x)| <= |q_{k,alpha}| (|x| - k)^(alpha - k) for |x| > k.
double series_tail_bound(int k, double alpha, bool one_sided, double p, std::int64_t R);

// Smallest R (doubling from 2k + 2) with tail_bound(R) < 1e-8 value(R), capped at 10^6.
std::int64_t default_truncation(int k, double alpha, bool one_sided, double p,
                                double shift = 0.5);

// sum_{|r| <= R} |h(r + 1 - {shift})|^p with h = h_k (one_sided) or h_{k,z}.
// Throws PreconditionError unless alpha < k - 1/p and R >= 2k + 2.
SeriesValue series_Vmz(int k, double alpha, bool one_sided, double p, double shift,
                       std::optional<std::int64_t> R = std::nullopt);

// Fast evaluation of series_Vmz for many shifts at a fixed truncation R:
// the terms |r| <= R0 are summed directly, the rest (R0 < |r| <= R) is
// interpolated in the shift from Chebyshev nodes.
class SeriesTable {
 public:
  SeriesTable(int k, double alpha, bool one_sided, double p, std::int64_t R);

  SeriesValue operator()(double shift) const;
  std::int64_t R() const { return R_; }
  // Largest interpolation error seen at off-node check points.
  double interpolation_error() const { return interp_error_; }

 private:
  double core(double shift) const;
  double far(double shift) const;

  int k_;
  double alpha_;
  bool one_sided_;
  double p_;
  std::int64_t R_;
  std::int64_t R0_;
  double tail_bound_;
  double interp_error_ = 0.0;
  LimitFunction h_;
  std::vector<double> cheb_;  // Chebyshev coefficients of the far part on [0, 1]
};

// Process-wide cache keyed by (k, alpha, one_sided, p, R). Thread safe.
std::shared_ptr<const SeriesTable> series_table(int k, double alpha, bool one_sided, double p,
                                                std::optional<std::int64_t> R = std::nullopt);

enum class Regime { r1, r1_coupled, r2, toy };
std::string regime_name(Regime r);

struct JumpContribution {
  std::size_t jump_index = 0;
  double time = 0.0;
  double size = 0.0;
  std::size_t z = 0;
  double shift = 0.0;
  double series = 0.0;
  double contribution = 0.0;
};

struct LimitSample {
  Regime regime = Regime::r1;
  double value = 0.0;
  std::int64_t R = 0;
  double tail_bound = 0.0;
  std::optional<std::vector<double>> u_draws;
  std::vector<double> etas;
  std::vector<JumpContribution> contributions;
};

struct LimitOptions {
  std::optional<std::int64_t> R;
  bool verbose = false;
  // Sum the series directly instead of through the cached table.
  bool direct = false;
};

// Throws PreconditionError unless max_z alpha_z < k - 1/p.
void check_regime1(const KernelSpec& kernel, double p, int k);
// Throws PreconditionError unless every alpha_z equals k - 1/p.
void check_regime2(const KernelSpec& kernel, double p, int k);

// One uniform U_m per jump in record order, shared across z in A;
// shift = {U_m + eta_z}; jumps counted when T_m in (-theta_z, 1 - theta_z].
LimitSample limit_regime1(const KernelSpec& kernel, const JumpRecord& jumps,
                          const std::vector<double>& etas, double p, int k,
                          std::mt19937_64& u_source, const LimitOptions& opt = {});

// As limit_regime1 with shift = {n T_m + n theta_z} from the jump times.
LimitSample limit_regime1_coupled(const KernelSpec& kernel, const JumpRecord& jumps,
                                  std::int64_t n, double p, int k, const LimitOptions& opt = {});

LimitSample limit_regime2(const KernelSpec& kernel, const JumpRecord& jumps, double p, int k);

double limit_toy(const JumpRecord& jumps, double p);

}  // namespace levyma
