#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace levyma {

// Symmetric jump-size laws for the compound Poisson driver.
struct TwoPointLaw {
  double a = 1.0;  // sizes are +a or -a with probability 1/2
};
struct GaussianLaw {
  double sigma = 1.0;
};
struct ParetoLaw {
  double scale = 1.0;  // |J| = scale * U^(-1/shape)
  double shape = 2.0;
};
using JumpLaw = std::variant<TwoPointLaw, GaussianLaw, ParetoLaw>;

struct CompoundPoisson {
  double rate = 1.0;
  JumpLaw law = GaussianLaw{};
};

// Big-jump part of a symmetric stable driver with Levy measure
// nu(dx) = scale * |x|^(-1-beta) dx restricted to |x| > cutoff.
// When proposal_cutoff is set, jumps are proposed at that smaller level and
// filtered, so records for different cutoffs are nested.
struct SymStable {
  double beta = 1.5;
  double scale = 1.0;
  double cutoff = 0.1;
  std::optional<double> proposal_cutoff;
};

struct LevySpec {
  std::variant<CompoundPoisson, SymStable> kind = CompoundPoisson{};
  std::uint64_t seed = 0;

  void validate() const;
  bool is_stable() const { return std::holds_alternative<SymStable>(kind); }
  // Canonical text form; the hash below is FNV-1a of this string.
  std::string canonical() const;
  std::uint64_t hash() const;
};

// Left-open, right-closed interval (a, b] for power sums; closed [a, b] for windows.
struct Interval {
  double a = 0.0;
  double b = 1.0;
};

struct JumpOrigin {
  std::uint64_t levy_hash = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

class JumpRecord {
 public:
  JumpRecord() = default;
  // Throws PreconditionError unless times are strictly increasing inside the
  // window, sizes are finite and nonzero, and lengths agree.
  JumpRecord(Interval window, std::vector<double> times, std::vector<double> sizes,
             JumpOrigin origin = {});

  const Interval& window() const { return window_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& sizes() const { return sizes_; }
  const JumpOrigin& origin() const { return origin_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }

  // Jumps with time in the closed interval, window shrunk accordingly.
  JumpRecord restricted(Interval closed) const;
  // Jumps with lo < |size| <= hi.
  JumpRecord with_sizes_in(double lo, double hi) const;
  JumpRecord scaled(double c) const;

 private:
  Interval window_{0.0, 1.0};
  std::vector<double> times_;
  std::vector<double> sizes_;
  JumpOrigin origin_;
};

// Expected number of jumps per unit time with |size| > cutoff.
double stable_intensity(double beta, double scale, double cutoff);

JumpRecord simulate_jumps(const LevySpec& spec, Interval window, std::uint64_t stream);

double bg_index(const LevySpec& spec);

// sum over jumps with time in (a, b] of |size|^p.
double power_sum(const JumpRecord& jumps, double p, Interval half_open);

// Well-separated event: (a) jump pairs touching [-theta_l, 1] are more than
// 2 eps apart, (b) no T_m + theta_z - theta_z' is within 2 eps of another jump
// time in that range, (c) no jump within eps of -theta_z or 1 - theta_z.
bool check_omega_eps(const JumpRecord& jumps, const std::vector<double>& thetas, double eps);

// No pair s, s' with |s - s'| <= spacing or |s - s' - 1| <= spacing.
bool check_toy_separation(const JumpRecord& jumps, double spacing);

// Smallest distance between consecutive jump times (infinity for fewer than two).
double min_spacing(const JumpRecord& jumps);

// Expected |J| activity per unit time; infinite for stable drivers with beta <= 1.
double mean_abs_activity(const LevySpec& spec);

}  // namespace levyma
