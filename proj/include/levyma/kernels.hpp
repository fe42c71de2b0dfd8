#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace levyma {

/// Local power-law behaviour g(t) ~ c |t - theta|^alpha at a singularity point.
struct SingularPoint {
  double theta = 0.0;
  double alpha = 0.5;
  double c = 1.0;
};

/// How the singular pieces are assembled into a kernel.
///  - indicator: g = 1_[0,1]; the points 0 and 1 play the role of singularities.
///  - power:     g(t) = c_0 t_+^alpha_0 (one point at theta = 0).
///  - bump_exp:  g(t) = sum_z c_z |t - theta_z|^alpha_z rho_z(t), where rho_z is a
///               C-infinity bump equal to 1 within delta of theta_z and zero beyond
///               2 delta. The right flank of the last piece decays like
///               exp(-(t - theta_l - 2 delta)) instead of being cut off.
enum class Envelope { indicator, power, bump_exp };

enum class G0Mode { zero, equal_to_g, custom };

struct KernelSpec {
  std::string name;
  std::vector<SingularPoint> singularities;
  Envelope envelope = Envelope::bump_exp;
  G0Mode g0_mode = G0Mode::zero;
  std::vector<SingularPoint> g0_singularities;  // read only when g0_mode == custom
  double w = 1.0;
  int k_max = 1;
  std::optional<double> delta;  // bump radius; defaults to min gap / 4

  /// Throws PreconditionError when an invariant is violated.
  void validate() const;

  /// Singularity locations theta_0 = 0 < ... < theta_l. For the indicator
  /// kernel these are {0, 1}.
  std::vector<double> thetas() const;

  /// Radius on which the bump_exp kernel equals its local power law exactly.
  double bump_radius() const;

  /// Right end of the support of g (infinite unless the kernel is compactly supported).
  double support_end() const;

  /// Default truncation of the past: jumps are simulated on [-T_past, 1].
  double default_past_window() const;

  /// Short identifier used in report rows.
  std::string id() const;
};

KernelSpec indicator_kernel();
KernelSpec lfsm_kernel(double alpha, double c = 1.0);
KernelSpec multising_kernel(std::vector<SingularPoint> points, G0Mode g0_mode = G0Mode::zero,
                            double w = 1.0);

/// g(t); exactly 0.0 for t < 0.
double eval_g(const KernelSpec& spec, double t);
double eval_g0(const KernelSpec& spec, double t);

/// g'(t) away from the singularity points. Analytic on the exponential flank
/// and for the power kernel, central differences elsewhere.
double eval_g_derivative(const KernelSpec& spec, double t);

/// (-1)^j binom(k, j), j = 0..k.
std::vector<std::int64_t> filter_weights(int k);

/// sum_j (-1)^j binom(k, j) g((i - j)/n - x).
double eval_g_filtered(const KernelSpec& spec, std::int64_t i, std::int64_t n, int k, double x);

/// h_k(x) = sum_j (-1)^j binom(k, j) (x - j)_+^alpha.
double eval_h0(int k, double alpha, double x);
/// h_{k,z}(x) = sum_j (-1)^j binom(k, j) |x - j|^alpha.
double eval_hz(int k, double alpha, double x);

/// prod_{j=0}^{k-1} (alpha - j).
double q_const(int k, double alpha);

struct MinAlphaSet {
  double alpha_min = 0.0;
  std::vector<std::size_t> indices;
};

MinAlphaSet min_alpha_set(const KernelSpec& spec);

/// Evaluator for h_k (one-sided) or h_{k,z} (two-sided) that switches to the
/// convergent expansion in 1/x far from the kinks, where the alternating
/// binomial sum loses all significant digits.
class LimitFunction {
 public:
  LimitFunction(int k, double alpha, bool two_sided);

  double operator()(double x) const;

  /// |h(x)|^p; cheaper than pow(|h(x)|, p) in the expansion range.
  double abs_pow(double x, double p) const;

  int k() const { return k_; }
  double alpha() const { return alpha_; }
  bool two_sided() const { return two_sided_; }

  /// |x| beyond which the expansion is used.
  double switch_point() const { return switch_; }

 private:
  double direct(double x) const;
  double expansion(double y, bool negative_side) const;
  // The series part of expansion(), without the y^alpha factor.
  double expansion_sum(double y, bool negative_side) const;

  int k_;
  double alpha_;
  bool two_sided_;
  double switch_;
  std::vector<double> binom_;
  // coefficients a_m for y^alpha * sum_{m>=k} a_m y^{-m}; sign of (-1)^m applied on the
  // positive side at evaluation time.
  std::vector<double> coeff_;
};

}  // namespace levyma
