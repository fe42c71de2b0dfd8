#include "levyma/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levyma/errors.hpp"

namespace levyma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Decreasing majorant of |g'| on the exponential flank, d = t - theta_l >= 2 delta.
double flank_envelope(const SingularPoint& s, double delta, double d) {
  const double e = [&](double x) {
    return std::abs(s.c) * std::exp(-(x - 2.0 * delta)) *
           (std::pow(x, s.alpha) + s.alpha * std::pow(x, s.alpha - 1.0));
  }(d);
  if (d >= s.alpha) return e;
  double best = e;
  for (int j = 1; j <= 64; ++j) {
    const double x = d + (s.alpha - d) * j / 64.0;
    best = std::max(best, std::abs(s.c) * std::exp(-(x - 2.0 * delta)) *
                              (std::pow(x, s.alpha) + s.alpha * std::pow(x, s.alpha - 1.0)));
  }
  return best;
}

}  // namespace

void accumulate_path(const KernelSpec& kernel, const JumpRecord& jumps, std::int64_t n,
                     std::vector<double>& values) {
  const auto& times = jumps.times();
  const auto& sizes = jumps.sizes();
  const double dn = static_cast<double>(n);
  for (std::size_t m = 0; m < times.size(); ++m) {
    const double T = times[m];
    const double J = sizes[m];
    const double g0v = eval_g0(kernel, -T);
    for (std::int64_t i = 0; i <= n; ++i) {
      const double t = static_cast<double>(i) / dn;
      values[static_cast<std::size_t>(i)] += J * (eval_g(kernel, t - T) - g0v);
    }
  }
}

SamplePath simulate_path(const KernelSpec& kernel, const JumpRecord& jumps, std::int64_t n,
                         std::optional<double> past_window) {
  if (n < 1) throw PreconditionError("grid resolution n must be >= 1");
  const double T_past = past_window.value_or(kernel.default_past_window());
  if (!(T_past > 0.0)) throw PreconditionError("past window must be > 0");
  if (jumps.window().a > -T_past || jumps.window().b < 1.0) {
    throw PreconditionError("jump record window does not cover [-T_past, 1]");
  }
  const JumpRecord used = jumps.restricted({-T_past, 1.0});

  SamplePath path;
  path.n = n;
  path.past_window = T_past;
  path.values.assign(static_cast<std::size_t>(n) + 1, 0.0);
  accumulate_path(kernel, used, n, path.values);
  path.provenance.kernel_id = kernel.id();
  path.provenance.levy_hash = jumps.origin().levy_hash;
  path.provenance.seed = jumps.origin().seed;
  path.provenance.stream = jumps.origin().stream;
  path.provenance.window_a = jumps.window().a;
  path.provenance.window_b = jumps.window().b;
  path.provenance.jumps_used = used.size();
  return path;
}

double TruncationReport::increment_bound(std::int64_t n, int k) const {
  return std::ldexp(lipschitz_bound, k - 1) / static_cast<double>(n);
}

double TruncationReport::power_variation_bound(std::int64_t n, int k, double p) const {
  return static_cast<double>(n - k + 1) * std::pow(increment_bound(n, k), p);
}

TruncationReport truncation_error_report(const KernelSpec& kernel, const LevySpec& levy,
                                         double past_window) {
  TruncationReport rep;
  rep.past_window = past_window;
  switch (kernel.envelope) {
    case Envelope::indicator:
      rep.lipschitz_bound = past_window > 1.0 ? 0.0 : kInf;
      return rep;
    case Envelope::power:
      rep.lipschitz_bound = kInf;
      return rep;
    case Envelope::bump_exp:
      break;
  }
  const auto& last = kernel.singularities.back();
  const double delta = kernel.bump_radius();
  const double d0 = past_window - last.theta;
  if (!(d0 >= 2.0 * delta)) {
    throw PreconditionError("past window must exceed theta_l + 2 delta for the truncation report");
  }
  const double activity = mean_abs_activity(levy);
  if (!std::isfinite(activity)) {
    rep.lipschitz_bound = kInf;
    return rep;
  }
  // The envelope is nonincreasing, so the left Riemann sum over-estimates the
  // integral. Beyond d0 + 60 the remainder is below twice the last value.
  const int steps = 6000;
  const double h = 60.0 / steps;
  double integral = 0.0;
  for (int j = 0; j < steps; ++j) integral += flank_envelope(last, delta, d0 + j * h);
  integral = integral * h + 2.0 * flank_envelope(last, delta, d0 + 60.0);
  rep.lipschitz_bound = activity * integral;
  return rep;
}

}  // namespace levyma
