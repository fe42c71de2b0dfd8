#include "levyma/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "levyma/errors.hpp"

namespace levyma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kExpansionTerms = 64;

double psi(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// 1 on [0, 1], 0 on [2, inf), C-infinity in between.
double bump(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double a = psi(2.0 - r);
  const double b = psi(r - 1.0);
  return a / (a + b);
}

void validate_points(const std::vector<SingularPoint>& pts, const char* what) {
  if (pts.empty()) {
    throw PreconditionError(std::string(what) + ": at least one singularity point is required");
  }
  if (pts.front().theta != 0.0) {
    throw PreconditionError(std::string(what) + ": the first singularity must sit at theta = 0");
  }
  for (std::size_t z = 0; z < pts.size(); ++z) {
    const auto& s = pts[z];
    if (!(s.theta >= 0.0) || !std::isfinite(s.theta)) {
      throw PreconditionError(std::string(what) + ": theta must be finite and >= 0");
    }
    if (!(s.alpha > 0.0) || !std::isfinite(s.alpha)) {
      throw PreconditionError(std::string(what) + ": alpha must be > 0");
    }
    if (s.c == 0.0 || !std::isfinite(s.c)) {
      throw PreconditionError(std::string(what) + ": c must be finite and nonzero");
    }
    if (z > 0 && !(s.theta > pts[z - 1].theta)) {
      throw PreconditionError(std::string(what) + ": thetas must be strictly increasing");
    }
  }
}

double min_gap(const std::vector<SingularPoint>& pts) {
  double gap = kInf;
  for (std::size_t z = 1; z < pts.size(); ++z) gap = std::min(gap, pts[z].theta - pts[z - 1].theta);
  return gap;
}

double radius_for(const std::vector<SingularPoint>& pts, const std::optional<double>& delta) {
  if (delta) return *delta;
  const double gap = min_gap(pts);
  return std::isfinite(gap) ? gap / 4.0 : 0.25;
}

double eval_bump_exp(const std::vector<SingularPoint>& pts, double delta, double t) {
  double g = 0.0;
  const std::size_t last = pts.size() - 1;
  for (std::size_t z = 0; z < pts.size(); ++z) {
    const auto& s = pts[z];
    const double d = t - s.theta;
    const double r = std::abs(d) / delta;
    double weight;
    if (z == last && d > 0.0) {
      const double rho = bump(r);
      weight = rho + (1.0 - rho) * std::exp(-(d - 2.0 * delta));
    } else {
      if (r >= 2.0) continue;
      weight = bump(r);
    }
    const double base = std::pow(std::abs(d), s.alpha);
    g += s.c * base * weight;
  }
  return g;
}

double eval_structure(Envelope env, const std::vector<SingularPoint>& pts, double delta, double t) {
  if (t < 0.0) return 0.0;
  switch (env) {
    case Envelope::indicator:
      return t <= 1.0 ? 1.0 : 0.0;
    case Envelope::power:
      return pts.front().c * std::pow(t, pts.front().alpha);
    case Envelope::bump_exp:
      return eval_bump_exp(pts, delta, t);
  }
  return 0.0;
}

}  // namespace

void KernelSpec::validate() const {
  if (!(w > 0.0 && w <= 2.0)) throw PreconditionError("kernel: w must lie in (0, 2]");
  if (k_max < 1) throw PreconditionError("kernel: k_max must be >= 1");
  switch (envelope) {
    case Envelope::indicator:
      if (!singularities.empty()) {
        throw PreconditionError("kernel: the indicator envelope takes no singularity list");
      }
      break;
    case Envelope::power:
      validate_points(singularities, "kernel");
      if (singularities.size() != 1) {
        throw PreconditionError("kernel: the power envelope has exactly one point at theta = 0");
      }
      break;
    case Envelope::bump_exp:
      validate_points(singularities, "kernel");
      if (delta) {
        const double gap = min_gap(singularities);
        if (!(*delta > 0.0) || (std::isfinite(gap) && *delta > gap / 4.0)) {
          throw PreconditionError("kernel: delta must lie in (0, min gap / 4]");
        }
      }
      break;
  }
  if (g0_mode == G0Mode::custom) {
    if (envelope == Envelope::indicator) {
      throw PreconditionError("kernel: custom g0 is not available for the indicator envelope");
    }
    validate_points(g0_singularities, "kernel g0");
    if (envelope == Envelope::power && g0_singularities.size() != 1) {
      throw PreconditionError("kernel g0: the power envelope has exactly one point");
    }
  }
}

std::vector<double> KernelSpec::thetas() const {
  if (envelope == Envelope::indicator) return {0.0, 1.0};
  std::vector<double> out;
  out.reserve(singularities.size());
  for (const auto& s : singularities) out.push_back(s.theta);
  return out;
}

double KernelSpec::bump_radius() const { return radius_for(singularities, delta); }

double KernelSpec::support_end() const { return envelope == Envelope::indicator ? 1.0 : kInf; }

double KernelSpec::default_past_window() const {
  switch (envelope) {
    case Envelope::indicator:
      return 2.0;
    case Envelope::power:
      return 1.0;
    case Envelope::bump_exp:
      return singularities.back().theta + 5.0;
  }
  return 1.0;
}

std::string KernelSpec::id() const {
  if (!name.empty()) return name;
  std::ostringstream os;
  switch (envelope) {
    case Envelope::indicator:
      return "indicator";
    case Envelope::power:
      os << "lfsm";
      break;
    case Envelope::bump_exp:
      os << "multising";
      break;
  }
  for (const auto& s : singularities) os << '_' << s.theta << ':' << s.alpha;
  return os.str();
}

KernelSpec indicator_kernel() {
  KernelSpec k;
  k.name = "indicator";
  k.envelope = Envelope::indicator;
  k.g0_mode = G0Mode::zero;
  k.w = 1.0;
  return k;
}

KernelSpec lfsm_kernel(double alpha, double c) {
  KernelSpec k;
  k.envelope = Envelope::power;
  k.singularities = {SingularPoint{0.0, alpha, c}};
  k.g0_mode = G0Mode::equal_to_g;
  k.w = 1.0;
  k.validate();
  return k;
}

KernelSpec multising_kernel(std::vector<SingularPoint> points, G0Mode g0_mode, double w) {
  KernelSpec k;
  k.envelope = Envelope::bump_exp;
  k.singularities = std::move(points);
  k.g0_mode = g0_mode;
  k.w = w;
  k.validate();
  return k;
}

double eval_g(const KernelSpec& spec, double t) {
  if (t < 0.0) return 0.0;
  const double delta = spec.envelope == Envelope::bump_exp ? spec.bump_radius() : 0.0;
  return eval_structure(spec.envelope, spec.singularities, delta, t);
}

double eval_g0(const KernelSpec& spec, double t) {
  switch (spec.g0_mode) {
    case G0Mode::zero:
      return 0.0;
    case G0Mode::equal_to_g:
      return eval_g(spec, t);
    case G0Mode::custom: {
      if (t < 0.0) return 0.0;
      const double delta = radius_for(spec.g0_singularities, spec.delta);
      return eval_structure(spec.envelope, spec.g0_singularities, delta, t);
    }
  }
  return 0.0;
}

double eval_g_derivative(const KernelSpec& spec, double t) {
  if (t < 0.0) return 0.0;
  switch (spec.envelope) {
    case Envelope::indicator:
      return 0.0;
    case Envelope::power: {
      const auto& s = spec.singularities.front();
      if (t == 0.0) return kInf;
      return s.c * s.alpha * std::pow(t, s.alpha - 1.0);
    }
    case Envelope::bump_exp: {
      const double delta = spec.bump_radius();
      const auto& last = spec.singularities.back();
      const double d = t - last.theta;
      if (d >= 2.0 * delta) {
        return last.c * std::exp(-(d - 2.0 * delta)) * std::pow(d, last.alpha) *
               (last.alpha / d - 1.0);
      }
      const double h = 1e-6 * std::max(1.0, std::abs(t));
      return (eval_g(spec, t + h) - eval_g(spec, t - h)) / (2.0 * h);
    }
  }
  return 0.0;
}

std::vector<std::int64_t> filter_weights(int k) {
  if (k < 1) throw PreconditionError("filter order k must be >= 1");
  if (k > 60) throw PreconditionError("filter order k must be <= 60");
  std::vector<std::int64_t> w(static_cast<std::size_t>(k) + 1);
  std::int64_t b = 1;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) b = b * (k - j + 1) / j;
    w[static_cast<std::size_t>(j)] = (j % 2 == 0) ? b : -b;
  }
  return w;
}

double eval_g_filtered(const KernelSpec& spec, std::int64_t i, std::int64_t n, int k, double x) {
  if (n < 1) throw PreconditionError("grid resolution n must be >= 1");
  if (i < k) throw PreconditionError("filtered kernel needs i >= k");
  const auto w = filter_weights(k);
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) {
    const double arg = static_cast<double>(i - j) / static_cast<double>(n) - x;
    sum += static_cast<double>(w[static_cast<std::size_t>(j)]) * eval_g(spec, arg);
  }
  return sum;
}

double q_const(int k, double alpha) {
  if (k < 1) throw PreconditionError("q_const needs k >= 1");
  double q = 1.0;
  for (int j = 0; j < k; ++j) q *= alpha - j;
  return q;
}

MinAlphaSet min_alpha_set(const KernelSpec& spec) {
  if (spec.envelope == Envelope::indicator) {
    throw PreconditionError("the indicator kernel has no power-law exponents");
  }
  MinAlphaSet out;
  out.alpha_min = kInf;
  for (const auto& s : spec.singularities) out.alpha_min = std::min(out.alpha_min, s.alpha);
  for (std::size_t z = 0; z < spec.singularities.size(); ++z) {
    if (spec.singularities[z].alpha == out.alpha_min) out.indices.push_back(z);
  }
  return out;
}

LimitFunction::LimitFunction(int k, double alpha, bool two_sided)
    : k_(k), alpha_(alpha), two_sided_(two_sided), switch_(8.0 * k + 8.0) {
  if (k < 1) throw PreconditionError("h_k needs k >= 1");
  if (!(alpha > 0.0)) throw PreconditionError("h_k needs alpha > 0");
  const auto w = filter_weights(k);
  binom_.assign(w.begin(), w.end());

  // a_m = binom(alpha, m) (-1)^k k! S(m, k), m = k .. k + kExpansionTerms - 1,
  // from sum_j (-1)^j binom(k, j) j^m = (-1)^k k! S(m, k).
  const int m_max = k + kExpansionTerms - 1;
  std::vector<double> stirling(static_cast<std::size_t>(k) + 1, 0.0);  // S(m, 0..k) for current m
  stirling[0] = 1.0;                                                     // m = 0
  double gen_binom = 1.0;                                                // binom(alpha, m)
  double k_fact = 1.0;
  for (int j = 2; j <= k; ++j) k_fact *= j;
  const double sign_k = (k % 2 == 0) ? 1.0 : -1.0;
  coeff_.reserve(kExpansionTerms);
  for (int m = 1; m <= m_max; ++m) {
    for (int j = std::min(m, k); j >= 1; --j) {
      stirling[static_cast<std::size_t>(j)] =
          j * stirling[static_cast<std::size_t>(j)] + stirling[static_cast<std::size_t>(j - 1)];
    }
    stirling[0] = 0.0;
    gen_binom *= (alpha - (m - 1)) / m;
    if (m >= k) coeff_.push_back(gen_binom * sign_k * k_fact * stirling[static_cast<std::size_t>(k)]);
  }
}

double LimitFunction::direct(double x) const {
  double sum = 0.0;
  for (int j = 0; j <= k_; ++j) {
    const double d = x - j;
    double term;
    if (two_sided_) {
      term = std::pow(std::abs(d), alpha_);
    } else {
      term = d > 0.0 ? std::pow(d, alpha_) : 0.0;
    }
    sum += binom_[static_cast<std::size_t>(j)] * term;
  }
  return sum;
}

double LimitFunction::expansion_sum(double y, bool negative_side) const {
  // sum_{m >= k} s_m a_m y^{-m}; s_m = (-1)^m on the positive side.
  const double inv = 1.0 / y;
  double power = 1.0;
  for (int j = 0; j < k_; ++j) power *= inv;
  double sum = 0.0;
  for (std::size_t idx = 0; idx < coeff_.size(); ++idx) {
    const int m = k_ + static_cast<int>(idx);
    const double sign = (negative_side || m % 2 == 0) ? 1.0 : -1.0;
    const double term = sign * coeff_[idx] * power;
    sum += term;
    if (idx >= 2 && std::abs(term) <= 1e-18 * std::abs(sum)) break;
    power *= inv;
    if (power == 0.0) break;
  }
  return sum;
}

double LimitFunction::expansion(double y, bool negative_side) const {
  return std::pow(y, alpha_) * expansion_sum(y, negative_side);
}

double LimitFunction::abs_pow(double x, double p) const {
  const bool far = x >= switch_ || (two_sided_ && x <= -switch_);
  if (!far) return std::pow(std::abs((*this)(x)), p);
  const double y = std::abs(x);
  const double sum = std::abs(expansion_sum(y, x < 0.0));
  if (sum == 0.0) return 0.0;
  return std::exp(p * (alpha_ * std::log(y) + std::log(sum)));
}

double LimitFunction::operator()(double x) const {
  if (x >= switch_) return expansion(x, false);
  if (!two_sided_) {
    if (x <= 0.0) return 0.0;
    return direct(x);
  }
  if (x <= -switch_) return expansion(-x, true);
  return direct(x);
}

double eval_h0(int k, double alpha, double x) {
  if (x <= 0.0) return 0.0;
  return LimitFunction(k, alpha, false)(x);
}

double eval_hz(int k, double alpha, double x) { return LimitFunction(k, alpha, true)(x); }

}  // namespace levyma
