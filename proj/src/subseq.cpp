#include "levyma/subseq.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "levyma/errors.hpp"
#include "levyma/rng.hpp"

namespace levyma {

double frac(double x) {
  const double f = x - std::floor(x);
  return f < 1.0 ? f : std::nextafter(1.0, 0.0);
}

double circle_distance(double a, double b) {
  const double d = std::abs(frac(a) - frac(b));
  return std::min(d, 1.0 - d);
}

std::optional<std::pair<std::int64_t, std::int64_t>> rational_approximation(double theta,
                                                                            std::int64_t max_q) {
  // Double-precision level: any irrational has convergents within 1/q^2, so a
  // looser tolerance would flag every theta once q reaches 1e6.
  const double tol = 8.0 * DBL_EPSILON * std::max(1.0, std::abs(theta));
  // Convergents h/k of the continued fraction of theta.
  std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(theta));
  std::int64_t k_prev = 0, k = 1;
  double x = theta - std::floor(theta);
  for (int iter = 0; iter < 64; ++iter) {
    if (std::abs(theta - static_cast<double>(h) / static_cast<double>(k)) <= tol) {
      return std::make_pair(h, k);
    }
    if (x < 1e-15) break;
    const double inv = 1.0 / x;
    const auto a = static_cast<std::int64_t>(std::floor(inv));
    x = inv - std::floor(inv);
    const std::int64_t h_next = a * h + h_prev;
    const std::int64_t k_next = a * k + k_prev;
    if (k_next > max_q) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  return std::nullopt;
}

SubsequencePlan find_subsequence(const std::vector<double>& thetas,
                                 const std::vector<double>& etas, double tolerance,
                                 std::int64_t n_min, std::int64_t n_max,
                                 std::size_t max_terms) {
  if (!(tolerance > 0.0)) throw PreconditionError("subsequence tolerance must be > 0");
  if (!(n_min < n_max)) throw PreconditionError("subsequence scan needs n_min < n_max");
  if (n_min < 1) throw PreconditionError("subsequence scan needs n_min >= 1");
  if (thetas.size() != etas.size()) {
    throw PreconditionError("one target eta is required per theta");
  }
  for (double e : etas) {
    if (!(e >= 0.0 && e <= 1.0)) throw PreconditionError("targets eta must lie in [0, 1]");
  }

  SubsequencePlan plan;
  plan.thetas = thetas;
  plan.etas = etas;
  plan.tolerance = tolerance;
  plan.reachable.assign(thetas.size(), true);
  for (std::size_t z = 0; z < thetas.size(); ++z) {
    if (auto r = rational_approximation(thetas[z], 1000000)) {
      const auto q = r->second;
      plan.rational.push_back(RationalTheta{z, r->first, q});
      const double nearest = std::round(etas[z] * static_cast<double>(q)) / static_cast<double>(q);
      plan.reachable[z] = circle_distance(nearest, etas[z]) <= tolerance;
    }
  }

  std::vector<double> parts(thetas.size());
  for (std::int64_t n = n_min; n <= n_max; ++n) {
    double worst = 0.0;
    for (std::size_t z = 0; z < thetas.size(); ++z) {
      parts[z] = frac(static_cast<double>(n) * thetas[z]);
      worst = std::max(worst, circle_distance(parts[z], etas[z]));
    }
    if (worst < plan.best_residual) {
      plan.best_residual = worst;
      plan.best_n = n;
    }
    if (worst <= tolerance && plan.terms.size() < max_terms) {
      plan.terms.push_back(n);
      plan.achieved.push_back(parts);
      plan.residuals.push_back(worst);
    }
  }
  return plan;
}

double sample_beta22(std::mt19937_64& rng) {
  double u[3] = {uniform_open(rng), uniform_open(rng), uniform_open(rng)};
  std::sort(u, u + 3);
  return u[1];
}

double ks_uniform(std::vector<double> sample) {
  if (sample.empty()) throw PreconditionError("KS distance needs a nonempty sample");
  std::sort(sample.begin(), sample.end());
  const double m = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double x = std::clamp(sample[i], 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / m - x, x - static_cast<double>(i) / m});
  }
  return d;
}

std::vector<double> shift_law_check(const DensitySampler& sampler, double theta,
                                    const std::vector<std::int64_t>& n_terms,
                                    std::int64_t draws, std::uint64_t seed) {
  if (draws < 1) throw PreconditionError("shift law check needs draws >= 1");
  std::vector<double> out;
  out.reserve(n_terms.size());
  for (std::size_t idx = 0; idx < n_terms.size(); ++idx) {
    const auto n = static_cast<double>(n_terms[idx]);
    auto rng = make_stream(seed, idx, StreamDomain::shift_law);
    std::vector<double> sample(static_cast<std::size_t>(draws));
    for (auto& s : sample) s = frac(n * sampler(rng) + n * theta);
    out.push_back(ks_uniform(std::move(sample)));
  }
  return out;
}

}  // namespace levyma
