#include "levyma/limits.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <tuple>

#include "levyma/errors.hpp"
#include "levyma/rng.hpp"
#include "levyma/subseq.hpp"

namespace levyma {

namespace {

constexpr std::int64_t kMaxR = 1000000;
constexpr int kChebNodes = 16;

void check_series_args(int k, double alpha, double p) {
  if (k < 1) throw PreconditionError("series needs k >= 1");
  if (!(p > 0.0)) throw PreconditionError("series needs p > 0");
  if (!(alpha > 0.0)) throw PreconditionError("series needs alpha > 0");
  if (!(alpha < k - 1.0 / p)) {
    throw PreconditionError("series is not summable: need alpha < k - 1/p (alpha = " +
                            std::to_string(alpha) + ", k = " + std::to_string(k) +
                            ", p = " + std::to_string(p) + ")");
  }
}

// Adds the terms r with lo < |r| <= hi (r >= 0 only when one_sided) in the
// order lo+1, -(lo+1), lo+2, ... so longer sums extend shorter ones.
double add_ring(const LimitFunction& h, double p, double s, std::int64_t lo, std::int64_t hi,
                double acc) {
  const bool two = h.two_sided();
  for (std::int64_t d = lo + 1; d <= hi; ++d) {
    const double r = static_cast<double>(d);
    acc += h.abs_pow(r + 1.0 - s, p);
    if (two) acc += h.abs_pow(-r + 1.0 - s, p);
  }
  return acc;
}

double sum_to(const LimitFunction& h, double p, double s, std::int64_t R) {
  double acc = h.abs_pow(1.0 - s, p);
  return add_ring(h, p, s, 0, R, acc);
}

}  // namespace

double series_tail_bound(int k, double alpha, bool one_sided, double p, std::int64_t R) {
  check_series_args(k, alpha, p);
  if (R <= k) throw PreconditionError("tail bound needs R > k");
  const double a = p * (k - alpha);
  const double q = std::max(1.0, std::abs(q_const(k, alpha)));
  const double base = static_cast<double>(R - k);
  const double per_side = std::pow(base, -a) + std::pow(base, 1.0 - a) / (a - 1.0);
  return std::pow(q, p) * per_side * (one_sided ? 1.0 : 2.0);
}

std::int64_t default_truncation(int k, double alpha, bool one_sided, double p, double shift) {
  check_series_args(k, alpha, p);
  const LimitFunction h(k, alpha, !one_sided);
  const double s = frac(shift);
  std::int64_t R = 2 * k + 2;
  double value = sum_to(h, p, s, R);
  while (!(series_tail_bound(k, alpha, one_sided, p, R) < 1e-8 * value) && R < kMaxR) {
    const std::int64_t next = std::min(2 * R, kMaxR);
    value = add_ring(h, p, s, R, next, value);
    R = next;
  }
  return R;
}

SeriesValue series_Vmz(int k, double alpha, bool one_sided, double p, double shift,
                       std::optional<std::int64_t> R) {
  check_series_args(k, alpha, p);
  const std::int64_t RR = R ? *R : default_truncation(k, alpha, one_sided, p, shift);
  if (RR < 2 * k + 2) throw PreconditionError("series truncation needs R >= 2k + 2");
  const LimitFunction h(k, alpha, !one_sided);
  SeriesValue out;
  out.R = RR;
  out.value = sum_to(h, p, frac(shift), RR);
  out.tail_bound = series_tail_bound(k, alpha, one_sided, p, RR);
  return out;
}

SeriesTable::SeriesTable(int k, double alpha, bool one_sided, double p, std::int64_t R)
    : k_(k),
      alpha_(alpha),
      one_sided_(one_sided),
      p_(p),
      R_(R),
      R0_(std::min<std::int64_t>(R, 2 * k + 32)),
      h_(k, alpha, !one_sided) {
  check_series_args(k, alpha, p);
  if (R < 2 * k + 2) throw PreconditionError("series truncation needs R >= 2k + 2");
  tail_bound_ = series_tail_bound(k, alpha, one_sided, p, R);
  if (R_ == R0_) return;

  std::vector<double> f(kChebNodes);
  for (int j = 0; j < kChebNodes; ++j) {
    const double s = 0.5 * (1.0 + std::cos(M_PI * (j + 0.5) / kChebNodes));
    f[static_cast<std::size_t>(j)] = add_ring(h_, p_, s, R0_, R_, 0.0);
  }
  cheb_.assign(kChebNodes, 0.0);
  for (int m = 0; m < kChebNodes; ++m) {
    double c = 0.0;
    for (int j = 0; j < kChebNodes; ++j) {
      c += f[static_cast<std::size_t>(j)] * std::cos(M_PI * m * (j + 0.5) / kChebNodes);
    }
    cheb_[static_cast<std::size_t>(m)] = 2.0 * c / kChebNodes;
  }
  for (double s : {0.0, 1.0 / 3.0, std::nextafter(1.0, 0.0)}) {
    const double exact = add_ring(h_, p_, s, R0_, R_, 0.0);
    interp_error_ = std::max(interp_error_, std::abs(far(s) - exact));
  }
}

double SeriesTable::core(double s) const { return sum_to(h_, p_, s, R0_); }

double SeriesTable::far(double s) const {
  if (cheb_.empty()) return 0.0;
  const double x = 2.0 * s - 1.0;
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t m = cheb_.size() - 1; m >= 1; --m) {
    const double b0 = 2.0 * x * b1 - b2 + cheb_[m];
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + 0.5 * cheb_[0];
}

SeriesValue SeriesTable::operator()(double shift) const {
  const double s = frac(shift);
  SeriesValue out;
  out.R = R_;
  const double fv = far(s);
  out.value = core(s) + fv;
  out.tail_bound = tail_bound_ + 2.0 * interp_error_ + 4.0 * DBL_EPSILON * std::abs(fv);
  return out;
}

std::shared_ptr<const SeriesTable> series_table(int k, double alpha, bool one_sided, double p,
                                                std::optional<std::int64_t> R) {
  using Key = std::tuple<int, double, bool, double, std::int64_t>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const SeriesTable>> cache;
  check_series_args(k, alpha, p);
  const std::int64_t RR = R ? *R : default_truncation(k, alpha, one_sided, p);
  const Key key{k, alpha, one_sided, p, RR};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto table = std::make_shared<const SeriesTable>(k, alpha, one_sided, p, RR);
  cache.emplace(key, table);
  return table;
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::r1:
      return "r1";
    case Regime::r1_coupled:
      return "r1_coupled";
    case Regime::r2:
      return "r2";
    case Regime::toy:
      return "toy";
  }
  return "r1";
}

void check_regime1(const KernelSpec& kernel, double p, int k) {
  if (k < 1) throw PreconditionError("k must be >= 1");
  if (!(p > 0.0)) throw PreconditionError("p must be > 0");
  if (kernel.envelope == Envelope::indicator) {
    throw PreconditionError("the indicator kernel has no power-law singularities");
  }
  double amax = 0.0;
  for (const auto& s : kernel.singularities) amax = std::max(amax, s.alpha);
  if (!(amax < k - 1.0 / p)) {
    throw PreconditionError("regime 1 needs max alpha_z < k - 1/p");
  }
}

void check_regime2(const KernelSpec& kernel, double p, int k) {
  if (k < 1) throw PreconditionError("k must be >= 1");
  if (!(p > 0.0)) throw PreconditionError("p must be > 0");
  if (kernel.envelope == Envelope::indicator) {
    throw PreconditionError("the indicator kernel has no power-law singularities");
  }
  const double target = k - 1.0 / p;
  for (const auto& s : kernel.singularities) {
    if (std::abs(s.alpha - target) > 1e-12 * std::max(1.0, target)) {
      throw PreconditionError("regime 2 needs every alpha_z = k - 1/p");
    }
  }
}

namespace {

LimitSample regime1_sum(const KernelSpec& kernel, const JumpRecord& jumps, double p, int k,
                        const MinAlphaSet& A,
                        const std::function<double(std::size_t, std::size_t)>& shift_of,
                        const LimitOptions& opt, Regime regime) {
  LimitSample out;
  out.regime = regime;
  const auto& times = jumps.times();
  const auto& sizes = jumps.sizes();
  const double alpha = A.alpha_min;
  for (std::size_t a_pos = 0; a_pos < A.indices.size(); ++a_pos) {
    const std::size_t z = A.indices[a_pos];
    const auto& sp = kernel.singularities[z];
    const bool one_sided = (z == 0);
    std::shared_ptr<const SeriesTable> table;
    if (!opt.direct) table = series_table(k, alpha, one_sided, p, opt.R);
    const double cz = std::pow(std::abs(sp.c), p);
    for (std::size_t m = 0; m < times.size(); ++m) {
      const double T = times[m];
      if (!(T > -sp.theta && T <= 1.0 - sp.theta)) continue;
      const double s = shift_of(m, a_pos);
      const SeriesValue sv =
          opt.direct ? series_Vmz(k, alpha, one_sided, p, s, opt.R) : (*table)(s);
      const double w = cz * std::pow(std::abs(sizes[m]), p);
      out.value += w * sv.value;
      out.tail_bound += w * sv.tail_bound;
      out.R = std::max(out.R, sv.R);
      if (opt.verbose) {
        out.contributions.push_back(JumpContribution{m, T, sizes[m], z, s, sv.value, w * sv.value});
      }
    }
  }
  return out;
}

std::vector<double> normalized_etas(const MinAlphaSet& A, const std::vector<double>& etas) {
  if (etas.size() == A.indices.size()) return etas;
  if (!A.indices.empty() && A.indices.front() == 0 && etas.size() + 1 == A.indices.size()) {
    std::vector<double> out{0.0};
    out.insert(out.end(), etas.begin(), etas.end());
    return out;
  }
  throw PreconditionError("one eta is required per index in the minimal-exponent set (got " +
                          std::to_string(etas.size()) + ", need " +
                          std::to_string(A.indices.size()) + ")");
}

}  // namespace

LimitSample limit_regime1(const KernelSpec& kernel, const JumpRecord& jumps,
                          const std::vector<double>& etas, double p, int k,
                          std::mt19937_64& u_source, const LimitOptions& opt) {
  check_regime1(kernel, p, k);
  const auto A = min_alpha_set(kernel);
  const auto eta = normalized_etas(A, etas);
  for (double e : eta) {
    if (!(e >= 0.0 && e <= 1.0)) throw PreconditionError("eta must lie in [0, 1]");
  }
  std::vector<double> u(jumps.size());
  for (auto& x : u) x = uniform_open(u_source);
  auto out = regime1_sum(
      kernel, jumps, p, k, A, [&](std::size_t m, std::size_t a) { return frac(u[m] + eta[a]); },
      opt, Regime::r1);
  out.u_draws = std::move(u);
  out.etas = eta;
  return out;
}

LimitSample limit_regime1_coupled(const KernelSpec& kernel, const JumpRecord& jumps,
                                  std::int64_t n, double p, int k, const LimitOptions& opt) {
  check_regime1(kernel, p, k);
  if (n < 1) throw PreconditionError("n must be >= 1");
  const auto A = min_alpha_set(kernel);
  const double dn = static_cast<double>(n);
  const auto& times = jumps.times();
  auto out = regime1_sum(
      kernel, jumps, p, k, A,
      [&](std::size_t m, std::size_t a) {
        return frac(dn * times[m] + dn * kernel.singularities[A.indices[a]].theta);
      },
      opt, Regime::r1_coupled);
  for (std::size_t z : A.indices) out.etas.push_back(frac(dn * kernel.singularities[z].theta));
  return out;
}

LimitSample limit_regime2(const KernelSpec& kernel, const JumpRecord& jumps, double p, int k) {
  check_regime2(kernel, p, k);
  LimitSample out;
  out.regime = Regime::r2;
  const double qp = std::pow(std::abs(q_const(k, kernel.singularities.front().alpha)), p);
  double sum = 0.0;
  for (std::size_t z = 0; z < kernel.singularities.size(); ++z) {
    const auto& sp = kernel.singularities[z];
    const double factor = z >= 1 ? 2.0 : 1.0;
    sum += std::pow(std::abs(sp.c), p) * factor * power_sum(jumps, p, {-sp.theta, 1.0 - sp.theta});
  }
  out.value = qp * sum;
  return out;
}

double limit_toy(const JumpRecord& jumps, double p) {
  return power_sum(jumps, p, {0.0, 1.0}) + power_sum(jumps, p, {-1.0, 0.0});
}

}  // namespace levyma
