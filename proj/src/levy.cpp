#include "levyma/levy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "levyma/errors.hpp"
#include "levyma/rng.hpp"

namespace levyma {

namespace {

std::string num(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double draw_size(const JumpLaw& law, std::mt19937_64& rng) {
  const double sign = (rng() >> 63) ? -1.0 : 1.0;
  if (const auto* tp = std::get_if<TwoPointLaw>(&law)) return sign * tp->a;
  if (const auto* g = std::get_if<GaussianLaw>(&law)) {
    std::normal_distribution<double> nd(0.0, g->sigma);
    double x;
    do {
      x = nd(rng);
    } while (x == 0.0);
    return x;
  }
  const auto& pl = std::get<ParetoLaw>(law);
  return sign * pl.scale * std::pow(uniform_open(rng), -1.0 / pl.shape);
}

std::vector<double> draw_times(double rate, Interval w, std::mt19937_64& rng) {
  const double mean = rate * (w.b - w.a);
  if (mean <= 0.0) return {};
  std::poisson_distribution<std::int64_t> pd(mean);
  const auto count = pd(rng);
  std::vector<double> t(static_cast<std::size_t>(count));
  for (auto& x : t) x = w.a + (w.b - w.a) * uniform_open(rng);
  std::sort(t.begin(), t.end());
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) t[i] = std::nextafter(t[i - 1], w.b);
  }
  return t;
}

}  // namespace

void LevySpec::validate() const {
  if (const auto* cp = std::get_if<CompoundPoisson>(&kind)) {
    if (!(cp->rate >= 0.0) || !std::isfinite(cp->rate)) {
      throw PreconditionError("compound Poisson rate must be finite and >= 0");
    }
    if (const auto* tp = std::get_if<TwoPointLaw>(&cp->law)) {
      if (!(tp->a > 0.0)) throw PreconditionError("two-point law needs a > 0");
    } else if (const auto* g = std::get_if<GaussianLaw>(&cp->law)) {
      if (!(g->sigma > 0.0)) throw PreconditionError("Gaussian law needs sigma > 0");
    } else {
      const auto& pl = std::get<ParetoLaw>(cp->law);
      if (!(pl.scale > 0.0) || !(pl.shape > 0.0)) {
        throw PreconditionError("Pareto law needs scale > 0 and shape > 0");
      }
    }
    return;
  }
  const auto& st = std::get<SymStable>(kind);
  if (!(st.beta > 0.0 && st.beta < 2.0)) throw PreconditionError("stable beta must lie in (0, 2)");
  if (!(st.scale > 0.0)) throw PreconditionError("stable scale must be > 0");
  if (!(st.cutoff > 0.0)) throw PreconditionError("stable jump cutoff must be > 0");
  if (st.proposal_cutoff && !(*st.proposal_cutoff > 0.0 && *st.proposal_cutoff <= st.cutoff)) {
    throw PreconditionError("proposal cutoff must lie in (0, cutoff]");
  }
}

std::string LevySpec::canonical() const {
  std::ostringstream os;
  if (const auto* cp = std::get_if<CompoundPoisson>(&kind)) {
    os << "compound_poisson;rate=" << num(cp->rate) << ';';
    if (const auto* tp = std::get_if<TwoPointLaw>(&cp->law)) {
      os << "two_point;a=" << num(tp->a);
    } else if (const auto* g = std::get_if<GaussianLaw>(&cp->law)) {
      os << "gaussian;sigma=" << num(g->sigma);
    } else {
      const auto& pl = std::get<ParetoLaw>(cp->law);
      os << "pareto;scale=" << num(pl.scale) << ";shape=" << num(pl.shape);
    }
  } else {
    const auto& st = std::get<SymStable>(kind);
    os << "sym_stable;beta=" << num(st.beta) << ";scale=" << num(st.scale)
       << ";cutoff=" << num(st.cutoff);
    if (st.proposal_cutoff) os << ";proposal_cutoff=" << num(*st.proposal_cutoff);
  }
  os << ";seed=" << seed;
  return os.str();
}

std::uint64_t LevySpec::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

JumpRecord::JumpRecord(Interval window, std::vector<double> times, std::vector<double> sizes,
                       JumpOrigin origin)
    : window_(window), times_(std::move(times)), sizes_(std::move(sizes)), origin_(origin) {
  if (!(window_.a < window_.b)) throw PreconditionError("jump record window must satisfy a < b");
  if (times_.size() != sizes_.size()) {
    throw PreconditionError("jump record times and sizes differ in length");
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!(times_[i] >= window_.a && times_[i] <= window_.b)) {
      throw PreconditionError("jump time outside the record window");
    }
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw PreconditionError("jump times must be strictly increasing");
    }
    if (sizes_[i] == 0.0 || !std::isfinite(sizes_[i])) {
      throw PreconditionError("jump sizes must be finite and nonzero");
    }
  }
}

JumpRecord JumpRecord::restricted(Interval closed) const {
  const Interval w{std::max(window_.a, closed.a), std::min(window_.b, closed.b)};
  std::vector<double> t, s;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (times_[i] >= w.a && times_[i] <= w.b) {
      t.push_back(times_[i]);
      s.push_back(sizes_[i]);
    }
  }
  return JumpRecord(w, std::move(t), std::move(s), origin_);
}

JumpRecord JumpRecord::with_sizes_in(double lo, double hi) const {
  std::vector<double> t, s;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    const double a = std::abs(sizes_[i]);
    if (a > lo && a <= hi) {
      t.push_back(times_[i]);
      s.push_back(sizes_[i]);
    }
  }
  return JumpRecord(window_, std::move(t), std::move(s), origin_);
}

JumpRecord JumpRecord::scaled(double c) const {
  std::vector<double> s(sizes_);
  for (auto& x : s) x *= c;
  return JumpRecord(window_, times_, std::move(s), origin_);
}

double stable_intensity(double beta, double scale, double cutoff) {
  return 2.0 * scale * std::pow(cutoff, -beta) / beta;
}

JumpRecord simulate_jumps(const LevySpec& spec, Interval window, std::uint64_t stream) {
  if (!(window.a < window.b)) throw PreconditionError("simulation window must satisfy a < b");
  spec.validate();
  auto rng = make_stream(spec.seed, stream, StreamDomain::jumps);
  const JumpOrigin origin{spec.hash(), spec.seed, stream};
  std::vector<double> sizes;

  if (const auto* cp = std::get_if<CompoundPoisson>(&spec.kind)) {
    auto times = draw_times(cp->rate, window, rng);
    sizes.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) sizes.push_back(draw_size(cp->law, rng));
    return JumpRecord(window, std::move(times), std::move(sizes), origin);
  }

  const auto& st = std::get<SymStable>(spec.kind);
  const double eps_min = st.proposal_cutoff.value_or(st.cutoff);
  auto times = draw_times(stable_intensity(st.beta, st.scale, eps_min), window, rng);
  std::vector<double> kept_times;
  for (double t : times) {
    const double sign = (rng() >> 63) ? -1.0 : 1.0;
    const double mag = eps_min * std::pow(uniform_open(rng), -1.0 / st.beta);
    if (mag > st.cutoff) {
      kept_times.push_back(t);
      sizes.push_back(sign * mag);
    }
  }
  return JumpRecord(window, std::move(kept_times), std::move(sizes), origin);
}

double bg_index(const LevySpec& spec) {
  if (const auto* st = std::get_if<SymStable>(&spec.kind)) return st->beta;
  return 0.0;
}

double power_sum(const JumpRecord& jumps, double p, Interval half_open) {
  if (!(p > 0.0)) throw PreconditionError("power_sum needs p > 0");
  const auto& t = jumps.times();
  const auto& s = jumps.sizes();
  auto lo = std::upper_bound(t.begin(), t.end(), half_open.a);
  auto hi = std::upper_bound(t.begin(), t.end(), half_open.b);
  double sum = 0.0;
  for (auto it = lo; it < hi; ++it) {
    sum += std::pow(std::abs(s[static_cast<std::size_t>(it - t.begin())]), p);
  }
  return sum;
}

bool check_omega_eps(const JumpRecord& jumps, const std::vector<double>& thetas, double eps) {
  if (jumps.empty()) return true;
  const auto& t = jumps.times();
  const double theta_l = thetas.empty() ? 0.0 : thetas.back();
  const auto in_range = [&](double x) { return x >= -theta_l && x <= 1.0; };

  // (a) for sorted times the nearest neighbour is adjacent.
  for (std::size_t i = 1; i < t.size(); ++i) {
    if ((in_range(t[i]) || in_range(t[i - 1])) && !(t[i] - t[i - 1] > 2.0 * eps)) return false;
  }

  // (b) lag coincidences: T_m in [-theta_l, 1] against every other jump.
  for (std::size_t m = 0; m < t.size(); ++m) {
    if (!in_range(t[m])) continue;
    for (std::size_t z = 0; z < thetas.size(); ++z) {
      for (std::size_t zp = 0; zp < thetas.size(); ++zp) {
        if (z == zp) continue;
        const double target = t[m] + thetas[z] - thetas[zp];
        auto it = std::lower_bound(t.begin(), t.end(), target - 2.0 * eps);
        for (; it != t.end() && *it <= target + 2.0 * eps; ++it) {
          if (static_cast<std::size_t>(it - t.begin()) != m) return false;
        }
      }
    }
  }

  // (c) endpoints -theta_z and 1 - theta_z.
  for (double th : thetas) {
    for (double edge : {-th, 1.0 - th}) {
      auto it = std::lower_bound(t.begin(), t.end(), edge - eps);
      if (it != t.end() && *it <= edge + eps) return false;
    }
  }
  return true;
}

bool check_toy_separation(const JumpRecord& jumps, double spacing) {
  const auto& t = jumps.times();
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] - t[i - 1] <= spacing) return false;
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double target = t[i] - 1.0;
    auto it = std::lower_bound(t.begin(), t.end(), target - spacing);
    if (it != t.end() && *it <= target + spacing) return false;
  }
  return true;
}

double min_spacing(const JumpRecord& jumps) {
  double best = std::numeric_limits<double>::infinity();
  const auto& t = jumps.times();
  for (std::size_t i = 1; i < t.size(); ++i) best = std::min(best, t[i] - t[i - 1]);
  return best;
}

double mean_abs_activity(const LevySpec& spec) {
  if (const auto* cp = std::get_if<CompoundPoisson>(&spec.kind)) {
    double mean_abs;
    if (const auto* tp = std::get_if<TwoPointLaw>(&cp->law)) {
      mean_abs = tp->a;
    } else if (const auto* g = std::get_if<GaussianLaw>(&cp->law)) {
      mean_abs = g->sigma * std::sqrt(2.0 / M_PI);
    } else {
      const auto& pl = std::get<ParetoLaw>(cp->law);
      mean_abs = pl.shape > 1.0 ? pl.scale * pl.shape / (pl.shape - 1.0)
                                : std::numeric_limits<double>::infinity();
    }
    return cp->rate * mean_abs;
  }
  const auto& st = std::get<SymStable>(spec.kind);
  if (st.beta <= 1.0) return std::numeric_limits<double>::infinity();
  // integral of |x| nu(dx) over |x| > cutoff
  return 2.0 * st.scale * std::pow(st.cutoff, 1.0 - st.beta) / (st.beta - 1.0);
}

}  // namespace levyma
