#include "levyma/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "levyma/config.hpp"
#include "levyma/errors.hpp"
#include "levyma/limits.hpp"
#include "levyma/rng.hpp"
#include "levyma/serialization.hpp"
#include "levyma/simulate.hpp"
#include "levyma/stats.hpp"

namespace levyma {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Stream offset separating the independent limit-side records in run_distribution.
constexpr std::uint64_t kLimitStreamOffset = 1ULL << 40;

double rel_error(double stat, double limit) {
  const double abs_err = std::abs(stat - limit);
  if (limit != 0.0) return abs_err / std::abs(limit);
  return abs_err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

double past_window_of(const ExperimentConfig& cfg) {
  return cfg.past_window.value_or(cfg.kernel.default_past_window());
}

double scaling_alpha(const ExperimentConfig& cfg) {
  if (cfg.alpha) return *cfg.alpha;
  switch (cfg.regime) {
    case ExperimentRegime::toy:
      return 0.0;
    case ExperimentRegime::r2:
      return cfg.k - 1.0 / cfg.p;
    default:
      return min_alpha_set(cfg.kernel).alpha_min;
  }
}

// min(0.05, spacing / 4) where spacing is the smallest gap between
// consecutive jumps touching [-theta_l, 1].
double default_eps(const JumpRecord& rec, const std::vector<double>& thetas) {
  const double lo = -(thetas.empty() ? 0.0 : thetas.back());
  const auto& t = rec.times();
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < t.size(); ++i) {
    const bool touches = (t[i] >= lo && t[i] <= 1.0) || (t[i - 1] >= lo && t[i - 1] <= 1.0);
    if (touches) gap = std::min(gap, t[i] - t[i - 1]);
  }
  return std::min(0.05, 0.25 * gap);
}

struct Realization {
  JumpRecord record;
  std::uint64_t stream = 0;
  bool separated = true;
  double eps = 0.0;
};

Realization realize(const ExperimentConfig& cfg, std::uint64_t replication, Interval window,
                    std::int64_t n_max) {
  const bool toy = cfg.regime == ExperimentRegime::toy;
  const auto thetas = cfg.kernel.thetas();
  Realization out;
  const int attempts = cfg.require_separation ? cfg.max_attempts : 1;
  for (int j = 0; j < attempts; ++j) {
    out.stream = replication + static_cast<std::uint64_t>(j) * static_cast<std::uint64_t>(cfg.replications);
    out.record = simulate_jumps(cfg.levy, window, out.stream);
    if (toy) {
      out.eps = 1.0 / static_cast<double>(n_max);
      out.separated = check_toy_separation(out.record, out.eps);
    } else {
      out.eps = cfg.omega_eps ? *cfg.omega_eps : default_eps(out.record, thetas);
      out.separated = check_omega_eps(out.record, thetas, out.eps);
    }
    if (out.separated) return out;
  }
  if (cfg.require_separation) {
    throw std::runtime_error("no separated jump record within max_attempts for replication " +
                             std::to_string(replication));
  }
  return out;
}

std::vector<double> column(const std::vector<std::vector<double>>& per_rep, std::size_t idx) {
  std::vector<double> out;
  for (const auto& r : per_rep) out.push_back(r[idx]);
  return out;
}

nlohmann::json base_meta(const ExperimentConfig& cfg) {
  nlohmann::json meta;
  meta["schema_version"] = kSchemaVersion;
  meta["tool"] = "levyma 0.1.0";
  meta["config"] = experiment_to_json(cfg);
  return meta;
}

}  // namespace

std::string experiment_regime_name(ExperimentRegime r) {
  switch (r) {
    case ExperimentRegime::r1:
      return "r1";
    case ExperimentRegime::r1_coupled:
      return "r1_coupled";
    case ExperimentRegime::r2:
      return "r2";
    case ExperimentRegime::toy:
      return "toy";
    case ExperimentRegime::distribution:
      return "distribution";
    case ExperimentRegime::cutoff_stability:
      return "cutoff_stability";
    case ExperimentRegime::shift_law:
      return "shift_law";
  }
  return "r1";
}

ExperimentRegime experiment_regime_from_name(const std::string& s) {
  for (auto r : {ExperimentRegime::r1, ExperimentRegime::r1_coupled, ExperimentRegime::r2,
                 ExperimentRegime::toy, ExperimentRegime::distribution,
                 ExperimentRegime::cutoff_stability, ExperimentRegime::shift_law}) {
    if (experiment_regime_name(r) == s) return r;
  }
  throw ConfigError("unknown regime '" + s + "'");
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const double h = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw PreconditionError("KS distance needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_pvalue(double d, std::size_t n, std::size_t m) {
  const double ne = static_cast<double>(n) * static_cast<double>(m) / static_cast<double>(n + m);
  const double sq = std::sqrt(ne);
  const double lambda = (sq + 0.12 + 0.11 / sq) * d;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          next.store(count);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<std::string> validate_experiment(ExperimentConfig& cfg) {
  std::vector<std::string> warnings;
  if (cfg.replications < 1) throw ConfigError("replications must be >= 1");
  if (cfg.k < 1) throw ConfigError("k must be >= 1");
  if (!(cfg.p > 0.0)) throw ConfigError("p must be > 0");
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  if (cfg.max_attempts < 1) throw ConfigError("max_attempts must be >= 1");
  if (cfg.omega_eps && !(*cfg.omega_eps > 0.0)) throw ConfigError("omega_eps must be > 0");
  if (cfg.past_window && !(*cfg.past_window > 0.0)) throw ConfigError("past_window must be > 0");
  cfg.levy.seed = cfg.base_seed;

  const auto check_grid = [&] {
    if (cfg.grid_sizes.empty()) throw ConfigError("grid_sizes must be nonempty");
    for (std::size_t i = 0; i < cfg.grid_sizes.size(); ++i) {
      if (cfg.grid_sizes[i] < 2) throw ConfigError("grid sizes must be >= 2");
      if (i > 0 && cfg.grid_sizes[i] <= cfg.grid_sizes[i - 1]) {
        throw ConfigError("grid_sizes must be strictly increasing");
      }
    }
  };

  if (cfg.regime == ExperimentRegime::shift_law) {
    if (!cfg.shift_law) throw ConfigError("the shift_law regime needs a 'shift_law' table");
    if (cfg.shift_law->draws < 1) throw ConfigError("shift_law draws must be >= 1");
    if (cfg.shift_law->sampler != "beta22" && cfg.shift_law->sampler != "uniform") {
      throw ConfigError("unknown shift_law sampler '" + cfg.shift_law->sampler + "'");
    }
    check_grid();
    return warnings;
  }

  try {
    cfg.kernel.validate();
    cfg.levy.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  if (cfg.k < cfg.kernel.k_max) {
    throw PreconditionError("k is below the kernel's k_max");
  }
  const double beta = bg_index(cfg.levy);
  if (!(cfg.p > beta)) throw PreconditionError("p must exceed the Blumenthal-Getoor index");
  if (cfg.levy.is_stable() && cfg.kernel.w != beta) {
    warnings.push_back("kernel w differs from the stable index beta");
  }

  switch (cfg.regime) {
    case ExperimentRegime::toy:
      if (cfg.kernel.envelope != Envelope::indicator) {
        throw PreconditionError("the toy regime needs the indicator kernel");
      }
      if (cfg.k != 1) throw PreconditionError("the toy regime needs k = 1");
      if (cfg.levy.is_stable()) throw PreconditionError("the toy regime needs a compound Poisson driver");
      break;
    case ExperimentRegime::r1:
    case ExperimentRegime::r1_coupled:
    case ExperimentRegime::distribution:
      check_regime1(cfg.kernel, cfg.p, cfg.k);
      break;
    case ExperimentRegime::r2:
      check_regime2(cfg.kernel, cfg.p, cfg.k);
      if (!(1.0 / cfg.p + 1.0 / cfg.kernel.w > 1.0)) {
        throw PreconditionError("the log regime needs 1/p + 1/w > 1");
      }
      if (cfg.kernel.w == 1.0) warnings.push_back("w = 1: the log-integrability condition is not checked");
      break;
    case ExperimentRegime::cutoff_stability:
      if (!cfg.levy.is_stable()) throw ConfigError("cutoff_stability needs a sym_stable driver");
      if (cfg.cutoffs.empty()) throw ConfigError("cutoff_stability needs a 'cutoffs' list");
      for (std::size_t i = 0; i < cfg.cutoffs.size(); ++i) {
        if (!(cfg.cutoffs[i] > 0.0)) throw ConfigError("cutoffs must be > 0");
        if (i > 0 && !(cfg.cutoffs[i] < cfg.cutoffs[i - 1])) {
          throw ConfigError("cutoffs must be strictly decreasing");
        }
      }
      check_regime1(cfg.kernel, cfg.p, cfg.k);
      break;
    case ExperimentRegime::shift_law:
      break;
  }

  if (cfg.subsequence) {
    const auto& req = *cfg.subsequence;
    const auto A = min_alpha_set(cfg.kernel);
    std::vector<double> thetas;
    for (std::size_t z : A.indices) {
      if (z > 0) thetas.push_back(cfg.kernel.singularities[z].theta);
    }
    if (req.etas.size() != thetas.size()) {
      throw ConfigError("subsequence needs one eta per nonzero theta in the minimal-exponent set");
    }
    if (req.anchors.empty()) throw ConfigError("subsequence needs anchors");
    std::vector<std::int64_t> grid;
    if (thetas.empty()) {
      grid = req.anchors;
    } else {
      const auto plan = find_subsequence(thetas, req.etas, req.tolerance, req.n_min, req.n_max,
                                         std::numeric_limits<std::size_t>::max());
      for (auto anchor : req.anchors) {
        auto it = std::lower_bound(plan.terms.begin(), plan.terms.end(), anchor);
        if (it == plan.terms.end()) {
          throw PreconditionError("no subsequence term at or above anchor " + std::to_string(anchor) +
                                  " (best residual " + format_double(plan.best_residual) + ")");
        }
        grid.push_back(*it);
      }
    }
    cfg.grid_sizes = grid;
  }
  check_grid();
  for (auto n : cfg.grid_sizes) {
    if (n < cfg.k) throw ConfigError("grid sizes must be >= k");
  }
  return warnings;
}

ExperimentResult run_convergence(ExperimentConfig cfg) {
  ExperimentResult res;
  res.warnings = validate_experiment(cfg);
  if (cfg.regime != ExperimentRegime::r1_coupled && cfg.regime != ExperimentRegime::r2 &&
      cfg.regime != ExperimentRegime::toy) {
    throw ConfigError("run_convergence needs regime r1_coupled, r2 or toy");
  }
  const double T_past = past_window_of(cfg);
  const Interval window{-T_past, 1.0};
  const double alpha = scaling_alpha(cfg);
  const auto& grid = cfg.grid_sizes;
  const auto reps = static_cast<std::size_t>(cfg.replications);

  struct RepOut {
    Realization real;
    std::vector<std::array<double, 4>> per_n;  // V, statistic, limit, rel_error
  };
  std::vector<RepOut> out(reps);
  parallel_for(reps, cfg.threads, [&](std::size_t r) {
    RepOut ro;
    ro.real = realize(cfg, r, window, grid.back());
    const auto& rec = ro.real.record;
    double fixed_limit = kNaN;
    if (cfg.regime == ExperimentRegime::toy) fixed_limit = limit_toy(rec, cfg.p);
    if (cfg.regime == ExperimentRegime::r2) fixed_limit = limit_regime2(cfg.kernel, rec, cfg.p, cfg.k).value;
    for (auto n : grid) {
      const auto path = simulate_path(cfg.kernel, rec, n, T_past);
      const auto rep = power_variation(path, cfg.p, cfg.k, alpha);
      double stat, limit;
      switch (cfg.regime) {
        case ExperimentRegime::toy:
          stat = rep.V;
          limit = fixed_limit;
          break;
        case ExperimentRegime::r2:
          stat = rep.scaled_r2;
          limit = fixed_limit;
          break;
        default:
          stat = rep.scaled_r1;
          limit = limit_regime1_coupled(cfg.kernel, rec, n, cfg.p, cfg.k).value;
          break;
      }
      ro.per_n.push_back({rep.V, stat, limit, rel_error(stat, limit)});
    }
    out[r] = std::move(ro);
  });

  res.rows.columns = {"replication", "stream", "seed", "n", "jumps", "V", "statistic",
                      "limit", "abs_error", "rel_error", "omega_eps", "eps"};
  for (std::size_t r = 0; r < reps; ++r) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto& v = out[r].per_n[i];
      res.rows.rows.push_back({static_cast<std::int64_t>(r),
                               static_cast<std::int64_t>(out[r].real.stream),
                               static_cast<std::int64_t>(cfg.base_seed), grid[i],
                               static_cast<std::int64_t>(out[r].real.record.size()), v[0], v[1],
                               v[2], std::abs(v[1] - v[2]), v[3],
                               static_cast<std::int64_t>(out[r].real.separated ? 1 : 0),
                               out[r].real.eps});
    }
  }
  res.summary.columns = {"n", "count", "median_rel_error", "q25_rel_error", "q75_rel_error",
                         "count_omega", "median_rel_error_omega"};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<double> all, sep;
    for (std::size_t r = 0; r < reps; ++r) {
      all.push_back(out[r].per_n[i][3]);
      if (out[r].real.separated) sep.push_back(out[r].per_n[i][3]);
    }
    res.summary.rows.push_back({grid[i], static_cast<std::int64_t>(all.size()), median(all),
                                quantile(all, 0.25), quantile(all, 0.75),
                                static_cast<std::int64_t>(sep.size()), median(sep)});
  }
  res.meta = base_meta(cfg);
  res.meta["past_window"] = T_past;
  res.meta["alpha_used"] = alpha;
  res.meta["grid_sizes"] = grid;
  if (cfg.kernel.envelope == Envelope::bump_exp) {
    const auto tr = truncation_error_report(cfg.kernel, cfg.levy, T_past);
    res.meta["truncation_lipschitz_bound"] = tr.lipschitz_bound;
  }
  res.meta["warnings"] = res.warnings;
  return res;
}

ExperimentResult run_distribution(ExperimentConfig cfg) {
  ExperimentResult res;
  res.warnings = validate_experiment(cfg);
  if (cfg.regime != ExperimentRegime::distribution && cfg.regime != ExperimentRegime::r1) {
    throw ConfigError("run_distribution needs regime distribution or r1");
  }
  const double T_past = past_window_of(cfg);
  const Interval window{-T_past, 1.0};
  const double alpha = scaling_alpha(cfg);
  const std::int64_t n = cfg.grid_sizes.back();
  const auto A = min_alpha_set(cfg.kernel);
  std::vector<double> etas;
  for (std::size_t z : A.indices) {
    etas.push_back(frac(static_cast<double>(n) * cfg.kernel.singularities[z].theta));
  }
  const auto reps = static_cast<std::size_t>(cfg.replications);
  std::vector<double> V(reps), limit(reps);
  parallel_for(reps, cfg.threads, [&](std::size_t r) {
    const auto rec = simulate_jumps(cfg.levy, window, r);
    V[r] = power_variation(simulate_path(cfg.kernel, rec, n, T_past), cfg.p, cfg.k, alpha).V;
    const auto rec_b = simulate_jumps(cfg.levy, window, kLimitStreamOffset + r);
    auto u = make_stream(cfg.base_seed, r, StreamDomain::limit_uniforms);
    limit[r] = limit_regime1(cfg.kernel, rec_b, etas, cfg.p, cfg.k, u).value;
  });
  const double dn = static_cast<double>(n);
  const auto scaled = [&](double a) {
    std::vector<double> s(reps);
    for (std::size_t r = 0; r < reps; ++r) s[r] = std::pow(dn, a * cfg.p) * V[r];
    return s;
  };
  const auto stat = scaled(alpha);

  res.rows.columns = {"replication", "stream", "limit_stream", "n", "V", "statistic", "limit_draw"};
  for (std::size_t r = 0; r < reps; ++r) {
    res.rows.rows.push_back({static_cast<std::int64_t>(r), static_cast<std::int64_t>(r),
                             static_cast<std::int64_t>(kLimitStreamOffset + r), n, V[r], stat[r],
                             limit[r]});
  }
  res.summary.columns = {"label", "alpha_used", "ks", "ks_pvalue", "median_statistic",
                         "median_limit"};
  const auto add = [&](const std::string& label, double a, const std::vector<double>& s) {
    const double d = ks_distance(s, limit);
    res.summary.rows.push_back({label, a, d, ks_pvalue(d, s.size(), limit.size()), median(s),
                                median(limit)});
  };
  add("main", alpha, stat);
  for (double off : cfg.control_offsets) add("control", alpha + off, scaled(alpha + off));
  res.meta = base_meta(cfg);
  res.meta["past_window"] = T_past;
  res.meta["alpha_used"] = alpha;
  res.meta["n"] = n;
  res.meta["etas"] = etas;
  res.meta["warnings"] = res.warnings;
  return res;
}

ExperimentResult run_cutoff_stability(ExperimentConfig cfg) {
  ExperimentResult res;
  res.warnings = validate_experiment(cfg);
  if (cfg.regime != ExperimentRegime::cutoff_stability) {
    throw ConfigError("run_cutoff_stability needs regime cutoff_stability");
  }
  const double T_past = past_window_of(cfg);
  const Interval window{-T_past, 1.0};
  const double alpha = scaling_alpha(cfg);
  const std::int64_t n = cfg.grid_sizes.back();
  const auto& cuts = cfg.cutoffs;
  LevySpec levy = cfg.levy;
  auto& st = std::get<SymStable>(levy.kind);
  st.cutoff = cuts.back();
  st.proposal_cutoff = cuts.back();

  const auto reps = static_cast<std::size_t>(cfg.replications);
  std::vector<std::vector<double>> stat(reps, std::vector<double>(cuts.size()));
  std::vector<std::vector<std::int64_t>> counts(reps, std::vector<std::int64_t>(cuts.size()));
  parallel_for(reps, cfg.threads, [&](std::size_t r) {
    const auto rec = simulate_jumps(levy, window, r);
    std::vector<double> values(static_cast<std::size_t>(n) + 1, 0.0);
    double upper = std::numeric_limits<double>::infinity();
    std::int64_t total = 0;
    for (std::size_t c = 0; c < cuts.size(); ++c) {
      const auto cls = rec.with_sizes_in(cuts[c], upper);
      accumulate_path(cfg.kernel, cls, n, values);
      total += static_cast<std::int64_t>(cls.size());
      counts[r][c] = total;
      stat[r][c] = power_variation(values, cfg.p, cfg.k, alpha).scaled_r1;
      upper = cuts[c];
    }
  });

  res.rows.columns = {"replication", "stream", "n", "cutoff", "jumps", "statistic", "abs_diff"};
  for (std::size_t r = 0; r < reps; ++r) {
    for (std::size_t c = 0; c < cuts.size(); ++c) {
      const double diff = c == 0 ? kNaN : std::abs(stat[r][c] - stat[r][c - 1]);
      res.rows.rows.push_back({static_cast<std::int64_t>(r), static_cast<std::int64_t>(r), n,
                               cuts[c], counts[r][c], stat[r][c], diff});
    }
  }
  res.summary.columns = {"cutoff_from", "cutoff_to", "median_abs_diff", "q25_abs_diff",
                         "q75_abs_diff", "median_statistic"};
  for (std::size_t c = 1; c < cuts.size(); ++c) {
    std::vector<double> d, s;
    for (std::size_t r = 0; r < reps; ++r) {
      d.push_back(std::abs(stat[r][c] - stat[r][c - 1]));
      s.push_back(stat[r][c]);
    }
    res.summary.rows.push_back({cuts[c - 1], cuts[c], median(d), quantile(d, 0.25),
                                quantile(d, 0.75), median(s)});
  }
  res.meta = base_meta(cfg);
  res.meta["past_window"] = T_past;
  res.meta["alpha_used"] = alpha;
  res.meta["n"] = n;
  res.meta["warnings"] = res.warnings;
  return res;
}

ExperimentResult run_shift_law(ExperimentConfig cfg) {
  ExperimentResult res;
  res.warnings = validate_experiment(cfg);
  if (cfg.regime != ExperimentRegime::shift_law) throw ConfigError("run_shift_law needs regime shift_law");
  const auto& req = *cfg.shift_law;
  const DensitySampler sampler = req.sampler == "uniform"
                                     ? DensitySampler([](std::mt19937_64& g) { return uniform_open(g); })
                                     : DensitySampler(sample_beta22);
  const auto reps = static_cast<std::size_t>(cfg.replications);
  std::vector<std::vector<double>> ks(reps);
  parallel_for(reps, cfg.threads, [&](std::size_t r) {
    ks[r] = shift_law_check(sampler, req.theta, cfg.grid_sizes, req.draws, cfg.base_seed + r);
  });
  res.rows.columns = {"replication", "n", "ks"};
  for (std::size_t r = 0; r < reps; ++r) {
    for (std::size_t i = 0; i < cfg.grid_sizes.size(); ++i) {
      res.rows.rows.push_back({static_cast<std::int64_t>(r), cfg.grid_sizes[i], ks[r][i]});
    }
  }
  res.summary.columns = {"n", "median_ks", "q25_ks", "q75_ks"};
  for (std::size_t i = 0; i < cfg.grid_sizes.size(); ++i) {
    const auto col = column(ks, i);
    res.summary.rows.push_back({cfg.grid_sizes[i], median(col), quantile(col, 0.25), quantile(col, 0.75)});
  }
  res.meta = base_meta(cfg);
  res.meta["warnings"] = res.warnings;
  return res;
}

ExperimentResult run_experiment(ExperimentConfig cfg) {
  switch (cfg.regime) {
    case ExperimentRegime::r1_coupled:
    case ExperimentRegime::r2:
    case ExperimentRegime::toy:
      return run_convergence(std::move(cfg));
    case ExperimentRegime::r1:
    case ExperimentRegime::distribution:
      return run_distribution(std::move(cfg));
    case ExperimentRegime::cutoff_stability:
      return run_cutoff_stability(std::move(cfg));
    case ExperimentRegime::shift_law:
      return run_shift_law(std::move(cfg));
  }
  throw ConfigError("unknown regime");
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  return std::get<std::string>(c);
}

nlohmann::json cell_json(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    return *d;
  }
  return std::get<std::string>(c);
}

void write_table(const Table& t, const std::string& path, OutputFormat fmt) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  if (fmt == OutputFormat::csv) {
    os << "# schema_version=" << kSchemaVersion << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
      os << '\n';
    }
  } else {
    os << nlohmann::json{{"schema_version", kSchemaVersion}, {"columns", t.columns}}.dump() << '\n';
    for (const auto& row : t.rows) {
      nlohmann::json obj = nlohmann::json::object();
      for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = cell_json(row[i]);
      os << obj.dump() << '\n';
    }
  }
  if (!os) throw std::runtime_error("write failed for " + path);
}

}  // namespace

void write_outputs(const ExperimentResult& res, const std::string& prefix, OutputFormat fmt) {
  const std::filesystem::path p(prefix);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  const std::string ext = fmt == OutputFormat::csv ? ".csv" : ".jsonl";
  write_table(res.rows, prefix + "_rows" + ext, fmt);
  write_table(res.summary, prefix + "_summary" + ext, fmt);

  auto meta = res.meta;
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ts;
  ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  meta["written_at"] = ts.str();
  std::ofstream os(prefix + "_meta.json", std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + prefix + "_meta.json");
  os << meta.dump(2) << '\n';
}

}  // namespace levyma
