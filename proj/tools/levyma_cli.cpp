// levyma command line tool: simulate, powervar, limit, subseq, experiment.
// Exit codes: 0 success, 1 I/O or runtime failure, 2 config validation
// error, 3 precondition violation.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "levyma/config.hpp"
#include "levyma/errors.hpp"
#include "levyma/harness.hpp"
#include "levyma/limits.hpp"
#include "levyma/rng.hpp"
#include "levyma/serialization.hpp"
#include "levyma/simulate.hpp"
#include "levyma/stats.hpp"
#include "levyma/subseq.hpp"

using namespace levyma;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  int threads = 1;
  std::string format = "csv";
};

OutputFormat parse_format(const std::string& f) {
  if (f == "csv") return OutputFormat::csv;
  if (f == "jsonl") return OutputFormat::jsonl;
  throw ConfigError("--format must be csv or jsonl");
}

std::ofstream open_out(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  return os;
}

json require_config(const Common& c) {
  if (c.config.empty()) throw ConfigError("--config is required");
  return load_document(c.config);
}

template <typename T>
T opt_field(const json& j, const char* key, T def) {
  if (!j.contains(key)) return def;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

// Kernel, driver and record shared by simulate / powervar / limit.
struct Setup {
  KernelSpec kernel;
  LevySpec levy;
  double past_window = 1.0;
  std::uint64_t stream = 0;
  JumpRecord jumps;
};

Setup make_setup(const json& doc, const Common& c) {
  Setup s;
  if (!doc.contains("kernel") || !doc.contains("levy")) {
    throw ConfigError("config needs 'kernel' and 'levy'");
  }
  s.kernel = kernel_from_json(doc.at("kernel"));
  s.levy = levy_from_json(doc.at("levy"));
  if (c.seed) s.levy.seed = *c.seed;
  s.past_window = opt_field<double>(doc, "past_window", s.kernel.default_past_window());
  if (!(s.past_window > 0.0)) throw ConfigError("past_window must be > 0");
  s.stream = opt_field<std::uint64_t>(doc, "stream", 0);
  s.jumps = simulate_jumps(s.levy, {-s.past_window, 1.0}, s.stream);
  return s;
}

int cmd_simulate(const Common& c, std::int64_t n_override) {
  const auto doc = require_config(c);
  auto s = make_setup(doc, c);
  const auto n = n_override > 0 ? n_override : opt_field<std::int64_t>(doc, "n", 1024);
  const auto path = simulate_path(s.kernel, s.jumps, n, s.past_window);
  if (c.out.empty()) {
    write_path_csv(std::cout, path);
    return 0;
  }
  auto os = open_out(c.out + "_path.csv");
  write_path_csv(os, path);
  auto meta = open_out(c.out + "_path_meta.json");
  meta << path_provenance_json(path, s.kernel, s.levy).dump(2) << '\n';
  auto js = open_out(c.out + "_jumps.csv");
  write_jumps_csv(js, s.jumps);
  return 0;
}

int cmd_powervar(const Common& c, const std::string& path_file, int k_opt, double p_opt,
                 double alpha_opt) {
  const auto fmt = parse_format(c.format);
  std::vector<std::string> rows;
  std::vector<json> jrows;
  const auto emit = [&](const std::string& kid, std::uint64_t hash, std::uint64_t seed,
                        const PowerVariationReport& r) {
    rows.push_back(report_csv_row(kid, hash, seed, r));
    jrows.push_back({{"kernel_id", kid}, {"levy_hash", hash}, {"seed", seed}, {"n", r.n},
                     {"k", r.k}, {"p", r.p}, {"alpha", r.alpha_used}, {"V", r.V},
                     {"scaled_r1", r.scaled_r1}, {"scaled_r2", r.scaled_r2}});
  };
  if (!path_file.empty()) {
    std::ifstream in(path_file);
    if (!in) throw std::runtime_error("cannot open " + path_file);
    const auto values = read_path_values(in);
    emit("file", 0, 0, power_variation(values, p_opt, k_opt, alpha_opt));
  } else {
    const auto doc = require_config(c);
    auto s = make_setup(doc, c);
    const int k = opt_field<int>(doc, "k", k_opt);
    const double p = opt_field<double>(doc, "p", p_opt);
    double alpha = alpha_opt;
    if (doc.contains("alpha")) {
      alpha = opt_field<double>(doc, "alpha", alpha_opt);
    } else if (s.kernel.envelope != Envelope::indicator) {
      alpha = min_alpha_set(s.kernel).alpha_min;
    }
    auto grid = opt_field<std::vector<std::int64_t>>(doc, "grid_sizes", {});
    if (grid.empty()) grid.push_back(opt_field<std::int64_t>(doc, "n", 1024));
    for (auto n : grid) {
      const auto path = simulate_path(s.kernel, s.jumps, n, s.past_window);
      emit(s.kernel.id(), s.levy.hash(), s.levy.seed, power_variation(path, p, k, alpha));
    }
  }
  std::ostringstream body;
  if (fmt == OutputFormat::csv) {
    body << "# schema_version=" << kSchemaVersion << '\n' << report_csv_header() << '\n';
    for (const auto& r : rows) body << r << '\n';
  } else {
    body << json{{"schema_version", kSchemaVersion}}.dump() << '\n';
    for (const auto& r : jrows) body << r.dump() << '\n';
  }
  if (c.out.empty()) {
    std::cout << body.str();
  } else {
    auto os = open_out(c.out + (fmt == OutputFormat::csv ? "_report.csv" : "_report.jsonl"));
    os << body.str();
  }
  return 0;
}

int cmd_limit(const Common& c) {
  const auto doc = require_config(c);
  auto s = make_setup(doc, c);
  const auto regime = opt_field<std::string>(doc, "regime", "r1");
  const int k = opt_field<int>(doc, "k", 1);
  const double p = opt_field<double>(doc, "p", 2.0);
  LimitOptions opt;
  opt.verbose = opt_field<bool>(doc, "verbose", false);
  if (doc.contains("R")) opt.R = opt_field<std::int64_t>(doc, "R", 0);
  LimitSample sample;
  if (regime == "r1") {
    const auto etas = opt_field<std::vector<double>>(doc, "etas", {});
    auto u = make_stream(s.levy.seed, s.stream, StreamDomain::limit_uniforms);
    sample = limit_regime1(s.kernel, s.jumps, etas, p, k, u, opt);
  } else if (regime == "r1_coupled") {
    sample = limit_regime1_coupled(s.kernel, s.jumps, opt_field<std::int64_t>(doc, "n", 1024), p, k, opt);
  } else if (regime == "r2") {
    sample = limit_regime2(s.kernel, s.jumps, p, k);
  } else if (regime == "toy") {
    sample.regime = Regime::toy;
    sample.value = limit_toy(s.jumps, p);
  } else {
    throw ConfigError("limit regime must be r1, r1_coupled, r2 or toy");
  }
  auto j = limit_sample_to_json(sample);
  j["levy_hash"] = s.levy.hash();
  j["seed"] = s.levy.seed;
  j["stream"] = s.stream;
  if (c.out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    auto os = open_out(c.out + "_limit.json");
    os << j.dump(2) << '\n';
  }
  return 0;
}

int cmd_subseq(const Common& c, std::vector<double> thetas, std::vector<double> etas,
               double tolerance, std::int64_t n_min, std::int64_t n_max, std::size_t max_terms) {
  if (!c.config.empty()) {
    const auto doc = load_document(c.config);
    thetas = opt_field<std::vector<double>>(doc, "thetas", thetas);
    etas = opt_field<std::vector<double>>(doc, "etas", etas);
    tolerance = opt_field<double>(doc, "tolerance", tolerance);
    n_min = opt_field<std::int64_t>(doc, "n_min", n_min);
    n_max = opt_field<std::int64_t>(doc, "n_max", n_max);
    max_terms = opt_field<std::size_t>(doc, "max_terms", max_terms);
  }
  if (thetas.empty()) throw ConfigError("subseq needs at least one theta");
  const auto plan = find_subsequence(thetas, etas, tolerance, n_min, n_max, max_terms);
  std::cout << "n_j";
  for (std::size_t z = 0; z < thetas.size(); ++z) std::cout << "\tfrac_" << z;
  std::cout << "\tresidual\n";
  for (std::size_t i = 0; i < plan.terms.size(); ++i) {
    std::cout << plan.terms[i];
    for (double a : plan.achieved[i]) std::cout << '\t' << format_double(a);
    std::cout << '\t' << format_double(plan.residuals[i]) << '\n';
  }
  if (plan.empty()) {
    std::cout << "# no qualifying n; best n = " << plan.best_n
              << ", residual = " << format_double(plan.best_residual) << '\n';
  }
  for (const auto& r : plan.rational) {
    std::cout << "# theta_" << r.index << " = " << r.p << "/" << r.q
              << ": reachable fractional parts are j/" << r.q
              << (plan.reachable[r.index] ? "" : " (target unreachable)") << '\n';
  }
  if (!c.out.empty()) {
    auto os = open_out(c.out + "_plan.json");
    os << plan_to_json(plan).dump(2) << '\n';
  }
  return 0;
}

int cmd_experiment(const Common& c) {
  auto cfg = load_experiment(c.config.empty() ? throw ConfigError("--config is required") : c.config);
  if (c.seed) cfg.base_seed = *c.seed;
  if (!c.out.empty()) cfg.output = c.out;
  cfg.threads = c.threads;
  const auto fmt = parse_format(c.format);
  const auto res = run_experiment(cfg);
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
  write_outputs(res, cfg.output, fmt);
  std::cerr << "wrote " << cfg.output << "_{rows,summary,meta}\n";
  return 0;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "Config file (TOML or JSON)");
  sub->add_option("--seed", c.seed, "Base seed override");
  sub->add_option("--out", c.out, "Output path prefix");
  sub->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--format", c.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"levyma: power variations of Levy moving averages"};
  app.require_subcommand(1);
  Common common;

  auto* sim = app.add_subcommand("simulate", "Simulate a path and write it as CSV");
  add_common(sim, common);
  std::int64_t sim_n = 0;
  sim->add_option("--n", sim_n, "Grid resolution (overrides config)");

  auto* pv = app.add_subcommand("powervar", "Power variation report");
  add_common(pv, common);
  std::string path_file;
  int pv_k = 1;
  double pv_p = 2.0, pv_alpha = 0.0;
  pv->add_option("--path", path_file, "Path CSV (i,t,X) instead of a config");
  pv->add_option("--k", pv_k, "Increment order");
  pv->add_option("--p", pv_p, "Power");
  pv->add_option("--alpha", pv_alpha, "Scaling exponent");

  auto* lim = app.add_subcommand("limit", "Evaluate a limit law on a simulated record");
  add_common(lim, common);

  auto* ss = app.add_subcommand("subseq", "Plan subsequences with prescribed fractional parts");
  add_common(ss, common);
  std::vector<double> thetas, etas;
  double tol = 1e-3;
  std::int64_t n_min = 1, n_max = 100000;
  std::size_t max_terms = 20;
  ss->add_option("--thetas", thetas, "Singularity locations");
  ss->add_option("--etas", etas, "Target fractional parts");
  ss->add_option("--tolerance", tol, "Circle-distance tolerance");
  ss->add_option("--n-min", n_min, "Scan start");
  ss->add_option("--n-max", n_max, "Scan end");
  ss->add_option("--max-terms", max_terms, "Maximum number of terms");

  auto* ex = app.add_subcommand("experiment", "Run an experiment config");
  add_common(ex, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(common, sim_n);
    if (pv->parsed()) return cmd_powervar(common, path_file, pv_k, pv_p, pv_alpha);
    if (lim->parsed()) return cmd_limit(common);
    if (ss->parsed()) return cmd_subseq(common, thetas, etas, tol, n_min, n_max, max_terms);
    if (ex->parsed()) return cmd_experiment(common);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
