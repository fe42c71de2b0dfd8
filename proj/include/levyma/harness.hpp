#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "levyma/kernels.hpp"
#include "levyma/levy.hpp"
#include "levyma/subseq.hpp"

namespace levyma {

enum class ExperimentRegime { r1, r1_coupled, r2, toy, distribution, cutoff_stability, shift_law };

std::string experiment_regime_name(ExperimentRegime r);
ExperimentRegime experiment_regime_from_name(const std::string& s);

struct SubsequenceRequest {
  std::vector<double> etas;  // one per theta_z, z in A, z >= 1
  double tolerance = 1e-2;
  std::int64_t n_min = 1;
  std::int64_t n_max = 100000;
  // For each anchor the first qualifying n >= anchor becomes a grid size.
  std::vector<std::int64_t> anchors;
};

struct ShiftLawRequest {
  double theta = 0.0;
  std::int64_t draws = 10000;
  std::string sampler = "beta22";  // or "uniform"
};

struct ExperimentConfig {
  KernelSpec kernel;
  LevySpec levy;
  int k = 1;
  double p = 2.0;
  std::vector<std::int64_t> grid_sizes;
  std::optional<SubsequenceRequest> subsequence;
  std::int64_t replications = 1;
  std::uint64_t base_seed = 0;
  ExperimentRegime regime = ExperimentRegime::r1_coupled;
  std::string output = "levyma_out";

  std::optional<double> past_window;
  std::optional<double> omega_eps;  // default from the realized jump spacing
  // Replace replications whose record fails the separation check by the
  // next stream r + j * replications, up to max_attempts tries.
  bool require_separation = false;
  int max_attempts = 1000;
  std::optional<double> alpha;              // scaling exponent override
  std::vector<double> control_offsets;      // distribution: extra exponents alpha + offset
  std::vector<double> cutoffs;              // cutoff_stability ladder, decreasing
  std::optional<ShiftLawRequest> shift_law;
  int threads = 1;
};

// A cell is an integer, a real or text; rows are keyed and sorted before output.
using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct ExperimentResult {
  Table rows;
  Table summary;
  nlohmann::json meta;  // everything except timestamps, which are added on write
  std::vector<std::string> warnings;
};

// Resolves subsequence anchors into grid sizes, fills defaults, and checks
// every theorem precondition. Structural problems throw ConfigError,
// violated preconditions throw PreconditionError. Returns warnings.
std::vector<std::string> validate_experiment(ExperimentConfig& cfg);

ExperimentResult run_convergence(ExperimentConfig cfg);
ExperimentResult run_distribution(ExperimentConfig cfg);
ExperimentResult run_cutoff_stability(ExperimentConfig cfg);
ExperimentResult run_shift_law(ExperimentConfig cfg);
ExperimentResult run_experiment(ExperimentConfig cfg);

enum class OutputFormat { csv, jsonl };

// Writes <prefix>_rows.{csv,jsonl}, <prefix>_summary.{csv,jsonl} and
// <prefix>_meta.json. Only the meta file carries a timestamp.
void write_outputs(const ExperimentResult& res, const std::string& prefix, OutputFormat fmt);

// Sup distance between empirical CDFs. Throws PreconditionError on empty input.
double ks_distance(std::vector<double> a, std::vector<double> b);
// Asymptotic two-sample KS p-value.
double ks_pvalue(double d, std::size_t n, std::size_t m);

double median(std::vector<double> v);
double quantile(std::vector<double> v, double q);

// Runs fn(i) for i in [0, count) on up to `threads` workers; results are
// written by index so order never matters. Rethrows the first exception.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace levyma
