#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "levyma/kernels.hpp"
#include "levyma/levy.hpp"
#include "levyma/limits.hpp"
#include "levyma/simulate.hpp"
#include "levyma/stats.hpp"
#include "levyma/subseq.hpp"

namespace levyma {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Shortest round-trip text is not required; 17 significant digits always are.
std::string format_double(double x);

// Kernel documents follow
//   {"singularities": [{"theta", "alpha", "c"}], "envelope": "bump-exp",
//    "g0_mode": "zero", "w": 1, "k_max": 1}
// plus optional "name", "delta" and "g0_singularities". A "builtin" key
// ("indicator", "lfsm" with "alpha"/"c") selects a named kernel.
// Malformed or invalid input throws ConfigError.
json kernel_to_json(const KernelSpec& k);
KernelSpec kernel_from_json(const json& j);

// {"kind": "compound_poisson", "rate", "jump_law": {"name": "gaussian", "sigma"}}
// {"kind": "sym_stable", "beta", "scale", "jump_cutoff", "proposal_cutoff"?}
// "seed" is optional in both.
json levy_to_json(const LevySpec& l);
LevySpec levy_from_json(const json& j);

void write_jumps_csv(std::ostream& os, const JumpRecord& jumps);
JumpRecord read_jumps_csv(std::istream& is, Interval window);

void write_path_csv(std::ostream& os, const SamplePath& path);
json path_provenance_json(const SamplePath& path, const KernelSpec& kernel, const LevySpec& levy);
// Reads the X column of a path CSV; returns the values.
std::vector<double> read_path_values(std::istream& is);

std::string report_csv_header();
std::string report_csv_row(const std::string& kernel_id, std::uint64_t levy_hash,
                           std::uint64_t seed, const PowerVariationReport& r);

json limit_sample_to_json(const LimitSample& s);
json plan_to_json(const SubsequencePlan& plan);

}  // namespace levyma
