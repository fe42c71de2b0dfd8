#include "levyma/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "levyma/errors.hpp"
#include "levyma/serialization.hpp"
#include "levyma/toml.hpp"

namespace levyma {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

template <typename T>
T field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("field '") + key + "' is missing or has the wrong type");
  }
}

template <typename T>
T field_or(const json& j, const char* key, T def) {
  return j.contains(key) ? field<T>(j, key) : def;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

}  // namespace

json load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (ends_with(path, ".toml")) return parse_toml(text);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    if (ends_with(path, ".json")) throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  return parse_toml(text);
}

ExperimentConfig experiment_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("experiment config must be an object");
  reject_unknown(j,
                 {"kernel", "levy", "k", "p", "grid_sizes", "subsequence", "replications",
                  "base_seed", "regime", "output", "past_window", "omega_eps",
                  "require_separation", "max_attempts", "alpha", "control_offsets", "cutoffs",
                  "shift_law", "threads"},
                 "experiment config");
  ExperimentConfig cfg;
  cfg.regime = experiment_regime_from_name(field<std::string>(j, "regime"));
  if (cfg.regime != ExperimentRegime::shift_law) {
    if (!j.contains("kernel")) throw ConfigError("missing field 'kernel'");
    if (!j.contains("levy")) throw ConfigError("missing field 'levy'");
  }
  if (j.contains("kernel")) cfg.kernel = kernel_from_json(j.at("kernel"));
  if (j.contains("levy")) cfg.levy = levy_from_json(j.at("levy"));
  cfg.k = field_or<int>(j, "k", 1);
  cfg.p = field_or<double>(j, "p", 2.0);
  cfg.grid_sizes = field_or<std::vector<std::int64_t>>(j, "grid_sizes", {});
  cfg.replications = field_or<std::int64_t>(j, "replications", 1);
  cfg.base_seed = field_or<std::uint64_t>(j, "base_seed", 0);
  cfg.output = field_or<std::string>(j, "output", "levyma_out");
  if (j.contains("past_window")) cfg.past_window = field<double>(j, "past_window");
  if (j.contains("omega_eps")) cfg.omega_eps = field<double>(j, "omega_eps");
  cfg.require_separation = field_or<bool>(j, "require_separation", false);
  cfg.max_attempts = field_or<int>(j, "max_attempts", 1000);
  if (j.contains("alpha")) cfg.alpha = field<double>(j, "alpha");
  cfg.control_offsets = field_or<std::vector<double>>(j, "control_offsets", {});
  cfg.cutoffs = field_or<std::vector<double>>(j, "cutoffs", {});
  cfg.threads = field_or<int>(j, "threads", 1);
  if (j.contains("subsequence")) {
    const auto& s = j.at("subsequence");
    if (!s.is_object()) throw ConfigError("'subsequence' must be a table");
    reject_unknown(s, {"etas", "tolerance", "n_min", "n_max", "anchors"}, "subsequence");
    SubsequenceRequest r;
    r.etas = field<std::vector<double>>(s, "etas");
    r.tolerance = field_or<double>(s, "tolerance", 1e-2);
    r.n_min = field_or<std::int64_t>(s, "n_min", 1);
    r.n_max = field_or<std::int64_t>(s, "n_max", 100000);
    r.anchors = field<std::vector<std::int64_t>>(s, "anchors");
    cfg.subsequence = r;
  }
  if (j.contains("shift_law")) {
    const auto& s = j.at("shift_law");
    if (!s.is_object()) throw ConfigError("'shift_law' must be a table");
    reject_unknown(s, {"theta", "draws", "sampler"}, "shift_law");
    ShiftLawRequest r;
    r.theta = field<double>(s, "theta");
    r.draws = field_or<std::int64_t>(s, "draws", 10000);
    r.sampler = field_or<std::string>(s, "sampler", "beta22");
    cfg.shift_law = r;
  }
  cfg.levy.seed = cfg.base_seed;
  return cfg;
}

json experiment_to_json(const ExperimentConfig& cfg) {
  json j;
  j["regime"] = experiment_regime_name(cfg.regime);
  j["kernel"] = kernel_to_json(cfg.kernel);
  j["levy"] = levy_to_json(cfg.levy);
  j["k"] = cfg.k;
  j["p"] = cfg.p;
  j["grid_sizes"] = cfg.grid_sizes;
  j["replications"] = cfg.replications;
  j["base_seed"] = cfg.base_seed;
  j["output"] = cfg.output;
  if (cfg.past_window) j["past_window"] = *cfg.past_window;
  if (cfg.omega_eps) j["omega_eps"] = *cfg.omega_eps;
  j["require_separation"] = cfg.require_separation;
  j["max_attempts"] = cfg.max_attempts;
  if (cfg.alpha) j["alpha"] = *cfg.alpha;
  if (!cfg.control_offsets.empty()) j["control_offsets"] = cfg.control_offsets;
  if (!cfg.cutoffs.empty()) j["cutoffs"] = cfg.cutoffs;
  if (cfg.subsequence) {
    const auto& s = *cfg.subsequence;
    j["subsequence"] = {{"etas", s.etas},
                        {"tolerance", s.tolerance},
                        {"n_min", s.n_min},
                        {"n_max", s.n_max},
                        {"anchors", s.anchors}};
  }
  if (cfg.shift_law) {
    const auto& s = *cfg.shift_law;
    j["shift_law"] = {{"theta", s.theta}, {"draws", s.draws}, {"sampler", s.sampler}};
  }
  return j;
}

ExperimentConfig load_experiment(const std::string& path) {
  return experiment_from_json(load_document(path));
}

}  // namespace levyma
