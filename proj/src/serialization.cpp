#include "levyma/serialization.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "levyma/errors.hpp"

namespace levyma {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

double get_num(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  if (!j.at(key).is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

double get_num_or(const json& j, const char* key, double def) {
  return j.contains(key) ? get_num(j, key) : def;
}

std::vector<SingularPoint> points_from_json(const json& arr, const char* what) {
  if (!arr.is_array()) throw ConfigError(std::string(what) + " must be an array");
  std::vector<SingularPoint> out;
  for (const auto& e : arr) {
    if (!e.is_object()) throw ConfigError(std::string(what) + " entries must be objects");
    out.push_back(SingularPoint{get_num(e, "theta"), get_num(e, "alpha"), get_num_or(e, "c", 1.0)});
  }
  return out;
}

json points_to_json(const std::vector<SingularPoint>& pts) {
  json arr = json::array();
  for (const auto& s : pts) arr.push_back({{"theta", s.theta}, {"alpha", s.alpha}, {"c", s.c}});
  return arr;
}

std::string envelope_name(Envelope e) {
  switch (e) {
    case Envelope::indicator:
      return "indicator";
    case Envelope::power:
      return "power";
    case Envelope::bump_exp:
      return "bump-exp";
  }
  return "bump-exp";
}

std::string g0_name(G0Mode m) {
  switch (m) {
    case G0Mode::zero:
      return "zero";
    case G0Mode::equal_to_g:
      return "equal_to_g";
    case G0Mode::custom:
      return "custom";
  }
  return "zero";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() && s.find_first_not_of(" \r\t", pos) != std::string::npos) {
      throw ConfigError("malformed number '" + s + "'");
    }
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("malformed number '" + s + "'");
  }
}

}  // namespace

json kernel_to_json(const KernelSpec& k) {
  json j;
  if (!k.name.empty()) j["name"] = k.name;
  j["singularities"] = points_to_json(k.singularities);
  j["envelope"] = envelope_name(k.envelope);
  j["g0_mode"] = g0_name(k.g0_mode);
  if (k.g0_mode == G0Mode::custom) j["g0_singularities"] = points_to_json(k.g0_singularities);
  j["w"] = k.w;
  j["k_max"] = k.k_max;
  if (k.delta) j["delta"] = *k.delta;
  return j;
}

KernelSpec kernel_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("kernel must be an object");
  KernelSpec k;
  try {
    if (j.contains("builtin")) {
      const auto b = j.at("builtin").get<std::string>();
      if (b == "indicator") {
        k = indicator_kernel();
      } else if (b == "lfsm") {
        k = lfsm_kernel(get_num(j, "alpha"), get_num_or(j, "c", 1.0));
      } else if (b == "multising") {
        k.envelope = Envelope::bump_exp;
        k.singularities = points_from_json(j.at("singularities"), "singularities");
      } else {
        throw ConfigError("unknown builtin kernel '" + b + "'");
      }
    } else {
      const auto env = j.value("envelope", std::string("bump-exp"));
      if (env == "bump-exp" || env == "bump_exp") {
        k.envelope = Envelope::bump_exp;
      } else if (env == "power") {
        k.envelope = Envelope::power;
        k.g0_mode = G0Mode::equal_to_g;
      } else if (env == "indicator") {
        k.envelope = Envelope::indicator;
      } else {
        throw ConfigError("unknown envelope '" + env + "'");
      }
      if (k.envelope != Envelope::indicator) {
        if (!j.contains("singularities")) throw ConfigError("missing field 'singularities'");
        k.singularities = points_from_json(j.at("singularities"), "singularities");
      }
    }
    if (j.contains("name")) k.name = j.at("name").get<std::string>();
    if (j.contains("g0_mode")) {
      const auto m = j.at("g0_mode").get<std::string>();
      if (m == "zero") {
        k.g0_mode = G0Mode::zero;
      } else if (m == "equal_to_g") {
        k.g0_mode = G0Mode::equal_to_g;
      } else if (m == "custom") {
        k.g0_mode = G0Mode::custom;
        if (!j.contains("g0_singularities")) throw ConfigError("custom g0 needs 'g0_singularities'");
        k.g0_singularities = points_from_json(j.at("g0_singularities"), "g0_singularities");
      } else {
        throw ConfigError("unknown g0_mode '" + m + "'");
      }
    }
    if (j.contains("w")) k.w = get_num(j, "w");
    if (j.contains("k_max")) k.k_max = j.at("k_max").get<int>();
    if (j.contains("delta")) k.delta = get_num(j, "delta");
    k.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("invalid kernel: ") + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid kernel: ") + e.what());
  }
  return k;
}

json levy_to_json(const LevySpec& l) {
  json j;
  if (const auto* cp = std::get_if<CompoundPoisson>(&l.kind)) {
    j["kind"] = "compound_poisson";
    j["rate"] = cp->rate;
    if (const auto* tp = std::get_if<TwoPointLaw>(&cp->law)) {
      j["jump_law"] = {{"name", "two_point"}, {"a", tp->a}};
    } else if (const auto* g = std::get_if<GaussianLaw>(&cp->law)) {
      j["jump_law"] = {{"name", "gaussian"}, {"sigma", g->sigma}};
    } else {
      const auto& pl = std::get<ParetoLaw>(cp->law);
      j["jump_law"] = {{"name", "pareto"}, {"scale", pl.scale}, {"shape", pl.shape}};
    }
  } else {
    const auto& st = std::get<SymStable>(l.kind);
    j["kind"] = "sym_stable";
    j["beta"] = st.beta;
    j["scale"] = st.scale;
    j["jump_cutoff"] = st.cutoff;
    if (st.proposal_cutoff) j["proposal_cutoff"] = *st.proposal_cutoff;
  }
  j["seed"] = l.seed;
  return j;
}

LevySpec levy_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("levy must be an object");
  LevySpec l;
  try {
    const auto kind = j.value("kind", std::string("compound_poisson"));
    if (kind == "compound_poisson") {
      CompoundPoisson cp;
      cp.rate = get_num(j, "rate");
      const json law = j.value("jump_law", json{{"name", "gaussian"}, {"sigma", 1.0}});
      const auto name = law.value("name", std::string("gaussian"));
      if (name == "two_point") {
        cp.law = TwoPointLaw{get_num_or(law, "a", 1.0)};
      } else if (name == "gaussian") {
        cp.law = GaussianLaw{get_num_or(law, "sigma", 1.0)};
      } else if (name == "pareto") {
        cp.law = ParetoLaw{get_num_or(law, "scale", 1.0), get_num(law, "shape")};
      } else {
        throw ConfigError("unknown jump law '" + name + "'");
      }
      l.kind = cp;
    } else if (kind == "sym_stable") {
      SymStable st;
      st.beta = get_num(j, "beta");
      st.scale = get_num_or(j, "scale", 1.0);
      st.cutoff = get_num(j, "jump_cutoff");
      if (j.contains("proposal_cutoff")) st.proposal_cutoff = get_num(j, "proposal_cutoff");
      l.kind = st;
    } else {
      throw ConfigError("unknown levy kind '" + kind + "'");
    }
    if (j.contains("seed")) l.seed = j.at("seed").get<std::uint64_t>();
    l.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("invalid levy spec: ") + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid levy spec: ") + e.what());
  }
  return l;
}

void write_jumps_csv(std::ostream& os, const JumpRecord& jumps) {
  os << "time,size\n";
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    os << format_double(jumps.times()[i]) << ',' << format_double(jumps.sizes()[i]) << '\n';
  }
}

JumpRecord read_jumps_csv(std::istream& is, Interval window) {
  std::string line;
  std::vector<double> t, s;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.rfind("time", 0) == 0) continue;
    }
    const auto cells = split_csv_line(line);
    if (cells.size() != 2) throw ConfigError("jump CSV rows need two columns");
    t.push_back(parse_double(cells[0]));
    s.push_back(parse_double(cells[1]));
  }
  try {
    return JumpRecord(window, std::move(t), std::move(s));
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("invalid jump CSV: ") + e.what());
  }
}

void write_path_csv(std::ostream& os, const SamplePath& path) {
  os << "i,t,X\n";
  const double dn = static_cast<double>(path.n);
  for (std::size_t i = 0; i < path.values.size(); ++i) {
    os << i << ',' << format_double(static_cast<double>(i) / dn) << ','
       << format_double(path.values[i]) << '\n';
  }
}

json path_provenance_json(const SamplePath& path, const KernelSpec& kernel, const LevySpec& levy) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = path.n;
  j["past_window"] = path.past_window;
  j["kernel_id"] = path.provenance.kernel_id;
  j["kernel"] = kernel_to_json(kernel);
  j["levy"] = levy_to_json(levy);
  j["levy_hash"] = path.provenance.levy_hash;
  j["seed"] = path.provenance.seed;
  j["stream"] = path.provenance.stream;
  j["window"] = {path.provenance.window_a, path.provenance.window_b};
  j["jumps_used"] = path.provenance.jumps_used;
  return j;
}

std::vector<double> read_path_values(std::istream& is) {
  std::string line;
  std::vector<double> out;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.rfind("i,", 0) == 0) continue;
    }
    const auto cells = split_csv_line(line);
    if (cells.size() != 3) throw ConfigError("path CSV rows need three columns (i, t, X)");
    out.push_back(parse_double(cells[2]));
  }
  return out;
}

std::string report_csv_header() { return "kernel_id,levy_hash,seed,n,k,p,alpha,V,scaled_r1,scaled_r2"; }

std::string report_csv_row(const std::string& kernel_id, std::uint64_t levy_hash,
                           std::uint64_t seed, const PowerVariationReport& r) {
  std::ostringstream os;
  os << kernel_id << ',' << levy_hash << ',' << seed << ',' << r.n << ',' << r.k << ','
     << format_double(r.p) << ',' << format_double(r.alpha_used) << ',' << format_double(r.V)
     << ',' << format_double(r.scaled_r1) << ',' << format_double(r.scaled_r2);
  return os.str();
}

json limit_sample_to_json(const LimitSample& s) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["regime"] = regime_name(s.regime);
  j["value"] = s.value;
  j["R"] = s.R;
  j["tail_bound"] = s.tail_bound;
  j["etas"] = s.etas;
  if (s.u_draws) j["u_draws"] = *s.u_draws;
  if (!s.contributions.empty()) {
    json arr = json::array();
    for (const auto& c : s.contributions) {
      arr.push_back({{"jump_index", c.jump_index},
                     {"time", c.time},
                     {"size", c.size},
                     {"z", c.z},
                     {"shift", c.shift},
                     {"series", c.series},
                     {"contribution", c.contribution}});
    }
    j["contributions"] = arr;
  }
  return j;
}

json plan_to_json(const SubsequencePlan& plan) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["thetas"] = plan.thetas;
  j["etas"] = plan.etas;
  j["tolerance"] = plan.tolerance;
  j["terms"] = plan.terms;
  j["achieved"] = plan.achieved;
  j["residuals"] = plan.residuals;
  j["best_n"] = plan.best_n;
  j["best_residual"] = plan.best_residual;
  json rat = json::array();
  for (const auto& r : plan.rational) rat.push_back({{"index", r.index}, {"p", r.p}, {"q", r.q}});
  j["rational"] = rat;
  json reach = json::array();
  for (bool b : plan.reachable) reach.push_back(b);
  j["reachable"] = reach;
  return j;
}

}  // namespace levyma
