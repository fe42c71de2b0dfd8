#include "catch_amalgamated.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "levyma/config.hpp"
#include "levyma/errors.hpp"
#include "levyma/serialization.hpp"
#include "levyma/toml.hpp"
#include "support.hpp"

using namespace levyma;

namespace {

std::string config_path(const std::string& name) { return std::string(LEVYMA_CONFIG_DIR) + "/" + name; }

}  // namespace

TEST_CASE("TOML subset", "[config]") {
  const auto j = parse_toml(R"(
# comment
title = "x"   # trailing comment
n = -12
big = 1_000
x = 2.5e-3
flag = true
lit = 'C:\path'
esc = "a\tb\"c"
arr = [1, 2,
       3]
mixed = [0.5, 1]
inline = { a = 1, b = "two" }
dotted.key = 4

[table]
v = 1.0

[table.sub]
w = false

[[items]]
id = 1

[[items]]
id = 2
)");
  CHECK(j["title"] == "x");
  CHECK(j["n"] == -12);
  CHECK(j["n"].is_number_integer());
  CHECK(j["big"] == 1000);
  CHECK(j["x"].get<double>() == 2.5e-3);
  CHECK(j["flag"] == true);
  CHECK(j["lit"] == "C:\\path");
  CHECK(j["esc"] == "a\tb\"c");
  CHECK(j["arr"] == nlohmann::json::array({1, 2, 3}));
  CHECK(j["mixed"][0].get<double>() == 0.5);
  CHECK(j["inline"]["b"] == "two");
  CHECK(j["dotted"]["key"] == 4);
  CHECK(j["table"]["v"].get<double>() == 1.0);
  CHECK(j["table"]["sub"]["w"] == false);
  REQUIRE(j["items"].size() == 2);
  CHECK(j["items"][1]["id"] == 2);

  CHECK_THROWS_AS(parse_toml("a = "), ConfigError);
  CHECK_THROWS_AS(parse_toml("a = 1\na = 2"), ConfigError);
  CHECK_THROWS_AS(parse_toml("a = [1, 2"), ConfigError);
  CHECK_THROWS_AS(parse_toml("[t\nx = 1"), ConfigError);
  CHECK_THROWS_AS(parse_toml("s = \"open"), ConfigError);
  try {
    parse_toml("a = 1\nb = ?");
    FAIL("no throw");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("shipped configs load and validate", "[config]") {
  for (const char* name : {"toy.toml", "r1_coupled.toml", "r2.json", "distribution.toml",
                           "cutoff_stability.toml", "shift_law.toml"}) {
    INFO(name);
    auto cfg = load_experiment(config_path(name));
    CHECK_NOTHROW(validate_experiment(cfg));
    CHECK_FALSE(cfg.grid_sizes.empty());
  }
  auto coupled = load_experiment(config_path("r1_coupled.toml"));
  REQUIRE(coupled.subsequence);
  CHECK(coupled.kernel.singularities.size() == 2);
  CHECK(coupled.subsequence->anchors == std::vector<std::int64_t>{1024, 4096, 16384});
  validate_experiment(coupled);
  // Anchors resolve to the first qualifying n at or above them.
  for (std::size_t i = 0; i < coupled.grid_sizes.size(); ++i) {
    const auto n = coupled.grid_sizes[i];
    CHECK(n >= coupled.subsequence->anchors[i]);
    CHECK(circle_distance(frac(n * coupled.kernel.singularities[1].theta), 0.25) <= 1e-2);
  }
  CHECK(load_experiment(config_path("toy.toml")).levy.seed == 101);
}

TEST_CASE("TOML and JSON forms of a config agree", "[config]") {
  const auto a = experiment_from_json(load_document(config_path("r2.json")));
  const auto b = experiment_from_json(experiment_to_json(a));
  CHECK(experiment_to_json(a) == experiment_to_json(b));

  const auto t = load_experiment(config_path("distribution.toml"));
  CHECK(experiment_to_json(experiment_from_json(experiment_to_json(t))) == experiment_to_json(t));
  CHECK(t.regime == ExperimentRegime::distribution);
  CHECK(t.control_offsets == std::vector<double>{0.1});
}

TEST_CASE("config errors", "[config]") {
  auto base = experiment_to_json(load_experiment(config_path("toy.toml")));
  auto j = base;
  j["replicatoins"] = 3;
  CHECK_THROWS_AS(experiment_from_json(j), ConfigError);
  j = base;
  j["k"] = "one";
  CHECK_THROWS_AS(experiment_from_json(j), ConfigError);
  j = base;
  j.erase("kernel");
  CHECK_THROWS_AS(experiment_from_json(j), ConfigError);
  j = base;
  j["regime"] = "r3";
  CHECK_THROWS_AS(experiment_from_json(j), ConfigError);
  j = base;
  j["subsequence"] = {{"etas", {0.1}}, {"anchors", {8}}, {"extra", 1}};
  CHECK_THROWS_AS(experiment_from_json(j), ConfigError);
  j = base;
  j["kernel"] = {{"builtin", "lfsm"}};
  CHECK_THROWS_AS(experiment_from_json(j), ConfigError);
  j = base;
  j["levy"]["rate"] = -1.0;
  CHECK_THROWS_AS(experiment_from_json(j), ConfigError);
  CHECK_THROWS_AS(experiment_from_json(nlohmann::json::array()), ConfigError);
  CHECK_THROWS_AS(load_document(config_path("no_such_file.toml")), std::runtime_error);
}

TEST_CASE("kernel and driver documents round-trip", "[config]") {
  std::vector<KernelSpec> kernels = {indicator_kernel(), lfsm_kernel(0.35, -2.0),
                                     multising_kernel({{0.0, 0.3, 1.0}, {0.4, 1.2, -0.5}}, G0Mode::equal_to_g, 1.5)};
  kernels[2].k_max = 2;
  kernels[2].delta = 0.05;
  for (const auto& k : kernels) {
    const auto back = kernel_from_json(kernel_to_json(k));
    CHECK(back.id() == k.id());
    CHECK(kernel_to_json(back) == kernel_to_json(k));
    for (double t : {-0.5, 0.0, 0.1, 0.399, 0.75, 3.0}) CHECK(eval_g(back, t) == eval_g(k, t));
  }
  const auto lf = kernel_from_json(nlohmann::json{{"builtin", "lfsm"}, {"alpha", 0.2}, {"w", 1.5}});
  CHECK(lf.w == 1.5);
  CHECK(lf.singularities[0].alpha == 0.2);

  std::vector<LevySpec> drivers = {testgen::gaussian_cp(2.5, 9), testgen::stable(1.3, 0.05, 11)};
  LevySpec two;
  two.kind = CompoundPoisson{1.0, TwoPointLaw{0.5}};
  drivers.push_back(two);
  LevySpec par;
  par.kind = CompoundPoisson{1.0, ParetoLaw{0.5, 3.0}};
  drivers.push_back(par);
  auto nested = testgen::stable(1.2, 0.1, 3);
  std::get<SymStable>(nested.kind).proposal_cutoff = 0.025;
  drivers.push_back(nested);
  for (const auto& l : drivers) {
    const auto back = levy_from_json(levy_to_json(l));
    CHECK(back.canonical() == l.canonical());
    CHECK(back.hash() == l.hash());
  }
  CHECK_THROWS_AS(levy_from_json(nlohmann::json{{"kind", "brownian"}}), ConfigError);
}

TEST_CASE("jump CSV round-trips bit for bit", "[config][property]") {
  testgen::Gen g(71);
  for (int s = 0; s < 50; ++s) {
    const auto r = g.record({-3.0, 1.0}, 40);
    std::stringstream ss;
    write_jumps_csv(ss, r);
    const auto back = read_jumps_csv(ss, r.window());
    CHECK(back.times() == r.times());
    CHECK(back.sizes() == r.sizes());
  }
  std::stringstream bad("time,size\n0.5,1.0\n0.2,1.0\n");
  CHECK_THROWS_AS(read_jumps_csv(bad, {0.0, 1.0}), ConfigError);
  std::stringstream short_row("time,size\n0.5\n");
  CHECK_THROWS_AS(read_jumps_csv(short_row, {0.0, 1.0}), ConfigError);
}

TEST_CASE("number formatting", "[config]") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(-1e-300) == "-1e-300");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(std::nan("")) == "nan");
  testgen::Gen g(72);
  for (int s = 0; s < 1000; ++s) {
    const double x = std::ldexp(g.uniform(-1.0, 1.0), g.integer(-60, 60));
    CHECK(std::stod(format_double(x)) == x);
  }
}
