#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "levyma/config.hpp"
#include "levyma/errors.hpp"
#include "levyma/harness.hpp"
#include "levyma/kernels.hpp"
#include "levyma/levy.hpp"
#include "levyma/limits.hpp"
#include "levyma/rng.hpp"
#include "levyma/serialization.hpp"
#include "levyma/simulate.hpp"
#include "levyma/stats.hpp"
#include "levyma/subseq.hpp"

namespace py = pybind11;
using namespace levyma;

namespace {

KernelSpec kernel_of(const std::string& doc) { return kernel_from_json(json::parse(doc)); }
LevySpec levy_of(const std::string& doc) { return levy_from_json(json::parse(doc)); }

std::string table_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (const auto* v = std::get_if<std::int64_t>(&row[i])) {
        out += std::to_string(*v);
      } else if (const auto* d = std::get_if<double>(&row[i])) {
        out += format_double(*d);
      } else {
        out += std::get<std::string>(row[i]);
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Core routines of levyma; specs are passed as JSON strings.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);

  py::class_<JumpRecord>(m, "JumpRecord")
      .def(py::init([](std::pair<double, double> w, std::vector<double> t, std::vector<double> s) {
             return JumpRecord({w.first, w.second}, std::move(t), std::move(s));
           }),
           py::arg("window"), py::arg("times"), py::arg("sizes"))
      .def_property_readonly("times", &JumpRecord::times)
      .def_property_readonly("sizes", &JumpRecord::sizes)
      .def_property_readonly("window",
                             [](const JumpRecord& r) { return std::make_pair(r.window().a, r.window().b); })
      .def("__len__", &JumpRecord::size);

  m.def("eval_g", [](const std::string& k, double t) { return eval_g(kernel_of(k), t); });
  m.def("filter_weights", &filter_weights);
  m.def("eval_h0", &eval_h0);
  m.def("eval_hz", &eval_hz);
  m.def("q_const", &q_const);
  m.def("min_alpha_set", [](const std::string& k) {
    const auto a = min_alpha_set(kernel_of(k));
    return std::make_pair(a.alpha_min, a.indices);
  });

  m.def("simulate_jumps",
        [](const std::string& levy, std::pair<double, double> w, std::uint64_t stream) {
          return simulate_jumps(levy_of(levy), {w.first, w.second}, stream);
        },
        py::arg("levy"), py::arg("window"), py::arg("stream") = 0);
  m.def("bg_index", [](const std::string& l) { return bg_index(levy_of(l)); });
  m.def("power_sum", [](const JumpRecord& j, double p, std::pair<double, double> iv) {
    return power_sum(j, p, {iv.first, iv.second});
  });
  m.def("check_omega_eps", &check_omega_eps);

  m.def("simulate_path",
        [](const std::string& k, const JumpRecord& j, std::int64_t n, std::optional<double> T) {
          return simulate_path(kernel_of(k), j, n, T).values;
        },
        py::arg("kernel"), py::arg("jumps"), py::arg("n"), py::arg("past_window") = py::none());

  m.def("increments", py::overload_cast<const std::vector<double>&, int>(&increments));
  m.def("power_variation",
        [](const std::vector<double>& values, double p, int k, double alpha) {
          const auto r = power_variation(values, p, k, alpha);
          py::dict d;
          d["n"] = r.n;
          d["k"] = r.k;
          d["p"] = r.p;
          d["alpha"] = r.alpha_used;
          d["V"] = r.V;
          d["scaled_r1"] = r.scaled_r1;
          d["scaled_r2"] = r.scaled_r2;
          return d;
        },
        py::arg("values"), py::arg("p"), py::arg("k"), py::arg("alpha") = 0.0);

  m.def("series_Vmz",
        [](int k, double alpha, bool one_sided, double p, double shift, std::optional<std::int64_t> R) {
          const auto v = series_Vmz(k, alpha, one_sided, p, shift, R);
          return py::make_tuple(v.value, v.tail_bound, v.R);
        },
        py::arg("k"), py::arg("alpha"), py::arg("one_sided"), py::arg("p"), py::arg("shift"),
        py::arg("R") = py::none());
  m.def("limit_regime1",
        [](const std::string& k, const JumpRecord& j, const std::vector<double>& etas, double p,
           int kk, std::uint64_t seed, std::uint64_t stream) {
          auto u = make_stream(seed, stream, StreamDomain::limit_uniforms);
          return limit_regime1(kernel_of(k), j, etas, p, kk, u).value;
        },
        py::arg("kernel"), py::arg("jumps"), py::arg("etas"), py::arg("p"), py::arg("k"),
        py::arg("seed") = 0, py::arg("stream") = 0);
  m.def("limit_regime1_coupled", [](const std::string& k, const JumpRecord& j, std::int64_t n,
                                    double p, int kk) {
    return limit_regime1_coupled(kernel_of(k), j, n, p, kk).value;
  });
  m.def("limit_regime2", [](const std::string& k, const JumpRecord& j, double p, int kk) {
    return limit_regime2(kernel_of(k), j, p, kk).value;
  });
  m.def("limit_toy", &limit_toy);

  m.def("frac", &frac);
  m.def("find_subsequence",
        [](const std::vector<double>& thetas, const std::vector<double>& etas, double tol,
           std::int64_t n_min, std::int64_t n_max, std::size_t max_terms) {
          return plan_to_json(find_subsequence(thetas, etas, tol, n_min, n_max, max_terms)).dump();
        });
  m.def("shift_law_check",
        [](double theta, const std::vector<std::int64_t>& n_terms, std::int64_t draws,
           std::uint64_t seed) {
          return shift_law_check(sample_beta22, theta, n_terms, draws, seed);
        });
  m.def("ks_distance", &ks_distance);

  m.def("run_experiment", [](const std::string& config) {
    const auto res = run_experiment(experiment_from_json(json::parse(config)));
    return py::make_tuple(table_csv(res.rows), table_csv(res.summary), res.meta.dump());
  });
}
