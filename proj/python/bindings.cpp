#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "minclique/cli.hpp"
#include "minclique/clique_bounds.hpp"
#include "minclique/errors.hpp"
#include "minclique/montecarlo.hpp"
#include "minclique/solver.hpp"
#include "minclique/subgraph_tools.hpp"

namespace py = pybind11;
using namespace minclique;

namespace {

// Saturates to inf or 0 outside the double range; log_lambda keeps the magnitude.
py::float_ slr(const SignedLogReal& x) { return py::float_(x.to_real()); }

py::dict bound_dict(const BoundReport& r) {
  py::dict d;
  d["w"] = r.w;
  d["z"] = r.z;
  d["log_p"] = r.log_p;
  d["lambda"] = slr(r.lambda);
  d["log_lambda"] = r.lambda.is_zero() ? -INFINITY : r.lambda.log_abs();
  d["b1"] = slr(r.b1);
  d["b2"] = slr(r.b2);
  d["lower_raw"] = r.lower_raw;
  d["upper_raw"] = r.upper_raw;
  d["lower"] = r.lower;
  d["upper"] = r.upper;
  d["simplified_bound"] = r.simplified_bound ? py::object(py::float_(*r.simplified_bound)) : py::none();
  d["closed_form"] = r.flags.closed_form_w_le_1;
  d["thm2_hypothesis"] = r.flags.thm2_hypothesis;
  d["quadrature"] = r.flags.quadrature_used;
  d["valid"] = r.flags.valid;
  d["note"] = r.note;
  return d;
}

CliqueInstance instance(std::int64_t n, int k, const std::string& dist) {
  CliqueInstance inst{n, k, WeightModel::parse(dist)};
  inst.validate();
  return inst;
}

WeightMatrix matrix_from(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw DomainError("weights must be a square matrix");
  const int n = static_cast<int>(a.shape(0));
  auto v = a.unchecked<2>();
  WeightMatrix wm(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) wm.set(i, j, v(i, j));
  return wm;
}

py::dict solve_dict(const SolveResult& r) {
  py::dict d;
  d["weight"] = r.weight;
  d["vertices"] = r.vertices;
  d["edges"] = r.edges;
  d["nodes_explored"] = r.nodes_explored;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bounds, exact solver and simulation for the minimum-weight clique in a weighted complete graph";

  auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ValidityError>(m, "ValidityError", PyExc_ValueError);
  py::register_exception<GuardError>(m, "GuardError", PyExc_RuntimeError);
  py::register_exception<QuadratureError>(m, "QuadratureError", PyExc_ArithmeticError);
  py::register_exception<GraphParseError>(m, "GraphParseError", domain.ptr());

  m.def(
      "cdf_bounds",
      [](std::int64_t n, int k, double w, const std::string& dist, int digits) {
        PrecisionConfig pc;
        pc.working_digits = digits;
        return bound_dict(cdf_bounds(instance(n, k, dist), w, pc));
      },
      py::arg("n"), py::arg("k"), py::arg("w"), py::arg("dist") = "uniform", py::arg("digits") = 50,
      "Lower/upper bounds on P(W < w) for the minimum-weight k-clique in K_n.");

  m.def(
      "cdf_curve",
      [](std::int64_t n, int k, const std::vector<double>& grid, const std::string& dist) {
        py::list out;
        for (const auto& r : cdf_curve(instance(n, k, dist), grid)) out.append(bound_dict(r));
        return out;
      },
      py::arg("n"), py::arg("k"), py::arg("grid"), py::arg("dist") = "uniform");

  m.def(
      "scaled_weight",
      [](std::int64_t n, int k, double w) { return scaled_weight(instance(n, k, "uniform"), w); }, py::arg("n"),
      py::arg("k"), py::arg("w"));
  m.def(
      "weight_from_scaled",
      [](std::int64_t n, int k, double z) { return weight_from_scaled(instance(n, k, "uniform"), z); }, py::arg("n"),
      py::arg("k"), py::arg("z"));

  m.def(
      "table_stats",
      [](std::int64_t n, int k) {
        const auto r = table_stats(instance(n, k, "uniform"));
        py::dict d;
        d["k"] = r.k;
        d["n"] = r.n;
        d["col_005"] = r.col_005;
        d["mu_hat"] = r.mu_hat;
        d["lb_at_mu"] = r.lb_at_mu;
        d["ub_at_mu"] = r.ub_at_mu;
        d["col_095"] = r.col_095 ? py::object(py::float_(*r.col_095)) : py::none();
        d["max_gap"] = r.max_gap;
        d["lower_peak"] = r.lower_peak;
        return d;
      },
      py::arg("n"), py::arg("k"));

  m.def(
      "significance_test",
      [](std::int64_t n, int k, double observed, const std::string& tail, double alpha) {
        const auto r = significance_test(instance(n, k, "uniform"), observed, parse_tail(tail), alpha);
        py::dict d;
        d["verdict"] = to_string(r.verdict);
        d["cdf_lower"] = r.cdf_lower;
        d["cdf_upper"] = r.cdf_upper;
        d["p_value_lower"] = r.p_value_lower;
        d["p_value_upper"] = r.p_value_upper;
        d["explanation"] = r.explanation;
        return d;
      },
      py::arg("n"), py::arg("k"), py::arg("observed"), py::arg("tail") = "lower", py::arg("alpha") = 0.05);

  py::class_<GraphSpec>(m, "Graph")
      .def(py::init([](const std::string& text) { return parse_graph(text); }), py::arg("text"),
           "Preset (K4, C5, P3) or edge list \"0 1 1 2\".")
      .def_property_readonly("v", &GraphSpec::v)
      .def_property_readonly("m", &GraphSpec::m)
      .def_property_readonly("edges", &GraphSpec::edges)
      .def_property_readonly("name", &GraphSpec::name)
      .def_property_readonly("automorphisms", &GraphSpec::automorphisms)
      .def_property_readonly("strictly_balanced", &GraphSpec::strictly_balanced)
      .def_property_readonly("density", [](const GraphSpec& g) { return g.density().to_string(); })
      .def_property_readonly("d_prime",
                             [](const GraphSpec& g) -> py::object {
                               if (!g.d_prime()) return py::none();
                               return py::str(g.d_prime()->to_string());
                             })
      .def("asymptotic_mean", [](const GraphSpec& g, std::int64_t n) { return asymptotic_mean(g, n); }, py::arg("n"))
      .def(
          "asymptotic_cdf", [](const GraphSpec& g, std::int64_t n, double z) { return asymptotic_cdf(g, n, z).cdf; },
          py::arg("n"), py::arg("z"))
      .def(
          "bounds",
          [](const GraphSpec& g, std::int64_t n, double w, const std::string& dist) {
            return bound_dict(general_bounds(g, n, w, WeightModel::parse(dist)));
          },
          py::arg("n"), py::arg("w"), py::arg("dist") = "uniform")
      .def("census",
           [](const GraphSpec& g) {
             py::list out;
             for (const auto& c : overlap_census(g)) {
               py::dict d;
               d["ell"] = c.ell;
               d["a"] = c.a;
               d["b"] = c.b1_unique;
               d["polynomial"] = c.count_poly.to_string();
               out.append(d);
             }
             return out;
           })
      .def("__repr__", [](const GraphSpec& g) {
        return "Graph(" + (g.name().empty() ? std::string("v=") + std::to_string(g.v()) : g.name()) + ")";
      });

  m.def(
      "min_weight_clique",
      [](py::array_t<double> w, int k) { return solve_dict(min_weight_clique(matrix_from(w), k)); },
      py::arg("weights"), py::arg("k"), "Exact minimum-weight k-clique of a symmetric weight matrix.");
  m.def(
      "min_weight_subgraph",
      [](py::array_t<double> w, const GraphSpec& g) { return solve_dict(min_weight_subgraph(matrix_from(w), g)); },
      py::arg("weights"), py::arg("graph"));

  m.def(
      "sample_weights",
      [](int n, const std::string& dist, std::uint64_t seed, std::uint64_t trial) {
        const auto wm = sample_matrix(n, WeightModel::parse(dist), seed, trial);
        py::array_t<double> out({n, n});
        auto v = out.mutable_unchecked<2>();
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) v(i, j) = i == j ? 0.0 : wm(i, j);
        return out;
      },
      py::arg("n"), py::arg("dist") = "uniform", py::arg("seed") = 1, py::arg("trial") = 0,
      "The weight matrix of one simulation trial (zero diagonal).");

  m.def(
      "simulate",
      [](int n, int k, std::size_t trials, std::uint64_t seed, const std::string& dist) {
        EmpiricalCdf emp;
        {
          py::gil_scoped_release release;
          emp = run_trials(n, Target::clique(k), WeightModel::parse(dist), trials, seed);
        }
        return py::array_t<double>(static_cast<py::ssize_t>(emp.trials()), emp.samples().data());
      },
      py::arg("n"), py::arg("k"), py::arg("trials"), py::arg("seed") = 1, py::arg("dist") = "uniform",
      "Sorted minimum clique weights of independent trials.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
