#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "szego/hardy.hpp"
#include "szego/kernels.hpp"
#include "szego/lab.hpp"
#include "szego/reduction.hpp"

namespace py = pybind11;
using namespace szego;

namespace {

ModelSpace space(const std::vector<int>& weights, const std::string& metric) {
  return make_sphere(WeightVector(weights), parse_metric_convention(metric));
}

SpherePoint point(const std::vector<cplx>& z) { return SpherePoint::normalized(z); }

py::dict fit_dict(const FitResult& r) {
  py::dict d;
  d["b0_hat"] = r.b0_hat;
  d["b0_model"] = r.b0_model;
  d["kappa_hat"] = r.kappa_hat;
  d["order_hat"] = r.order_hat;
  d["residual"] = r.residual;
  d["multiplicity"] = r.multiplicity;
  d["corrections"] = r.corrections;
  return d;
}

}  // namespace

PYBIND11_MODULE(_szego, m) {
  m.doc() = "Bergman-Szego kernels on weighted spheres";

  // Later registrations are tried first, so subclasses map to their own types.
  auto& base = py::register_exception<Error>(m, "SzegoError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());

  m.def("dim_fourier", [](const std::vector<int>& w, long k) { return dim_fourier(WeightVector(w), k); },
        py::arg("weights"), py::arg("k"));
  m.def("dim_table", [](const std::vector<int>& w, long k_max) { return dim_table(WeightVector(w), k_max); },
        py::arg("weights"), py::arg("k_max"));
  m.def("monomials", [](const std::vector<int>& w, long k) { return enumerate_monomials(WeightVector(w), k); },
        py::arg("weights"), py::arg("k"));

  m.def(
      "stratification",
      [](const std::vector<int>& w) {
        const auto s = stratification(make_sphere(WeightVector(w)));
        py::dict d;
        d["ell_values"] = s.ell_values;
        d["ell0"] = s.ell0;
        d["p"] = s.p;
        return d;
      },
      py::arg("weights"));

  m.def(
      "levi",
      [](const std::vector<int>& w, const std::vector<cplx>& z, const std::string& metric) {
        const auto L = levi_data(space(w, metric), point(z));
        py::dict d;
        d["f"] = L.f;
        d["det_levi"] = L.det_levi;
        d["vol_density"] = L.vol_density;
        return d;
      },
      py::arg("weights"), py::arg("z"), py::arg("metric") = "sphere_measure");

  m.def(
      "kernel",
      [](const std::vector<int>& w, long k, const std::vector<cplx>& x, const std::vector<cplx>& y) {
        return szego_eval(build_basis(WeightVector(w), k), point(x), point(y)).value;
      },
      py::arg("weights"), py::arg("k"), py::arg("x"), py::arg("y"));

  m.def(
      "fit_diagonal",
      [](const std::vector<int>& w, const std::vector<cplx>& x, const std::vector<long>& ks,
         const std::string& metric) {
        const auto X = space(w, metric);
        const auto p = point(x);
        return fit_dict(fit_leading(diagonal_series(X, p, ks), levi_data(X, p), X.n()));
      },
      py::arg("weights"), py::arg("x"), py::arg("ks"), py::arg("metric") = "sphere_measure");

  m.def(
      "calibrate",
      [](int n, const std::string& metric) {
        return calibrate(make_sphere(WeightVector(std::vector<int>(n + 1, 1)), parse_metric_convention(metric))).kappa;
      },
      py::arg("n") = 1, py::arg("metric") = "sphere_measure");

  m.def(
      "invariant_dim",
      [](const std::vector<int>& w, const std::vector<int>& b, long k) {
        return invariant_dim(WeightVector(w), b, k);
      },
      py::arg("weights"), py::arg("b"), py::arg("k"));

  m.def(
      "reduced_weights",
      [](const std::vector<int>& w, const std::vector<int>& b) {
        const auto pair = find_reduction(WeightVector(w), b);
        const auto r = pair.reduced.values();
        return std::vector<int>(r.begin(), r.end());
      },
      py::arg("weights"), py::arg("b"));

  m.def("commands", &lab::commands);
  m.def(
      "run",
      [](const std::string& command, const std::vector<std::string>& args) {
        // Accepts the CLI's long flags as "--name value" pairs or bare "--quick".
        lab::RunConfig c;
        c.command = command;
        for (std::size_t i = 0; i < args.size(); ++i) {
          const auto& a = args[i];
          if (a == "--quick") {
            c.quick = true;
            continue;
          }
          if (i + 1 >= args.size()) throw ConfigError("missing value for " + a);
          const auto& v = args[++i];
          if (a == "--weights") c.weights = v;
          else if (a == "--k-max") c.k_max = std::stol(v);
          else if (a == "--k-list") c.k_list = lab::parse_k_list(v);
          else if (a == "--samples") c.samples = std::stoul(v);
          else if (a == "--seed") c.seed = std::stoull(v);
          else if (a == "--tol") c.tol = std::stod(v);
          else if (a == "--n") c.n = std::stoi(v);
          else if (a == "--m") c.m = std::stoi(v);
          else if (a == "--action") c.action = v;
          else if (a == "--b") c.b = v;
          else if (a == "--metric") c.metric = v;
          else if (a == "--quadrature") c.quadrature = v;
          else throw ConfigError("unknown option " + a);
        }
        const auto rep = lab::run(c);
        return py::make_tuple(rep.json_text(), lab::exit_code(rep));
      },
      py::arg("command"), py::arg("args") = std::vector<std::string>{},
      "Runs a lab command and returns (json_text, exit_code).");
}
