#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "robgev/asymptotics.hpp"
#include "robgev/calculus.hpp"
#include "robgev/error.hpp"
#include "robgev/gev.hpp"
#include "robgev/ingest.hpp"
#include "robgev/mdpd.hpp"
#include "robgev/metrics.hpp"
#include "robgev/simlab.hpp"

namespace py = pybind11;
using namespace robgev;

namespace {

std::vector<double> as_vector(const py::iterable& data) {
  std::vector<double> out;
  for (auto item : data) out.push_back(py::cast<double>(item));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "GEV fitting by minimum density power divergence";

  py::register_exception<Error>(m, "RobgevError", PyExc_ValueError);

  py::class_<GevParams>(m, "GevParams")
      .def(py::init<double, double, double>(), py::arg("mu") = 0.0, py::arg("sigma") = 1.0,
           py::arg("xi") = 0.0)
      .def_property_readonly("mu", &GevParams::mu)
      .def_property_readonly("sigma", &GevParams::sigma)
      .def_property_readonly("xi", &GevParams::xi)
      .def("support", [](const GevParams& p) {
        const auto s = p.support();
        return py::make_tuple(s.lower, s.upper);
      })
      .def(py::self == py::self)
      .def("__repr__", [](const GevParams& p) {
        return "GevParams(mu=" + std::to_string(p.mu()) + ", sigma=" + std::to_string(p.sigma()) +
               ", xi=" + std::to_string(p.xi()) + ")";
      });

  m.def("pdf", &pdf, py::arg("x"), py::arg("params"));
  m.def("log_pdf", &log_pdf, py::arg("x"), py::arg("params"));
  m.def("cdf", &cdf, py::arg("x"), py::arg("params"));
  m.def("quantile", &quantile, py::arg("p"), py::arg("params"));
  m.def("sample", &sample, py::arg("n"), py::arg("params"), py::arg("seed"));

  m.def("score", [](double x, const GevParams& p) { return score(x, p).as_vector(); },
        py::arg("x"), py::arg("params"));
  m.def("information", [](double x, const GevParams& p) { return information(x, p).value; },
        py::arg("x"), py::arg("params"));

  py::class_<MdpdConfig>(m, "MdpdConfig")
      .def(py::init<>())
      .def_readwrite("alpha", &MdpdConfig::alpha)
      .def_readwrite("xi_lower_margin", &MdpdConfig::xi_lower_margin)
      .def_readwrite("max_iterations", &MdpdConfig::max_iterations)
      .def_readwrite("tolerance", &MdpdConfig::tolerance)
      .def_readwrite("restarts", &MdpdConfig::restarts);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("params", &FitResult::params)
      .def_readonly("alpha", &FitResult::alpha)
      .def_readonly("objective_value", &FitResult::objective_value)
      .def_readonly("converged", &FitResult::converged)
      .def_readonly("n_evaluations", &FitResult::n_evaluations)
      .def_readonly("covariance", &FitResult::covariance)
      .def_readonly("std_errors", &FitResult::std_errors)
      .def_readonly("messages", &FitResult::messages);

  m.def("mdpd_objective",
        [](const GevParams& p, const py::iterable& data, double alpha) {
          return mdpd_objective(p, as_vector(data), alpha);
        },
        py::arg("params"), py::arg("data"), py::arg("alpha"));
  m.def("fit",
        [](const py::iterable& data, double alpha, bool with_covariance) {
          MdpdConfig cfg;
          cfg.alpha = alpha;
          const auto x = as_vector(data);
          FitResult r = fit_mdpd(x, cfg);
          if (with_covariance) attach_covariance(r, x.size());
          return r;
        },
        py::arg("data"), py::arg("alpha") = 0.1, py::arg("with_covariance") = false,
        "Fit by MDPD (alpha > 0) or maximum likelihood (alpha = 0).");
  m.def("fit_mdpd", [](const py::iterable& data, const MdpdConfig& c) { return fit_mdpd(as_vector(data), c); },
        py::arg("data"), py::arg("config"));
  m.def("fit_ml", [](const py::iterable& data, const MdpdConfig& c) { return fit_ml(as_vector(data), c); },
        py::arg("data"), py::arg("config"));

  py::class_<SandwichCovariance>(m, "SandwichCovariance")
      .def_readonly("J", &SandwichCovariance::J)
      .def_readonly("K", &SandwichCovariance::K)
      .def_readonly("U", &SandwichCovariance::U)
      .def_readonly("cov", &SandwichCovariance::cov)
      .def_readonly("alpha", &SandwichCovariance::alpha)
      .def_readonly("params", &SandwichCovariance::params);
  m.def("compute_ujk", [](const GevParams& p, double alpha) { return compute_ujk(p, alpha); },
        py::arg("params"), py::arg("alpha"));
  m.def("influence",
        [](double x, const GevParams& p, double alpha) { return influence(x, p, alpha); },
        py::arg("x"), py::arg("params"), py::arg("alpha"));
  m.def("influence_at_level", &influence_at_level, py::arg("level"), py::arg("sandwich"));

  m.def("wasserstein1",
        [](const GevParams& a, const GevParams& b, const std::string& method) {
          W1Request req{a, b};
          req.method = method == "cdf" ? W1Method::CdfIntegral : W1Method::QuantileIntegral;
          return wasserstein1(req);
        },
        py::arg("first"), py::arg("second"), py::arg("method") = "quantile");

  m.def("load_series",
        [](const std::string& path, std::optional<std::string> column, std::optional<double> drop_below) {
          ParseOptions o;
          if (column) o.value_column = *column;
          o.drop_below = drop_below;
          const auto s = load_series(path, o);
          return py::make_tuple(s.station_id, s.values, s.years, s.diagnostics);
        },
        py::arg("path"), py::arg("column") = py::none(), py::arg("drop_below") = py::none());

  m.def("generate_sample",
        [](double epsilon, const GevParams& base, const GevParams& contaminant, std::size_t n,
           std::uint64_t seed, std::size_t replicate) {
          ContaminationScenario s;
          s.epsilon = epsilon;
          s.base = base;
          s.contaminant = contaminant;
          s.n = n;
          s.seed = seed;
          return generate_sample(s, replicate);
        },
        py::arg("epsilon"), py::arg("base"), py::arg("contaminant"), py::arg("n"), py::arg("seed"),
        py::arg("replicate") = 0);
}
