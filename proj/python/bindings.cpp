// Python access to the job runner and a few numeric checks.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "joycehkt/cli.hpp"
#include "joycehkt/connections.hpp"

namespace py = pybind11;
using namespace joycehkt;

namespace {

cli::JobConfig parse_or_raise(const std::string& text) {
  auto parsed = cli::parse_config_text(text);
  if (!parsed.config) {
    std::string msg;
    for (const auto& e : parsed.errors) msg += (msg.empty() ? "" : "\n") + e;
    throw InvalidInput(msg);
  }
  return *parsed.config;
}

std::vector<double> einstein(const std::string& text) {
  const auto job = cli::build_job(parse_or_raise(text));
  return einstein_coefficients(*job.coset).coeffs;
}

py::dict residuals(const std::string& text, std::vector<double> coeffs) {
  const auto job = cli::build_job(parse_or_raise(text));
  const auto& cs = *job.coset;
  const auto g = coeffs.empty() ? job.metric : layer_metric(cs, coeffs);
  py::dict d;
  d["hkt"] = hkt_residual(cs, g, job.h).relative;
  d["hyperhermitian"] = hyperhermitian_residual(g, job.h);
  d["strong"] = strong_residual(cs, g, job.h).relative;
  if (!coeffs.empty()) d["btp"] = btp_predicate(cs, coeffs);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Invariant HKT structures on compact Lie groups and cosets";
  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);

  m.attr("__version__") = cli::kToolVersion;
  m.def("presets", [] {
    std::vector<std::string> names;
    for (const auto& p : cli::catalog()) names.push_back(p.name);
    return names;
  });
  m.def(
      "verify",
      [](const std::string& config_json) {
        const auto out = cli::run(parse_or_raise(config_json));
        return py::make_tuple(out.report.dump(), out.exit_code);
      },
      py::arg("config_json"), "Runs a job; returns (report JSON text, exit code).");
  m.def(
      "decompose", [](const std::string& config_json) { return cli::decompose_report(parse_or_raise(config_json)).dump(); },
      py::arg("config_json"));
  m.def("einstein_coefficients", &einstein, py::arg("config_json"));
  m.def("residuals", &residuals, py::arg("config_json"), py::arg("coeffs") = std::vector<double>{},
        "HKT, hyperhermitian and strong residuals for the job metric, or for the layer metric with the given coefficients.");
}
