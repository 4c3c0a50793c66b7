#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "degen/config.hpp"
#include "degen/dsl.hpp"
#include "degen/mesh.hpp"
#include "degen/opspace.hpp"
#include "degen/runner.hpp"

namespace py = pybind11;
using namespace degen;

namespace {

// Same contract as the command-line tool: exit code plus the report the run
// would have written, both derived only from (config, seed).
std::pair<int, std::string> run_json(const std::string& subcommand,
                                     const std::string& config_json,
                                     const std::string& out_dir, int threads) {
  RunConfig cfg;
  try {
    Json doc = Json::parse(config_json, nullptr, true);
    cfg = parse_config(doc, subcommand);
  } catch (const std::exception& e) {
    // config never reached execute(); report the failure in the same shape
    Json err{{"type", "validation"}, {"message", e.what()}};
    return {2, Json{{"error", err}}.dump(2)};
  }
  if (!out_dir.empty()) {
    cfg.out_dir = out_dir;
    cfg.echo["out"] = out_dir;
  }
  RunOutcome out = execute(cfg, threads);
  return {out.exit_code, out.report.dump(2)};
}

double interp_norm_py(const std::vector<double>& u,
                      const std::vector<double>& d, double theta, double q,
                      const std::string& method) {
  InterpMethod m;
  if (method == "closed")
    m = InterpMethod::Closed;
  else if (method == "k")
    m = InterpMethod::KFunctional;
  else
    throw ValidationError("interp method must be 'closed' or 'k'");
  return interp_norm(std::span<const double>(u), OperatorSpec::diagonal(d),
                     theta, q, m);
}

double eval_expr(const std::string& source,
                 const std::map<std::string, double>& vars) {
  std::vector<std::string_view> names;
  names.reserve(vars.size());
  for (const auto& [k, v] : vars) names.push_back(k);
  dsl::Expression e = dsl::parse(source, names);
  return e.evaluate(vars);
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "solver core for singular elliptic problems on rectangles";

  py::register_exception<ValidationError>(mod, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<DslError>(mod, "DslError", PyExc_ValueError);
  py::register_exception<SolveError>(mod, "SolveError", PyExc_RuntimeError);

  mod.def("run_json", &run_json, py::arg("subcommand"), py::arg("config_json"),
          py::arg("out_dir") = "", py::arg("threads") = 1,
          "Run one subcommand from a JSON config string; returns "
          "(exit_code, report_json).  Artifacts land in out_dir (or the "
          "config's own 'out').");
  mod.def("sigma_trace", &sigma_trace, py::arg("i"), py::arg("exponent"),
          py::arg("p"),
          "Trace exponent of the i-th graded derivative at the solid end.");
  mod.def("theta_from_exponent", &theta_from_exponent, py::arg("exponent"),
          py::arg("p"), "Interpolation index attached to the grading.");
  mod.def("default_depth", &default_depth, py::arg("delta"),
          "Truncation depth that bounds the tail at 1e-10 for decay rate "
          "sqrt(delta).");
  mod.def("interp_norm", &interp_norm_py, py::arg("u"), py::arg("d"),
          py::arg("theta"), py::arg("q"), py::arg("method") = "closed",
          "Interpolation-space norm of u for the diagonal operator d; "
          "method is 'closed' or 'k'.");
  mod.def("eval_expr", &eval_expr, py::arg("source"), py::arg("vars"),
          "Evaluate a coefficient-law expression with the given bindings.");
}
