#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "magnus/errors.hpp"
#include "magnus/evolution.hpp"
#include "magnus/hamiltonians.hpp"
#include "magnus/linalg.hpp"
#include "magnus/magnus_steps.hpp"
#include "magnus/verify.hpp"

namespace py = pybind11;
using namespace magnus;

namespace {

ComplexSquareMatrix to_matrix(const Eigen::MatrixXcd& a) { return ComplexSquareMatrix(a); }

std::vector<MethodId> to_methods(const std::vector<std::string>& names) {
  std::vector<MethodId> out;
  for (const std::string& n : names) {
    if (n == "all") {
      out.insert(out.end(), all_methods().begin(), all_methods().end());
    } else {
      out.push_back(parse_method(n));
    }
  }
  return out;
}

py::list report_to_list(const verify::Report& report) {
  py::list rows;
  for (const verify::IdentityCheck& c : report) {
    rows.append(py::make_tuple(c.name, c.max_rel_dev, c.tolerance, c.passed));
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(pymagnus, m) {
  m.doc() = "Unitary Magnus-expansion step propagators for time-dependent Hamiltonians";

  auto base = py::register_exception<Error>(m, "MagnusError");
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());

  m.def("methods", [] {
    std::vector<std::string> names;
    for (MethodId id : all_methods()) names.emplace_back(method_name(id));
    return names;
  }, "Method names in canonical order.");

  m.def("sample_nodes", [](const std::string& method) { return sample_nodes(parse_method(method)); },
        py::arg("method"));

  m.def("commutator", [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return commutator(to_matrix(a), to_matrix(b)).eigen();
  });
  m.def("expm_antihermitian", [](const Eigen::MatrixXcd& theta, double tol) {
    return expm_antihermitian(to_matrix(theta), tol).eigen();
  }, py::arg("theta"), py::arg("tol") = kDefaultExpmTolerance);
  m.def("relative_error", [](const Eigen::MatrixXcd& approx, const Eigen::MatrixXcd& ref) {
    return relative_error(to_matrix(approx), to_matrix(ref));
  });

  py::class_<HamiltonianModel>(m, "HamiltonianModel")
      .def_property_readonly("dim", &HamiltonianModel::dim)
      .def("sample", [](const HamiltonianModel& model, double t) { return model.sample(t).eigen(); },
           py::arg("t"))
      .def("to_json", [](const HamiltonianModel& model) { return to_json(model); })
      .def("__eq__", [](const HamiltonianModel& a, const HamiltonianModel& b) { return a == b; });

  m.def("builtin_case", [](const std::string& id) { return builtin_case(id); }, py::arg("case_id"));
  m.def("load_model", [](const std::string& text) { return load_model(text); }, py::arg("text"));

  m.def("exponent", [](const std::string& method, const std::map<double, Eigen::MatrixXcd>& samples,
                       double dt, double hbar) {
    SampleMap map;
    for (const auto& [node, h] : samples) map.emplace(node, to_matrix(h));
    return exponent(parse_method(method), map, dt, StepContext{hbar}).eigen();
  }, py::arg("method"), py::arg("samples"), py::arg("dt"), py::arg("hbar") = 1.0);

  m.def("step", [](const std::string& method, const HamiltonianModel& model, double t_k, double dt,
                   double hbar) {
    return step(parse_method(method), model.sampler(), t_k, dt, StepContext{hbar}).eigen();
  }, py::arg("method"), py::arg("model"), py::arg("t_k"), py::arg("dt"), py::arg("hbar") = 1.0);

  m.def("propagate", [](const std::string& method, const HamiltonianModel& model, double t0,
                        double tf, std::size_t n_steps, std::size_t initial, double hbar) {
    const EvolutionTrace trace = propagate(parse_method(method), model, t0, tf, n_steps,
                                           basis_state(model.dim(), initial), StepContext{hbar});
    Eigen::MatrixXd pops(static_cast<Eigen::Index>(trace.populations.size()),
                         static_cast<Eigen::Index>(model.dim()));
    for (std::size_t r = 0; r < trace.populations.size(); ++r) {
      for (std::size_t n = 0; n < model.dim(); ++n) {
        pops(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(n)) = trace.populations[r][n];
      }
    }
    py::dict out;
    out["times"] = trace.times;
    out["populations"] = pops;
    out["unitarity_defects"] = trace.unitarity_defects;
    out["propagator"] = trace.final_propagator.eigen();
    return out;
  }, py::arg("method"), py::arg("model"), py::arg("t0"), py::arg("tf"), py::arg("n_steps"),
     py::arg("initial") = 0, py::arg("hbar") = 1.0);

  m.def("convergence_study", [](const HamiltonianModel& model, const std::vector<std::string>& methods,
                                const std::vector<std::size_t>& steps, double t_final,
                                std::size_t ref_steps, bool cross_check) {
    ReferenceSpec ref;
    ref.n_steps = ref_steps;
    if (!cross_check) ref.cross_check.reset();
    const std::vector<MethodId> ids = to_methods(methods);
    const ConvergenceReport report =
        convergence_study(model.sampler(), ids, steps, 0.0, t_final, ref);
    py::list records;
    for (const ConvergenceRecord& r : report.records) {
      records.append(py::make_tuple(std::string(method_name(r.method)), r.dt, r.n_steps, r.error));
    }
    py::dict slopes;
    for (const auto& [id, s] : report.slopes) slopes[py::str(std::string(method_name(id)))] = s;
    py::dict out;
    out["records"] = records;
    out["slopes"] = slopes;
    out["reference_cross_deviation"] = report.reference_cross_deviation;
    return out;
  }, py::arg("model"), py::arg("methods"), py::arg("steps") = std::vector<std::size_t>{},
     py::arg("t_final") = 100.0, py::arg("ref_steps") = 0, py::arg("cross_check") = true);

  m.def("check_closed_forms", [](std::uint64_t seed, std::size_t dim, double dt, std::size_t draws) {
    verify::OracleConfig cfg;
    cfg.seed = seed;
    cfg.dim = dim;
    cfg.dt = dt;
    cfg.draws = draws;
    return report_to_list(verify::check_closed_forms(cfg));
  }, py::arg("seed") = 42, py::arg("dim") = 2, py::arg("dt") = 1.0, py::arg("draws") = 10);

  m.def("check_symmetry_suite", [](std::uint64_t seed, std::size_t dim, std::size_t draws) {
    verify::OracleConfig cfg;
    cfg.seed = seed;
    cfg.dim = dim;
    return report_to_list(verify::check_symmetry_suite(cfg, draws));
  }, py::arg("seed") = 42, py::arg("dim") = 3, py::arg("draws") = 20);
}
