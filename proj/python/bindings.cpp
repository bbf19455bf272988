#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "../tools/cli.hpp"
#include "finsler/acceptance.hpp"
#include "finsler/connection.hpp"
#include "finsler/corpus.hpp"
#include "finsler/curvature.hpp"
#include "finsler/error.hpp"

namespace py = pybind11;
using namespace finsler;

namespace {

std::vector<std::vector<double>> rows(const Matrix& m) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(m.dim()));
  for (int i = 0; i < m.dim(); ++i) {
    for (int j = 0; j < m.dim(); ++j) out[static_cast<std::size_t>(i)].push_back(m(i, j));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_finsler, m) {
  m.doc() = "Numerical Finsler geometry";

  py::register_exception<finsler::Error>(m, "FinslerError", PyExc_RuntimeError);

  py::class_<FinslerStructure>(m, "Structure")
      .def_property_readonly("dim", &FinslerStructure::dim)
      .def_property_readonly("label", &FinslerStructure::label)
      .def("F", [](const FinslerStructure& F, const Vector& x, const Vector& y) { return F.F(x, y); })
      .def("fundamental_tensor",
           [](const FinslerStructure& F, const Vector& x, const Vector& y) { return rows(fundamental_tensor(F, {x, y})); })
      .def("spray", [](const FinslerStructure& F, const Vector& x, const Vector& y) { return spray(F, {x, y}); })
      .def("flag_curvature", [](const FinslerStructure& F, const Vector& x, const Vector& y, const Vector& X) {
        return flag_curvature(F, {x, y}, X);
      });

  m.def("builtins", [] {
    std::vector<std::string> names;
    for (const auto& e : list_builtins()) names.push_back(e.name);
    return names;
  });
  m.def("builtin_spec", [](const std::string& name) { return builtin(name).spec.dump(); });
  m.def("builtin", [](const std::string& name) { return instantiate(builtin(name).spec); });
  m.def("instantiate", [](const std::string& spec_json) { return instantiate(Json::parse(spec_json)); });

  m.def(
      "constancy_scan",
      [](const FinslerStructure& F, int samples, std::uint64_t seed) {
        const ScanReport s = constancy_scan(F, samples, seed);
        py::dict d;
        d["mean"] = s.mean;
        d["std"] = s.std;
        d["min"] = s.min;
        d["max"] = s.max;
        std::vector<double> values;
        for (const auto& f : s.samples) values.push_back(f.K);
        d["values"] = values;
        return d;
      },
      py::arg("F"), py::arg("samples") = 200, py::arg("seed") = 0);

  m.def(
      "acceptance",
      [](std::vector<int> criteria, std::uint64_t seed) {
        AcceptanceOptions opt;
        opt.seed = seed;
        opt.criteria = {criteria.begin(), criteria.end()};
        std::vector<py::dict> out;
        for (const auto& r : run_acceptance(opt)) {
          py::dict d;
          d["id"] = r.id;
          d["name"] = r.name;
          d["pass"] = r.pass;
          d["measured"] = r.measured;
          d["line"] = format_result(r);
          out.push_back(d);
        }
        return out;
      },
      py::arg("criteria") = std::vector<int>{}, py::arg("seed") = 0);

  m.def("cli", [](const std::vector<std::string>& args) { return cli::run(args); });
}
