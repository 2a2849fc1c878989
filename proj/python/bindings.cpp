#include "mfstokes/benchmark.hpp"
#include "mfstokes/smoother.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace mfstokes;

namespace {

std::shared_ptr<const StokesOperator> make_operator(const std::string& name, int level, double dt) {
  const BenchmarkProblem p = define_benchmark(name, dt);
  const auto meshes = benchmark_meshes(name, level);
  const auto dofs = build_dofmap(std::make_shared<const LevelMesh>(meshes.back()), p.data.degree,
                                 p.data.dirichlet_ids, p.data.pressure_mean_constrained);
  return std::make_shared<const StokesOperator>(dofs, p.data.mu, p.data.gamma_rho);
}

py::dict record_dict(const RunRecord& r) {
  py::dict d;
  d["benchmark"] = r.config.benchmark;
  d["levels"] = r.config.levels;
  d["k_A"] = r.config.k_A;
  d["k_S"] = r.config.k_S;
  d["m"] = r.config.m;
  d["cycle"] = r.config.cycle;
  d["diag"] = r.config.diag;
  d["dofs"] = r.dofs;
  d["residuals"] = r.residuals;
  d["q"] = compute_q(r.residuals);
  d["t_iter"] = r.t_iter;
  d["status"] = to_string(r.status);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Matrix-free multigrid for Taylor-Hood Stokes systems";

  py::register_exception<Error>(m, "Error");

  m.def("chebyshev_polynomial", &chebyshev_polynomial, py::arg("j"), py::arg("s"));
  m.def("chebyshev_scale", &chebyshev_scale, py::arg("k"), py::arg("sbar") = 3.0);
  m.def("eta0", &eta0, py::arg("m"));
  m.def("compute_q", &compute_q, py::arg("residuals"));
  m.def("compute_T", &compute_T, py::arg("q"), py::arg("t_iter"), py::arg("eps") = 0.1);
  m.def("benchmark_names", &benchmark_names);

  py::enum_<CycleType>(m, "CycleType").value("V", CycleType::V).value("W", CycleType::W);
  py::enum_<DiagonalChoice>(m, "DiagonalChoice")
      .value("exact", DiagonalChoice::exact)
      .value("d", DiagonalChoice::d)
      .value("p", DiagonalChoice::p)
      .value("loc", DiagonalChoice::loc);

  py::class_<BenchmarkConfig>(m, "BenchmarkConfig")
      .def(py::init<>())
      .def_readwrite("benchmark", &BenchmarkConfig::benchmark)
      .def_readwrite("levels", &BenchmarkConfig::levels)
      .def_readwrite("k_A", &BenchmarkConfig::k_A)
      .def_readwrite("k_S", &BenchmarkConfig::k_S)
      .def_readwrite("steps", &BenchmarkConfig::steps)
      .def_readwrite("cycle", &BenchmarkConfig::cycle)
      .def_readwrite("diag", &BenchmarkConfig::diag)
      .def_readwrite("dt", &BenchmarkConfig::dt)
      .def_readwrite("tol", &BenchmarkConfig::tol)
      .def_readwrite("max_iter", &BenchmarkConfig::max_iter)
      .def_readwrite("out", &BenchmarkConfig::out)
      .def_readwrite("vtk", &BenchmarkConfig::vtk);

  m.def("load_config", [](const std::string& text) { return load_config(text); }, py::arg("json"));
  m.def(
      "run",
      [](const BenchmarkConfig& c) {
        RunRecord r;
        {
          py::gil_scoped_release release;
          r = run(c).record;
        }
        return record_dict(r);
      },
      py::arg("config"));
  m.def(
      "sweep",
      [](const BenchmarkConfig& c, std::vector<int> k_A, std::vector<int> k_S,
         std::vector<int> steps) {
        std::vector<RunRecord> records;
        {
          py::gil_scoped_release release;
          records = sweep(c, SweepGrid{k_A, k_S, steps});
        }
        py::list out;
        for (const auto& r : records) out.append(record_dict(r));
        return out;
      },
      py::arg("config"), py::arg("k_A") = std::vector<int>{0, 1, 2, 3},
      py::arg("k_S") = std::vector<int>{0, 1, 2, 3}, py::arg("steps") = std::vector<int>{1, 2, 3, 4});

  py::class_<StokesOperator, std::shared_ptr<StokesOperator>>(m, "StokesOperator")
      .def_property_readonly("n_velocity", [](const StokesOperator& op) { return op.dofs().n_velocity(); })
      .def_property_readonly("n_pressure", [](const StokesOperator& op) { return op.dofs().n_pressure(); })
      .def_property_readonly("constrained_dofs",
                             [](const StokesOperator& op) { return op.dofs().constrained_dofs(); })
      .def("apply_K",
           [](const StokesOperator& op, const Vector& u, const Vector& p) {
             const BlockVector y = op.apply_K(BlockVector(u, p));
             return py::make_tuple(y.u, y.p);
           })
      .def("apply_A", &StokesOperator::apply_A)
      .def("apply_B", &StokesOperator::apply_B)
      .def("apply_Bt", &StokesOperator::apply_Bt)
      .def("apply_Mp", &StokesOperator::apply_Mp)
      .def("diag_A", &StokesOperator::compute_diag_A);

  m.def(
      "benchmark_operator",
      [](const std::string& name, int level, double dt) {
        return std::const_pointer_cast<StokesOperator>(make_operator(name, level, dt));
      },
      py::arg("name"), py::arg("level"), py::arg("dt") = 1.0);
}
