#include "mfstokes/benchmark.hpp"
#include "mfstokes/vtk.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mfstokes;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "mfstokes_test_bench_cli";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

BenchmarkConfig small_cavity() {
  BenchmarkConfig c;
  c.benchmark = "cavity2d";
  c.levels = 2;
  c.k_A = 3;
  c.k_S = 3;
  c.steps = 3;
  return c;
}

}  // namespace

TEST_CASE("benchmark problem data") {
  CHECK(benchmark_names().size() == 5u);
  SUBCASE("laser forcing peaks at (0.75, 0.75)") {
    const BenchmarkProblem p = define_benchmark("laser");
    const Point f = p.data.forcing({0.75, 0.75, 0.0});
    CHECK(f[0] == 0.0);
    CHECK(f[1] == doctest::Approx(0.001).epsilon(1e-15));
    CHECK(p.data.forcing({0.25, 0.75, 0.0})[1] == doctest::Approx(0.001 * std::exp(-25.0)));
    CHECK(p.data.mu == doctest::Approx(0.0022));
    CHECK_FALSE(p.data.boundary_value);
  }
  SUBCASE("lid value wins at the top corners") {
    const BenchmarkProblem p = define_benchmark("cavity2d");
    CHECK(p.data.boundary_value({0.0, 1.0, 0.0})[0] == 1.0);
    CHECK(p.data.boundary_value({1.0, 1.0, 0.0})[0] == 1.0);
    CHECK(p.data.boundary_value({1.0, 0.5, 0.0})[0] == 0.0);
    const BenchmarkProblem p3 = define_benchmark("cavity3d");
    CHECK(p3.dim == 3);
    CHECK(p3.data.boundary_value({0.0, 0.0, 1.0})[0] == 1.0);
  }
  SUBCASE("channel inflow and open outflow") {
    const BenchmarkProblem p = define_benchmark("turek");
    CHECK(p.data.boundary_value({0.0, 0.205, 0.0})[0] == doctest::Approx(1.0));
    CHECK(p.data.boundary_value({0.0, 0.0, 0.0})[0] == 0.0);
    CHECK(p.data.dirichlet_ids.count(1) == 0);
    CHECK_FALSE(p.data.pressure_mean_constrained);
    CHECK(p.geometry.size() == 1u);
  }
  SUBCASE("time-dependent cavity") {
    CHECK(define_benchmark("cavity2d-dt", 0.01).data.gamma_rho == doctest::Approx(100.0));
    CHECK(define_benchmark("cavity2d").data.gamma_rho == 0.0);
    CHECK_THROWS_AS(define_benchmark("cavity2d-dt", 0.0), SetupError);
  }
  CHECK_THROWS_AS(define_benchmark("poiseuille"), UnknownBenchmark);
}

TEST_CASE("benchmark meshes") {
  CHECK(benchmark_meshes("cavity2d", 0).front().n_cells() == 4);
  CHECK(benchmark_meshes("cavity3d", 0).front().n_cells() == 8);
  CHECK(benchmark_meshes("cavity2d", 2).size() == 3u);
  CHECK(benchmark_meshes("turek", 1).back().n_cells() == 4 * benchmark_meshes("turek", 0).front().n_cells());
  CHECK_THROWS_AS(benchmark_meshes("cavity2d", -1), SetupError);
}

TEST_CASE("JSON configuration") {
  const BenchmarkConfig c = load_config(
      R"({"benchmark": "turek", "levels": 2, "ka": 2, "ks": 0, "steps": 4, "cycle": "V",
          "diag": "p", "dt": 0.5, "tol": 1e-8, "max_iter": 30, "out": "x.csv"})");
  CHECK(c.benchmark == "turek");
  CHECK(c.levels == 2);
  CHECK(c.k_A == 2);
  CHECK(c.k_S == 0);
  CHECK(c.steps == 4);
  CHECK(c.cycle == CycleType::V);
  CHECK(c.diag == DiagonalChoice::p);
  CHECK(c.dt == 0.5);
  CHECK(c.tol == 1e-8);
  CHECK(c.max_iter == 30);
  CHECK(c.out == "x.csv");
  const BenchmarkConfig partial = load_config(R"({"ks": 3})", small_cavity());
  CHECK(partial.k_S == 3);
  CHECK(partial.levels == 2);
  CHECK_THROWS_AS(load_config(R"({"smoother": 1})"), ParseError);
  CHECK_THROWS_AS(load_config("{levels: 2"), ParseError);
  CHECK_THROWS_AS(load_config("[1, 2]"), ParseError);
  CHECK_THROWS_AS(load_config(R"({"levels": "two"})"), ParseError);
  CHECK_THROWS_AS(load_config(R"({"cycle": "F"})"), ParseError);
  CHECK_THROWS_AS(load_config_file("/nonexistent/config.json"), ParseError);
}

TEST_CASE("run") {
  const fs::path dir = scratch_dir();
  BenchmarkConfig c = small_cavity();
  c.out = (dir / "run.csv").string();
  c.vtk = (dir / "run.vtk").string();
  fs::remove(c.out);
  const RunOutput a = run(c);
  CHECK(a.record.status == RunStatus::converged);
  CHECK(a.record.dofs == 659);
  CHECK(a.record.config.m == 3);
  CHECK(a.record.config.dt == 0.0);
  CHECK(a.record.t_iter > 0.0);
  CHECK(compute_q(a.record.residuals).value() < 0.6);

  SUBCASE("reproducible residual history") {
    BenchmarkConfig again = small_cavity();
    const RunOutput b = run(again);
    CHECK(b.record.residuals == a.record.residuals);
  }
  SUBCASE("CSV row") {
    const std::string csv = slurp(c.out);
    CHECK(csv.rfind("benchmark,levels,dofs,", 0) == 0);
    CHECK(csv.find("cavity2d,2,659,3,3,3,W,loc,0,") != std::string::npos);
    CHECK(csv.find(",converged\n") != std::string::npos);
  }
  SUBCASE("VTK file") {
    const std::string vtk = slurp(c.vtk);
    // 8 x 8 cells, 17 x 17 velocity nodes, each cell split into 4 bilinear pieces
    CHECK(vtk.find("POINTS 289 double") != std::string::npos);
    CHECK(vtk.find("CELLS 256 1280") != std::string::npos);
    CHECK(vtk.find("CELL_TYPES 256") != std::string::npos);
    CHECK(vtk.find("POINT_DATA 289") != std::string::npos);
    // the lid moves with unit speed
    const DofMap& d = *a.hierarchy->level(2).dofs;
    const int ns = d.n_scalar_velocity();
    for (int i = 0; i < ns; ++i)
      if (d.velocity_node_points()[i][1] == 1.0) {
        CHECK(a.solution.u[i] == 1.0);
        CHECK(a.solution.u[ns + i] == 0.0);
      }
  }
}

TEST_CASE("sweep") {
  BenchmarkConfig c = small_cavity();
  c.levels = 1;
  SweepGrid one;
  one.k_A = {1};
  one.k_S = {2};
  one.steps = {2};
  const auto records = sweep(c, one);
  REQUIRE(records.size() == 1u);
  CHECK(records[0].config.k_A == 1);
  CHECK(records[0].config.k_S == 2);
  std::ostringstream heat;
  aggregate_heatmap(heat, records);
  CHECK(heat.str().rfind("m,1/2\n2,", 0) == 0);

  SweepGrid grid;
  grid.k_A = {0, 1};
  grid.k_S = {0};
  grid.steps = {1, 2};
  const auto serial = sweep(c, grid, 1);
  const auto parallel = sweep(c, grid, 2);
  REQUIRE(serial.size() == 4u);
  REQUIRE(parallel.size() == 4u);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].residuals == parallel[i].residuals);
    CHECK(parallel[i].t_iter == 0.0);
  }
}

#ifdef MFSTOKES_BENCH_EXE
TEST_CASE("command line tool") {
  const fs::path dir = scratch_dir();
  const std::string exe = MFSTOKES_BENCH_EXE;
  auto shell = [&](const std::string& args, const fs::path& log) {
    return std::system((exe + " " + args + " > " + log.string() + " 2>&1").c_str());
  };
  SUBCASE("config file with a flag override") {
    const fs::path cfg = dir / "cfg.json";
    std::ofstream(cfg) << R"({"benchmark": "cavity2d", "levels": 1, "ka": 0, "ks": 0, "steps": 2})";
    const fs::path log = dir / "run.log";
    CHECK(shell("run --config " + cfg.string() + " --ka 2 --max-iter 40", log) == 0);
    const std::string text = slurp(log);
    CHECK(text.find("status=converged") != std::string::npos);
    CHECK(text.find("k=(2,0)") != std::string::npos);
  }
  SUBCASE("sweep writes records and a heatmap") {
    const fs::path out = dir / "sweep.csv";
    const fs::path heat = dir / "heat.csv";
    fs::remove(out);
    CHECK(shell("sweep --benchmark cavity2d --levels 1 --ka-list 0,1 --ks-list 1 --steps-list 2 "
                "--out " + out.string() + " --heatmap " + heat.string(),
                dir / "sweep.log") == 0);
    const std::string records = slurp(out);
    CHECK(std::count(records.begin(), records.end(), '\n') == 3);
    CHECK(slurp(heat).rfind("m,0/1,1/1\n2,", 0) == 0);
  }
  SUBCASE("one heatmap per cycle type") {
    const fs::path heat = dir / "cycles.csv";
    for (const char* suffix : {"_V", "_W"}) fs::remove(dir / ("cycles" + std::string(suffix) + ".csv"));
    CHECK(shell("sweep --benchmark cavity2d --levels 1 --ka-list 1 --ks-list 1 --steps-list 2 "
                "--cycle-list V,W --heatmap " + heat.string(),
                dir / "cycles.log") == 0);
    CHECK(slurp(dir / "cycles_V.csv").rfind("m,1/1\n2,", 0) == 0);
    CHECK(slurp(dir / "cycles_W.csv").rfind("m,1/1\n2,", 0) == 0);
    CHECK(slurp(dir / "cycles.log").find("V-cycle dofs=187") != std::string::npos);
  }
  SUBCASE("errors exit with a nonzero status") {
    CHECK(shell("run --benchmark nowhere", dir / "bad.log") != 0);
    CHECK(slurp(dir / "bad.log").find("unknown benchmark") != std::string::npos);
    CHECK(shell("run --levels two", dir / "bad2.log") != 0);
    CHECK(shell("verify nothing --levels 1", dir / "bad3.log") != 0);
  }
}
#endif
