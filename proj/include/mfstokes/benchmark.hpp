#pragma once

#include "mfstokes/mesh.hpp"
#include "mfstokes/metrics.hpp"
#include "mfstokes/multigrid.hpp"

#include <memory>
#include <string>
#include <vector>

namespace mfstokes {

/// Problem data of one named benchmark.
struct BenchmarkProblem {
  std::string name;
  int dim = 2;
  ProblemData data;
  std::vector<GeometryDescriptor> geometry;
};

/// laser, cavity2d, cavity3d, turek, cavity2d-dt (gamma_rho = 1 / dt).
/// Throws UnknownBenchmark.
BenchmarkProblem define_benchmark(const std::string& name, double dt = 1.0);

const std::vector<std::string>& benchmark_names();

/// Levels 0..L. Level 0 is the 2x2 (2x2x2) mesh of the unit square (cube)
/// or the shipped channel mesh; every further level refines uniformly.
std::vector<LevelMesh> benchmark_meshes(const std::string& name, int levels);

struct BenchmarkConfig {
  std::string benchmark = "cavity2d";
  int levels = 3;
  int k_A = 1;
  int k_S = 1;
  int steps = 2;
  CycleType cycle = CycleType::W;
  DiagonalChoice diag = DiagonalChoice::loc;
  double dt = 1.0;
  double tol = 1e-10;
  int max_iter = 15;
  std::string out;  ///< CSV path, empty for none
  std::string vtk;  ///< VTK path, empty for none
};

/// Reads a JSON object with any of the keys benchmark, levels, ka, ks, steps,
/// cycle, diag, dt, tol, max_iter, out, vtk on top of the given defaults.
BenchmarkConfig load_config(const std::string& json_text, BenchmarkConfig defaults = {});
BenchmarkConfig load_config_file(const std::string& path, BenchmarkConfig defaults = {});

RunConfigSummary summarize(const BenchmarkConfig& config);

struct RunOutput {
  RunRecord record;
  SolveResult solve;
  BlockVector solution;  ///< including the Dirichlet data
  std::shared_ptr<const Hierarchy> hierarchy;
};

/// Builds the hierarchy, solves from zero, and writes the optional CSV row
/// and VTK file. Non-convergence is a status, not an error.
RunOutput run(const BenchmarkConfig& config);

struct SweepGrid {
  std::vector<int> k_A{0, 1, 2, 3};
  std::vector<int> k_S{0, 1, 2, 3};
  std::vector<int> steps{1, 2, 3, 4};
};

/// Runs every grid point. With jobs > 1 the runs execute concurrently and
/// timing columns are dropped (t_iter = 0).
std::vector<RunRecord> sweep(const BenchmarkConfig& base, const SweepGrid& grid, int jobs = 1);

}  // namespace mfstokes
