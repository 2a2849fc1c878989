#include "mfstokes/benchmark.hpp"

#include "mfstokes/vtk.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace mfstokes {

const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names{"laser", "cavity2d", "cavity3d", "turek",
                                              "cavity2d-dt"};
  return names;
}

BenchmarkProblem define_benchmark(const std::string& name, double dt) {
  BenchmarkProblem p;
  p.name = name;
  ProblemData& d = p.data;
  d.degree = 2;
  if (name == "laser") {
    p.dim = 2;
    d.mu = 0.0022;
    d.dirichlet_ids = {0, 1, 2, 3};
    d.forcing = [](const Point& x) {
      const double dx = x[0] - 0.75;
      const double dy = x[1] - 0.75;
      return Point{0.0, 0.001 * std::exp(-100.0 * (dx * dx + dy * dy)), 0.0};
    };
  } else if (name == "cavity2d" || name == "cavity2d-dt") {
    p.dim = 2;
    d.mu = 1.0;
    d.dirichlet_ids = {0, 1, 2, 3};
    // the lid value wins on the closed top edge, corners included
    d.boundary_value = [](const Point& x) {
      return x[1] > 1.0 - 1e-12 ? Point{1.0, 0.0, 0.0} : Point{0.0, 0.0, 0.0};
    };
    if (name == "cavity2d-dt") {
      if (!(dt > 0.0)) throw SetupError("time step must be positive");
      d.gamma_rho = 1.0 / dt;
    }
  } else if (name == "cavity3d") {
    p.dim = 3;
    d.mu = 1.0;
    d.dirichlet_ids = {0, 1, 2, 3, 4, 5};
    d.boundary_value = [](const Point& x) {
      return x[2] > 1.0 - 1e-12 ? Point{1.0, 0.0, 0.0} : Point{0.0, 0.0, 0.0};
    };
  } else if (name == "turek") {
    p.dim = 2;
    d.mu = 1.0;
    d.dirichlet_ids = {0, 2, 3};
    d.pressure_mean_constrained = false;
    d.boundary_value = [](const Point& x) {
      if (x[0] > 1e-12) return Point{0.0, 0.0, 0.0};
      const double h = 0.41;
      return Point{4.0 * x[1] * (h - x[1]) / (h * h), 0.0, 0.0};
    };
    p.geometry.push_back(channel_cylinder_geometry());
  } else {
    throw UnknownBenchmark("unknown benchmark '" + name + "'");
  }
  return p;
}

std::vector<LevelMesh> benchmark_meshes(const std::string& name, int levels) {
  if (levels < 0) throw SetupError("levels must be non-negative");
  const BenchmarkProblem p = define_benchmark(name);
  std::vector<LevelMesh> meshes;
  if (name == "turek") {
    meshes.push_back(make_channel_with_cylinder());
    for (int l = 0; l < levels; ++l) refine_hierarchy(meshes, p.geometry);
    return meshes;
  }
  // drop the single-cell level: its Q2-Q1 system is singular
  auto full = make_unit_hypercube(p.dim, levels + 1);
  meshes.assign(std::make_move_iterator(full.begin() + 1), std::make_move_iterator(full.end()));
  meshes.front().parent_of.clear();
  for (auto& m : meshes) --m.level;
  return meshes;
}

namespace {

template <class T>
void read_key(const nlohmann::json& j, const char* key, T& value) {
  if (j.contains(key)) value = j.at(key).get<T>();
}

}  // namespace

BenchmarkConfig load_config(const std::string& text, BenchmarkConfig c) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON config: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("JSON config must be an object");
  static const std::vector<std::string> known{"benchmark", "levels", "ka",       "ks",
                                              "steps",     "cycle",  "diag",     "dt",
                                              "tol",       "max_iter", "out",    "vtk"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ParseError("unknown config key '" + key + "'");
  try {
    read_key(j, "benchmark", c.benchmark);
    read_key(j, "levels", c.levels);
    read_key(j, "ka", c.k_A);
    read_key(j, "ks", c.k_S);
    read_key(j, "steps", c.steps);
    read_key(j, "dt", c.dt);
    read_key(j, "tol", c.tol);
    read_key(j, "max_iter", c.max_iter);
    read_key(j, "out", c.out);
    read_key(j, "vtk", c.vtk);
    if (j.contains("cycle")) c.cycle = parse_cycle(j.at("cycle").get<std::string>());
    if (j.contains("diag")) c.diag = parse_diagonal_choice(j.at("diag").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad value in JSON config: ") + e.what());
  }
  return c;
}

BenchmarkConfig load_config_file(const std::string& path, BenchmarkConfig defaults) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read config file '" + path + "'");
  std::stringstream s;
  s << in.rdbuf();
  return load_config(s.str(), std::move(defaults));
}

RunConfigSummary summarize(const BenchmarkConfig& c) {
  RunConfigSummary s;
  s.benchmark = c.benchmark;
  s.levels = c.levels;
  s.k_A = c.k_A;
  s.k_S = c.k_S;
  s.m = c.steps;
  s.cycle = to_string(c.cycle);
  s.diag = to_string(c.diag);
  s.dt = c.benchmark == "cavity2d-dt" ? c.dt : 0.0;
  return s;
}

namespace {

RunStatus to_run_status(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return RunStatus::converged;
    case SolveStatus::max_iter: return RunStatus::max_iter;
    case SolveStatus::diverged: return RunStatus::diverged;
  }
  return RunStatus::max_iter;
}

}  // namespace

RunOutput run(const BenchmarkConfig& c) {
  const BenchmarkProblem problem = define_benchmark(c.benchmark, c.dt);
  MultigridSettings settings;
  settings.k_A = c.k_A;
  settings.k_S = c.k_S;
  settings.smoothing_steps = c.steps;
  settings.cycle = c.cycle;
  settings.diag = c.diag;
  auto hierarchy =
      std::make_shared<const Hierarchy>(benchmark_meshes(c.benchmark, c.levels), problem.data, settings);

  RunOutput out;
  out.hierarchy = hierarchy;
  const BlockVector b = hierarchy->system_rhs();
  out.solve = hierarchy->solve(b, c.tol, c.max_iter);
  out.solution = out.solve.x + hierarchy->dirichlet_lift();

  RunRecord& r = out.record;
  r.config = summarize(c);
  r.dofs = hierarchy->level(hierarchy->finest()).dofs->n_total();
  r.residuals = out.solve.residuals;
  r.t_iter = median(out.solve.iteration_seconds);
  r.status = classify(r.residuals, to_run_status(out.solve.status));

  if (!c.out.empty()) {
    const bool fresh = !std::filesystem::exists(c.out) || std::filesystem::file_size(c.out) == 0;
    std::ofstream f(c.out, std::ios::app);
    if (!f) throw Error("cannot open '" + c.out + "' for writing");
    if (fresh) write_record_header(f);
    write_record(f, r);
  }
  if (!c.vtk.empty()) write_fields(c.vtk, *hierarchy->level(hierarchy->finest()).dofs, out.solution);
  return out;
}

std::vector<RunRecord> sweep(const BenchmarkConfig& base, const SweepGrid& grid, int jobs) {
  std::vector<BenchmarkConfig> configs;
  for (int m : grid.steps)
    for (int ka : grid.k_A)
      for (int ks : grid.k_S) {
        BenchmarkConfig c = base;
        c.k_A = ka;
        c.k_S = ks;
        c.steps = m;
        c.out.clear();
        c.vtk.clear();
        configs.push_back(c);
      }
  std::vector<RunRecord> records(configs.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < configs.size(); ++i) records[i] = run(configs[i]).record;
    return records;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
          records[i] = run(configs[i]).record;
          records[i].t_iter = 0.0;
        }
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return records;
}

}  // namespace mfstokes
