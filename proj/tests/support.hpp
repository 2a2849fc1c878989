#pragma once

#include "mfstokes/benchmark.hpp"
#include "mfstokes/fespace.hpp"
#include "mfstokes/mesh.hpp"
#include "mfstokes/operator.hpp"

#include <memory>
#include <random>
#include <set>

namespace mfstokes::testing {

inline std::shared_ptr<const LevelMesh> share(LevelMesh mesh) {
  return std::make_shared<const LevelMesh>(std::move(mesh));
}

/// Level l of the uniformly refined unit square or cube, 2^l cells per side.
inline std::shared_ptr<const LevelMesh> unit_level(int dim, int level) {
  return share(make_unit_hypercube(dim, level).back());
}

inline std::set<int> all_walls(int dim) {
  std::set<int> ids;
  for (int f = 0; f < 2 * dim; ++f) ids.insert(f);
  return ids;
}

inline std::shared_ptr<const DofMap> cavity_dofs(int dim, int level, bool walls = true) {
  return build_dofmap(unit_level(dim, level), 2, walls ? all_walls(dim) : std::set<int>{}, walls);
}

/// Finest level operator of a named benchmark with its own problem data.
inline std::shared_ptr<const StokesOperator> benchmark_operator(const std::string& name,
                                                                int level, double dt = 1.0) {
  const BenchmarkProblem p = define_benchmark(name, dt);
  const auto meshes = benchmark_meshes(name, level);
  auto dofs = build_dofmap(share(meshes.back()), p.data.degree, p.data.dirichlet_ids,
                           p.data.pressure_mean_constrained);
  return std::make_shared<const StokesOperator>(dofs, p.data.mu, p.data.gamma_rho);
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

/// Random vector with zero constrained entries.
inline BlockVector random_block(std::mt19937_64& rng, const DofMap& dofs) {
  BlockVector x(random_vector(rng, dofs.n_velocity()), random_vector(rng, dofs.n_pressure()));
  dofs.zero_constrained(x.u);
  return x;
}

inline double rel_max_error(const Vector& a, const Vector& b) {
  const double scale = std::max(b.cwiseAbs().maxCoeff(), 1e-300);
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace mfstokes::testing
