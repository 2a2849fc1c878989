#pragma once

#include "mfstokes/fespace.hpp"
#include "mfstokes/mesh.hpp"
#include "mfstokes/operator.hpp"
#include "mfstokes/smoother.hpp"

#include <Eigen/Dense>

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace mfstokes {

/// Continuous problem data shared by all levels.
struct ProblemData {
  int degree = 2;
  double mu = 1.0;
  double gamma_rho = 0.0;
  std::set<int> dirichlet_ids;
  bool pressure_mean_constrained = true;
  VectorFunction boundary_value;  ///< empty means homogeneous
  VectorFunction forcing;         ///< empty means zero
};

enum class CycleType { V = 1, W = 2 };

std::string to_string(CycleType cycle);
CycleType parse_cycle(const std::string& name);

struct MultigridSettings {
  int k_A = 1;
  int k_S = 1;
  int smoothing_steps = 2;
  DiagonalChoice diag = DiagonalChoice::loc;
  CycleType cycle = CycleType::W;
  EstimateOptions estimate;
};

/// Canonical injection between two nested levels and its transpose.
class Transfer {
 public:
  Transfer(std::shared_ptr<const DofMap> coarse, std::shared_ptr<const DofMap> fine);

  BlockVector prolongate(const BlockVector& coarse) const;
  BlockVector restrict(const BlockVector& fine) const;

 private:
  void apply(const BlockVector& in, BlockVector& out, bool transpose) const;

  std::shared_ptr<const DofMap> coarse_;
  std::shared_ptr<const DofMap> fine_;
  std::array<Matrix1d, 2> velocity_embedding_;
  std::array<Matrix1d, 2> pressure_embedding_;
  Vector velocity_weight_;
  Vector pressure_weight_;
  std::vector<int> child_index_;
};

/// Dense LU of the level-0 operator on its free dofs. With a constrained
/// pressure mean the constant pressure mode is shifted by c e e^T and the
/// result is projected to zero mean.
class CoarseSolver {
 public:
  explicit CoarseSolver(std::shared_ptr<const StokesOperator> op);
  BlockVector solve(const BlockVector& r) const;
  int size() const { return static_cast<int>(free_.size()); }

 private:
  std::shared_ptr<const StokesOperator> op_;
  std::vector<int> free_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

enum class SolveStatus { converged, max_iter, diverged };
std::string to_string(SolveStatus status);

struct SolveResult {
  BlockVector x;
  std::vector<double> residuals;
  std::vector<double> iteration_seconds;
  SolveStatus status = SolveStatus::max_iter;
  int iterations() const { return static_cast<int>(residuals.size()) - 1; }
};

struct Level {
  std::shared_ptr<const LevelMesh> mesh;
  std::shared_ptr<const DofMap> dofs;
  std::shared_ptr<const StokesOperator> op;
  std::shared_ptr<const UzawaSmoother> smoother;  ///< null on level 0
};

/// Levels 0..L with operators, smoothers, transfers and the coarse solver.
class Hierarchy {
 public:
  Hierarchy(const std::vector<LevelMesh>& meshes, ProblemData problem,
            MultigridSettings settings);

  int finest() const { return static_cast<int>(levels_.size()) - 1; }
  const Level& level(int l) const { return levels_.at(l); }
  const Transfer& transfer(int l) const { return transfers_.at(l - 1); }
  const CoarseSolver& coarse() const { return *coarse_; }
  const ProblemData& problem() const { return problem_; }
  const MultigridSettings& settings() const { return settings_; }

  BlockVector prolongate(int l, const BlockVector& coarse) const;
  BlockVector restrict(int l, const BlockVector& fine) const;
  BlockVector coarse_solve(const BlockVector& r) const;

  /// One cycle on level l: smoothing, restriction, cycle-index recursive
  /// calls, prolongation, correction, smoothing.
  void cycle(int l, BlockVector& x, const BlockVector& b) const;

  /// Finest-level Dirichlet interpolant (zero elsewhere).
  BlockVector dirichlet_lift() const;
  /// Homogenized right-hand side (f, 0) - K x_D with constrained rows zero.
  BlockVector system_rhs() const;

  /// Iterates cycles from x = 0 on the homogenized system K x = b.
  SolveResult solve(const BlockVector& b, double tol = 1e-10, int max_iter = 15) const;

  /// Calls of cycle() per level since the last reset.
  const std::vector<long>& visits() const { return visits_; }
  void reset_visits() const;

 private:
  ProblemData problem_;
  MultigridSettings settings_;
  std::vector<Level> levels_;
  std::vector<Transfer> transfers_;
  std::unique_ptr<CoarseSolver> coarse_;
  mutable std::vector<long> visits_;
};

}  // namespace mfstokes
