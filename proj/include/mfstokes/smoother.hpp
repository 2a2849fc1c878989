#pragma once

#include "mfstokes/operator.hpp"
#include "mfstokes/types.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

namespace mfstokes {

/// out = M in
using LinearOperator = std::function<void(const Vector& in, Vector& out)>;
/// In-place projection onto the subspace an estimate should see.
using Projection = std::function<void(Vector&)>;

/// First-kind Chebyshev polynomial C_j(s) by the three-term recurrence.
double chebyshev_polynomial(int j, double s);

/// c1 = C_{k+1}(sbar) / (1 + C_{k+1}(sbar)); scaling that guarantees the
/// preconditioner dominates the operator.
double chebyshev_scale(int k, double sbar = 3.0);

/// c2 = (1 - 1 / C_{k+1}(sbar))^{-1}
double chebyshev_upper_constant(int k, double sbar = 3.0);

/// eta0(m) = 2^{-m} binom(m, floor((m + 1) / 2))
double eta0(int m);

struct EstimateOptions {
  int iterations = 40;
  double safety = 1.05;
  std::uint64_t seed = 20240611;
  Projection project;
};

/// Power iteration on D^{-1} M with the D-norm Rayleigh quotient, multiplied
/// by the safety factor. Throws EstimationFailure on a non-finite iterate.
double estimate_lambda_max(const LinearOperator& M, const Vector& D,
                           const EstimateOptions& options = {});

/// scale * s_k(D^{-1} M) D^{-1} on the interval [beta / 2, beta].
class ChebyshevJacobi {
 public:
  ChebyshevJacobi() = default;
  ChebyshevJacobi(LinearOperator M, Vector D, int degree, double beta, double scale);

  int degree() const { return degree_; }
  const Vector& diagonal() const { return D_; }
  double alpha() const { return 0.5 * beta_; }
  double beta() const { return beta_; }
  double scale() const { return scale_; }

  void apply(const Vector& r, Vector& out) const;
  Vector apply(const Vector& r) const;

 private:
  LinearOperator M_;
  Vector D_;
  Vector inv_D_;
  int degree_ = 0;
  double beta_ = 1.0;
  double scale_ = 1.0;
};

enum class DiagonalChoice { exact, d, p, loc };

std::string to_string(DiagonalChoice choice);
/// Throws ParseError for anything other than exact, d, p, loc.
DiagonalChoice parse_diagonal_choice(const std::string& name);

/// Symmetric inexact Uzawa smoother with
///   Ahat^{-1} = sigma Cheb(A, diag(A), k_A),
///   Shat^{-1} = tau Cheb(Stilde, Dtilde, k_S),  Stilde = B Ahat^{-1} B^T.
class UzawaSmoother {
 public:
  UzawaSmoother(std::shared_ptr<const StokesOperator> op, int k_A, int k_S, DiagonalChoice diag,
                const EstimateOptions& options = {});

  const StokesOperator& op() const { return *op_; }
  int k_A() const { return k_A_; }
  int k_S() const { return k_S_; }
  DiagonalChoice diagonal_choice() const { return diag_; }
  double sigma() const { return a_inv_->scale(); }
  double tau() const { return s_inv_.scale(); }
  double beta_A() const { return a_inv_->beta(); }
  double beta_S() const { return s_inv_.beta(); }
  const Vector& diag_A() const { return a_inv_->diagonal(); }
  const Vector& diag_S() const { return s_inv_.diagonal(); }

  Vector apply_Ahat_inv(const Vector& r) const;
  Vector apply_Shat_inv(const Vector& r) const;
  /// B Ahat^{-1} B^T
  Vector apply_S_tilde(const Vector& p) const;
  /// Khat^{-1} r with Khat = [[Ahat, B^T], [B, B Ahat^{-1} B^T - Shat]].
  BlockVector apply_Khat_inv(const BlockVector& r) const;

  /// x <- x + Khat^{-1} (b - K x)
  void step(BlockVector& x, const BlockVector& b) const;

 private:
  std::shared_ptr<const StokesOperator> op_;
  int k_A_;
  int k_S_;
  DiagonalChoice diag_;
  std::shared_ptr<const ChebyshevJacobi> a_inv_;
  ChebyshevJacobi s_inv_;
};

/// Builds the smoother following the setup algorithm: velocity part first,
/// then the Schur part estimated with the already scaled Ahat^{-1}.
std::shared_ptr<const UzawaSmoother> setup_uzawa(std::shared_ptr<const StokesOperator> op,
                                                 int k_A, int k_S, DiagonalChoice diag,
                                                 const EstimateOptions& options = {});

/// diag(Stilde) by one application of Stilde per pressure dof. Throws
/// GuardExceeded above max_pressure_dofs.
Vector exact_schur_diagonal(const StokesOperator& op,
                            const std::function<Vector(const Vector&)>& a_hat_inv,
                            int max_pressure_dofs = 5000);

}  // namespace mfstokes
