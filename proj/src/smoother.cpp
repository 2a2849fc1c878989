#include "mfstokes/smoother.hpp"

#include "mfstokes/verify.hpp"

#include <cmath>
#include <random>

namespace mfstokes {

double chebyshev_polynomial(int j, double s) {
  if (j == 0) return 1.0;
  double prev = 1.0;
  double cur = s;
  for (int i = 1; i < j; ++i) {
    const double next = 2.0 * s * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double chebyshev_scale(int k, double sbar) {
  const double c = chebyshev_polynomial(k + 1, sbar);
  return c / (1.0 + c);
}

double chebyshev_upper_constant(int k, double sbar) {
  return 1.0 / (1.0 - 1.0 / chebyshev_polynomial(k + 1, sbar));
}

double eta0(int m) {
  if (m < 0) throw Error("eta0 needs m >= 0");
  const int l = (m + 1) / 2;
  // binom(m, l) / 2^m accumulated as a product to stay in range
  double v = 1.0;
  for (int i = 1; i <= l; ++i) v *= static_cast<double>(m - l + i) / i;
  return std::ldexp(v, -m);
}

double estimate_lambda_max(const LinearOperator& M, const Vector& D,
                           const EstimateOptions& options) {
  const Eigen::Index n = D.size();
  if (n == 0) return 0.0;
  if ((D.array() <= 0.0).any()) throw EstimationFailure("diagonal must be positive");
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = dist(rng);
  if (options.project) options.project(x);

  auto d_norm = [&](const Vector& v) { return std::sqrt(v.dot(D.cwiseProduct(v))); };
  double nrm = d_norm(x);
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw EstimationFailure("degenerate start vector");
  x /= nrm;

  Vector y(n);
  double lambda = 0.0;
  for (int it = 0; it < options.iterations; ++it) {
    M(x, y);
    lambda = x.dot(y);  // x has unit D-norm
    Vector z = y.cwiseQuotient(D);
    if (options.project) options.project(z);
    nrm = d_norm(z);
    if (!std::isfinite(nrm) || !std::isfinite(lambda))
      throw EstimationFailure("power iteration produced a non-finite iterate");
    if (nrm == 0.0) break;
    x = z / nrm;
  }
  return options.safety * lambda;
}

ChebyshevJacobi::ChebyshevJacobi(LinearOperator M, Vector D, int degree, double beta,
                                 double scale)
    : M_(std::move(M)), D_(std::move(D)), degree_(degree), beta_(beta), scale_(scale) {
  if (degree_ < 0) throw SetupError("Chebyshev degree must be non-negative");
  if ((D_.array() <= 0.0).any()) throw SetupError("Chebyshev-Jacobi needs a positive diagonal");
  if (!(beta_ > 0.0)) throw SetupError("Chebyshev-Jacobi needs a positive spectral bound");
  inv_D_ = D_.cwiseInverse();
}

void ChebyshevJacobi::apply(const Vector& r, Vector& out) const {
  const double alpha = 0.5 * beta_;
  const double theta = 0.5 * (beta_ + alpha);
  const double delta = 0.5 * (beta_ - alpha);
  const double sigma1 = theta / delta;

  Vector d = inv_D_.cwiseProduct(r) / theta;
  out = d;
  double rho = 1.0 / sigma1;
  Vector res(r.size()), mx(r.size());
  for (int i = 1; i <= degree_; ++i) {
    M_(out, mx);
    res = r - mx;
    const double rho_next = 1.0 / (2.0 * sigma1 - rho);
    d = (rho_next * rho) * d + (2.0 * rho_next / delta) * inv_D_.cwiseProduct(res);
    out += d;
    rho = rho_next;
  }
  out *= scale_;
}

Vector ChebyshevJacobi::apply(const Vector& r) const {
  Vector out;
  apply(r, out);
  return out;
}

std::string to_string(DiagonalChoice choice) {
  switch (choice) {
    case DiagonalChoice::exact: return "exact";
    case DiagonalChoice::d: return "d";
    case DiagonalChoice::p: return "p";
    case DiagonalChoice::loc: return "loc";
  }
  return "?";
}

DiagonalChoice parse_diagonal_choice(const std::string& name) {
  if (name == "exact") return DiagonalChoice::exact;
  if (name == "d") return DiagonalChoice::d;
  if (name == "p") return DiagonalChoice::p;
  if (name == "loc") return DiagonalChoice::loc;
  throw ParseError("unknown diagonal choice '" + name + "' (expected exact, d, p or loc)");
}

Vector exact_schur_diagonal(const StokesOperator& op,
                            const std::function<Vector(const Vector&)>& a_hat_inv,
                            int max_pressure_dofs) {
  const int m = op.dofs().n_pressure();
  if (m > max_pressure_dofs)
    throw GuardExceeded("exact Schur diagonal limited to " + std::to_string(max_pressure_dofs) +
                        " pressure dofs");
  Vector diag(m);
  Vector e = Vector::Zero(m);
  for (int i = 0; i < m; ++i) {
    e[i] = 1.0;
    const Vector bt = op.apply_Bt(e);
    diag[i] = bt.dot(a_hat_inv(bt));
    e[i] = 0.0;
  }
  return diag;
}

UzawaSmoother::UzawaSmoother(std::shared_ptr<const StokesOperator> op, int k_A, int k_S,
                             DiagonalChoice diag, const EstimateOptions& options)
    : op_(std::move(op)), k_A_(k_A), k_S_(k_S), diag_(diag) {
  const StokesOperator& K = *op_;
  const DofMap& dm = K.dofs();

  // velocity part
  Vector D_A = K.compute_diag_A();
  LinearOperator A = [op = op_](const Vector& in, Vector& out) { out = op->apply_A(in); };
  EstimateOptions a_opts = options;
  a_opts.project = [&dm](Vector& v) { dm.zero_constrained(v); };
  const double beta_A = estimate_lambda_max(A, D_A, a_opts);
  a_inv_ = std::make_shared<const ChebyshevJacobi>(A, std::move(D_A), k_A, beta_A,
                                                   chebyshev_scale(k_A));

  // Schur part
  Vector D_S;
  switch (diag) {
    case DiagonalChoice::exact:
      D_S = exact_schur_diagonal(K, [this](const Vector& r) { return apply_Ahat_inv(r); });
      break;
    case DiagonalChoice::d: D_S = diag_Sd(K); break;
    case DiagonalChoice::p: D_S = K.compute_diag_Mp(); break;
    case DiagonalChoice::loc: D_S = K.compute_schur_diag_local(); break;
  }
  if (!(D_S.array() > 0.0).all())
    throw SetupError("Schur diagonal approximation has a non-positive entry");
  LinearOperator S = [op = op_, a = a_inv_](const Vector& in, Vector& out) {
    out = op->apply_B(a->apply(op->apply_Bt(in)));
  };
  EstimateOptions s_opts = options;
  s_opts.project = nullptr;
  if (dm.pressure_mean_constrained()) {
    // remove the constant, which is D-orthogonal to the rest of the spectrum
    s_opts.project = [D = D_S](Vector& v) { v.array() -= v.dot(D) / D.sum(); };
  }
  const double beta_S = estimate_lambda_max(S, D_S, s_opts);
  s_inv_ = ChebyshevJacobi(S, std::move(D_S), k_S, beta_S, chebyshev_scale(k_S));
}

Vector UzawaSmoother::apply_Ahat_inv(const Vector& r) const { return a_inv_->apply(r); }

Vector UzawaSmoother::apply_Shat_inv(const Vector& r) const { return s_inv_.apply(r); }

Vector UzawaSmoother::apply_S_tilde(const Vector& p) const {
  return op_->apply_B(a_inv_->apply(op_->apply_Bt(p)));
}

BlockVector UzawaSmoother::apply_Khat_inv(const BlockVector& r) const {
  BlockVector out;
  const Vector du = a_inv_->apply(r.u);
  out.p = s_inv_.apply(op_->apply_B(du) - r.p);
  out.u = du - a_inv_->apply(op_->apply_Bt(out.p));
  return out;
}

void UzawaSmoother::step(BlockVector& x, const BlockVector& b) const {
  op_->dofs().check(x);
  BlockVector r = op_->apply_K(x);
  r = b - r;
  op_->dofs().zero_constrained(r.u);
  x += apply_Khat_inv(r);
}

std::shared_ptr<const UzawaSmoother> setup_uzawa(std::shared_ptr<const StokesOperator> op,
                                                 int k_A, int k_S, DiagonalChoice diag,
                                                 const EstimateOptions& options) {
  return std::make_shared<const UzawaSmoother>(std::move(op), k_A, k_S, diag, options);
}

}  // namespace mfstokes
