#pragma once

#include <map>
#include <mutex>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "octsr/forward.hpp"
#include "octsr/grids.hpp"
#include "octsr/idft.hpp"

namespace octsr {

struct AdmmConfig {
  double lambda = 0.0;       // l1 weight, interferogram units
  double rho = 1.0;          // augmented-Lagrangian penalty (on the normalized operator)
  double alpha = 1.6;        // over-relaxation factor in [1, 1.8]
  int max_iterations = 1000;
  double tol_primal = 1e-6;  // absolute residual tolerances
  double tol_dual = 1e-6;
  double tol_relative = 1e-4;
  SpatialGrid recon_grid;    // user-defined lattice; N >> M allowed
  bool nonnegative = false;
  bool adaptive_rho = false; // ratio-based x2 / /2 penalty updates
};

struct AdmmDiagnostics {
  int iterations_run = 0;
  std::vector<double> primal_residual_history;  // scaled-system residuals
  std::vector<double> dual_residual_history;
  std::vector<double> objective_history;  // lasso objective at the sparse iterate
  bool converged = false;
};

/// Elementwise sign(v) * max(|v| - kappa, 0): the proximal operator of
/// kappa * ||.||_1.
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double kappa);

// Solves  min_r 1/2 ||i - A r||_2^2 + lambda ||r||_1  with
// A = delta_z * diag(s) * C on the configured reconstruction lattice.
//
// The quadratic step solves the regularized normal equations exactly with a
// cached factorization: (A^T A + rho I) when N <= M, else the
// matrix-inversion identity against (rho I + A A^T) so only an M x M factor
// is formed in the N >> M regime.  Internally the operator is scaled to
// unit spectral norm and the data to unit peak.  The effective penalty is
// cfg.rho times the scaled l1 weight, quantized to powers of two so a small
// factor cache covers whole batches; penalties of this size keep the
// iteration fast across the full lambda range.
//
// A solver instance is logically immutable after construction (the factor
// cache is internally synchronized) and safe to share across concurrent
// per-A-line solves.
class AdmmSolver {
 public:
  AdmmSolver(const EmissionSpectrum& s, const AdmmConfig& cfg);

  ReconResult solve(const Interferogram& i, AdmmDiagnostics* diagnostics = nullptr) const;
  ReconResult solve(const Interferogram& i, double lambda,
                    AdmmDiagnostics* diagnostics = nullptr) const;

  /// ||A^T i||_inf: the smallest l1 weight with an all-zero solution.
  double lambda_max(const Interferogram& i) const;
  double operator_norm() const { return op_norm_; }
  const AdmmConfig& config() const { return cfg_; }

  // A x and A^T y in physical units (matrix-free).
  Eigen::VectorXd apply_forward(const Eigen::VectorXd& x) const;
  Eigen::VectorXd apply_adjoint(const Eigen::VectorXd& y) const;

 private:
  const Eigen::LLT<Eigen::MatrixXd>& factor_for(double rho) const;

  AdmmConfig cfg_;
  WavenumberGrid k_grid_;
  Eigen::VectorXd s_;
  bool thin_ = false;     // N <= M: direct object-domain factorization
  Eigen::MatrixXd gram_;  // thin: A^T A / nu^2 ; fat: A A^T / nu^2
  double op_norm_ = 1.0;  // nu = ||A||_2
  mutable std::map<double, Eigen::LLT<Eigen::MatrixXd>> factors_;
  mutable std::mutex factors_mutex_;
};

/// One-shot convenience wrapper around AdmmSolver.
ReconResult admm_reconstruct(const Interferogram& i, const EmissionSpectrum& s,
                             const AdmmConfig& cfg,
                             AdmmDiagnostics* diagnostics = nullptr);

/// Support estimate from a coarse reconstruction: threshold the magnitude
/// at a fraction of its peak, dilate, and cover the result with a lattice
/// of the requested step.
SpatialGrid estimate_support(const ReconResult& coarse, double delta_z,
                             double threshold_fraction = 0.1, int dilate_px = 10);

}  // namespace octsr
