#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "bwp/sdp_model.hpp"

namespace bwp {

struct AdmmParams {
  double sigma = 1.0;          // augmented Lagrangian penalty
  double relaxation = 1.0;     // over-relaxation factor in (0, 2)
  bool adaptive_sigma = true;  // rescale when residuals drift apart
  double adapt_ratio = 10.0;
  int adapt_period = 100;
  double tol_primal = 1e-5;
  double tol_dual = 1e-5;
  int max_iterations = 100000;
  double safeguard_eig = 1e-8;  // residual tolerance on certificate eigenpairs
  int projection_passes = 10;   // alternating-projection passes over the halfspaces
  int log_every = 0;            // emit a CSV line every so many iterations
  std::ostream* log_stream = nullptr;
};

enum class SolveStatus { Converged, MaxIterations, NumericalFailure };

struct AdmmSolution {
  Eigen::MatrixXd primal;           // cone-feasible iterate
  Eigen::MatrixXd affine;           // equality-feasible iterate
  Eigen::VectorXd dual;             // equality multipliers y
  Eigen::MatrixXd sign_multiplier;  // H >= 0, supported on sign-constrained entries
  Eigen::VectorXd ineq_multiplier;  // mu >= 0, one per general inequality
  Eigen::MatrixXd dual_slack;       // cost - sum y_a E_a - H - sum mu_t F_t

  double objective_primal = 0.0;    // <cost, affine>
  double objective_dual_raw = 0.0;  // rhs' y
  double objective_dual_safe = 0.0; // certified lower bound on the optimum

  std::vector<double> residual_primal, residual_dual;
  int iterations = 0;
  double sigma_final = 0.0;
  SolveStatus status = SolveStatus::MaxIterations;
};

/// Frobenius-nearest positive semidefinite matrix: eigendecompose and clamp
/// negative eigenvalues to zero. Idempotent.
Eigen::MatrixXd project_psd(const Eigen::MatrixXd& M);

/// Consensus splitting: alternate the projection onto the equality-feasible
/// affine subspace (shifted by the cost), exact projections onto one copy
/// per cone family (psd by eigenvalue clamping, sign constraints by
/// entrywise clamping, general inequalities by alternating halfspace
/// projections), and a dual ascent step per copy. Deterministic for fixed
/// inputs.
AdmmSolution solve(const SdpProblem& p, const AdmmParams& params = {});

/// Rigorous lower bound on the SDP optimum from any multiplier estimate:
///   rhs'y + trace_bound * min(0, lambda_min(slack)),
/// with the slack eigenvalue taken in the Slater-reduced space when the
/// problem carries a basis. Valid at any iteration count.
double certify_lower_bound(const SdpProblem& p, const AdmmSolution& sol);

}  // namespace bwp
