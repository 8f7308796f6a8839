#include "bwp/admm.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <ostream>

namespace bwp {

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& M) {
  Eigen::MatrixXd S = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("eigendecomposition failed in psd projection");
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

namespace {

// Projection onto {Z = W U W^T, U psd}; with an empty basis this is the
// plain psd cone.
Eigen::MatrixXd project_psd_part(const SdpProblem& p, const Eigen::MatrixXd& M) {
  if (p.slater.size() == 0) return project_psd(M);
  Eigen::MatrixXd small = p.slater.transpose() * M * p.slater;
  small = 0.5 * (small + small.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(small);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("eigendecomposition failed in psd projection");
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXd core =
      es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
  return p.slater * core * p.slater.transpose();
}

// Dykstra cycle over the halfspaces <F_t, Z> >= 0. Corrections are scalar
// multiples of the operators; h[t] <= 0 holds the coefficient.
void project_halfspaces(const SdpProblem& p, const std::vector<double>& norm2,
                        Eigen::MatrixXd& x, std::vector<double>& h, int passes) {
  for (int pass = 0; pass < passes; ++pass) {
    double moved = 0.0;
    for (size_t t = 0; t < p.inequalities.size(); ++t) {
      const auto& f = p.inequalities[t];
      const double q = f.apply(x) + h[t] * norm2[t];
      const double hn = std::min(0.0, q) / norm2[t];
      const double delta = h[t] - hn;
      if (delta != 0.0) {
        f.accumulate(x, delta);
        moved += std::abs(delta) * norm2[t];
      }
      h[t] = hn;
    }
    if (moved < 1e-14) break;
  }
}

}  // namespace

AdmmSolution solve(const SdpProblem& p, const AdmmParams& params) {
  if (p.equalities.empty()) throw InvalidParameter("problem has no equality constraints");
  const int N = p.order();
  const int M = static_cast<int>(p.equalities.size());

  // Normalized copies of the equality operators condition the Gram system.
  std::vector<double> scale(M);
  for (int a = 0; a < M; ++a) {
    scale[a] = p.equalities[a].norm();
    if (scale[a] <= 0.0) throw InvalidParameter("equality operator is identically zero");
  }
  Eigen::VectorXd rhs_scaled(M);
  for (int a = 0; a < M; ++a) rhs_scaled(a) = p.rhs(a) / scale[a];

  Eigen::MatrixXd G;
  {
    std::vector<Eigen::Triplet<double>> trips;
    size_t total = 0;
    for (const auto& op : p.equalities) total += op.entries();
    trips.reserve(total);
    for (int a = 0; a < M; ++a) {
      const auto& op = p.equalities[a];
      for (size_t t = 0; t < op.entries(); ++t)
        trips.emplace_back(op.row[t] + op.col[t] * N, a, op.coef[t] / scale[a]);
    }
    Eigen::SparseMatrix<double> At(static_cast<long>(N) * N, M);
    At.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseMatrix<double> Gs = Eigen::SparseMatrix<double>(At.transpose()) * At;
    G = Eigen::MatrixXd(Gs);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success)
    throw NumericalFailure("equality Gram matrix is not positive definite");

  auto apply_scaled = [&](const Eigen::MatrixXd& Z) {
    Eigen::VectorXd vals(M);
    for (int a = 0; a < M; ++a) vals(a) = p.equalities[a].apply(Z) / scale[a];
    return vals;
  };

  // One consensus copy per constraint family: the psd cone always, the sign
  // orthant and the halfspace intersection only when present. Each copy has
  // its own multiplier, so every projection is exact and the slack
  // decomposition falls out of the multipliers directly.
  const bool with_orthant = p.nonneg != NonnegMode::None;
  const bool with_halfspaces = !p.inequalities.empty();
  const int copies = 1 + (with_orthant ? 1 : 0) + (with_halfspaces ? 1 : 0);

  std::vector<int> mask;
  if (p.nonneg == NonnegMode::Band) {
    mask.reserve(p.sign_entries.size() * 2);
    for (auto [i, j] : p.sign_entries) {
      mask.push_back(i + j * N);
      if (i != j) mask.push_back(j + i * N);
    }
  }
  std::vector<double> ineq_norm2;
  ineq_norm2.reserve(p.inequalities.size());
  for (const auto& f : p.inequalities) ineq_norm2.push_back(f.norm() * f.norm());

  // Barycenter of all lifted partitions: exactly equality-feasible and inside
  // every cone copy.
  const int n = p.layout.n, kk = p.layout.kk;
  const auto& m = p.spec.m;
  Eigen::MatrixXd Y0 = Eigen::MatrixXd::Zero(N, N);
  {
    const double pairs = std::max(1.0, double(n) * (n - 1));
    for (int i = 1; i <= kk; ++i)
      for (int j = 1; j <= kk; ++j) {
        const double off = (i == j) ? m[i - 1] * double(m[i - 1] - 1) / pairs
                                    : m[i - 1] * double(m[j - 1]) / pairs;
        const double diag = (i == j) ? m[i - 1] / double(n) : 0.0;
        auto blockij = Y0.block(p.layout.idx(i, 1), p.layout.idx(j, 1), n, n);
        blockij.setConstant(off);
        blockij.diagonal().setConstant(diag);
      }
    for (int i = 1; i <= kk; ++i) {
      Y0.block(p.layout.idx(i, 1), p.layout.corner(), n, 1).setConstant(m[i - 1] / double(n));
      Y0.block(p.layout.corner(), p.layout.idx(i, 1), 1, n).setConstant(m[i - 1] / double(n));
    }
    Y0(p.layout.corner(), p.layout.corner()) = 1.0;
  }

  Eigen::MatrixXd Y_psd = Y0, S_psd = Eigen::MatrixXd::Zero(N, N);
  Eigen::MatrixXd Y_orth, S_orth, Y_half, S_half;
  if (with_orthant) {
    Y_orth = Y0;
    S_orth = Eigen::MatrixXd::Zero(N, N);
  }
  if (with_halfspaces) {
    Y_half = Y0;
    S_half = Eigen::MatrixXd::Zero(N, N);
  }
  std::vector<double> half_coef(p.inequalities.size(), 0.0);

  Eigen::MatrixXd X = Y0, R(N, N);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(M);
  double sigma = params.sigma;

  AdmmSolution sol;
  sol.residual_primal.reserve(1024);
  sol.residual_dual.reserve(1024);

  auto export_multipliers = [&]() {
    sol.dual.resize(M);
    for (int a = 0; a < M; ++a) sol.dual(a) = copies * sigma * w(a) / scale[a];
    if (with_orthant) {
      sol.sign_multiplier = (-S_orth).cwiseMax(0.0);
      if (p.nonneg == NonnegMode::Band) {
        Eigen::MatrixXd masked = Eigen::MatrixXd::Zero(N, N);
        for (int idx : mask) masked.data()[idx] = sol.sign_multiplier.data()[idx];
        sol.sign_multiplier.swap(masked);
      }
    } else {
      sol.sign_multiplier = Eigen::MatrixXd::Zero(N, N);
    }
    sol.ineq_multiplier.resize(static_cast<Eigen::Index>(half_coef.size()));
    for (size_t t = 0; t < half_coef.size(); ++t)
      sol.ineq_multiplier(static_cast<Eigen::Index>(t)) = std::max(0.0, -sigma * half_coef[t]);
    sol.dual_slack = p.cost - sol.sign_multiplier;
    for (int a = 0; a < M; ++a) p.equalities[a].accumulate(sol.dual_slack, -sol.dual(a));
    for (size_t t = 0; t < p.inequalities.size(); ++t)
      p.inequalities[t].accumulate(sol.dual_slack,
                                   -sol.ineq_multiplier(static_cast<Eigen::Index>(t)));
    sol.objective_primal = (p.cost.array() * X.array()).sum();
    sol.objective_dual_raw = p.rhs.dot(sol.dual);
  };

  if (params.log_every > 0 && params.log_stream)
    *params.log_stream << "iter,primal_residual,dual_residual,objective,certified\n";

  sol.status = SolveStatus::MaxIterations;
  int it = 0;
  for (it = 1; it <= params.max_iterations; ++it) {
    // Affine update over the consensus average.
    R = Y_psd - S_psd / sigma;
    if (with_orthant) R += Y_orth - S_orth / sigma;
    if (with_halfspaces) R += Y_half - S_half / sigma;
    R = (R - p.cost / sigma) / copies;
    w = llt.solve(rhs_scaled - apply_scaled(R));
    X = R;
    for (int a = 0; a < M; ++a) p.equalities[a].accumulate(X, w(a) / scale[a]);

    double dual_change2 = 0.0;
    double primal_gap2 = 0.0;
    double mult_norm2 = 0.0;
    const double alpha = params.relaxation;
    try {
      {
        Eigen::MatrixXd Xr = alpha * X + (1.0 - alpha) * Y_psd;
        Eigen::MatrixXd next = project_psd_part(p, Xr + S_psd / sigma);
        dual_change2 += (next - Y_psd).squaredNorm();
        Y_psd.swap(next);
        S_psd += sigma * (Xr - Y_psd);
      }
      primal_gap2 += (X - Y_psd).squaredNorm();
      mult_norm2 += S_psd.squaredNorm();

      if (with_orthant) {
        Eigen::MatrixXd Xr = alpha * X + (1.0 - alpha) * Y_orth;
        Eigen::MatrixXd V = Xr + S_orth / sigma;
        if (p.nonneg == NonnegMode::All)
          V = V.cwiseMax(0.0);
        else
          for (int idx : mask) V.data()[idx] = std::max(V.data()[idx], 0.0);
        dual_change2 += (V - Y_orth).squaredNorm();
        Y_orth.swap(V);
        S_orth += sigma * (Xr - Y_orth);
        primal_gap2 += (X - Y_orth).squaredNorm();
        mult_norm2 += S_orth.squaredNorm();
      }
      if (with_halfspaces) {
        Eigen::MatrixXd Xr = alpha * X + (1.0 - alpha) * Y_half;
        Eigen::MatrixXd V = Xr + S_half / sigma;
        std::fill(half_coef.begin(), half_coef.end(), 0.0);
        project_halfspaces(p, ineq_norm2, V, half_coef, params.projection_passes);
        dual_change2 += (V - Y_half).squaredNorm();
        Y_half.swap(V);
        S_half += sigma * (Xr - Y_half);
        primal_gap2 += (X - Y_half).squaredNorm();
        mult_norm2 += S_half.squaredNorm();
      }
    } catch (const NumericalFailure&) {
      sol.status = SolveStatus::NumericalFailure;
      break;
    }

    const double rp = std::sqrt(primal_gap2) / (1.0 + X.norm());
    const double rd = sigma * std::sqrt(dual_change2) / (1.0 + std::sqrt(mult_norm2));
    sol.residual_primal.push_back(rp);
    sol.residual_dual.push_back(rd);

    if (!std::isfinite(rp) || !std::isfinite(rd) || rp > 1e8 || rd > 1e8) {
      sol.status = SolveStatus::NumericalFailure;
      break;
    }
    if (params.log_every > 0 && params.log_stream && it % params.log_every == 0) {
      export_multipliers();
      *params.log_stream << it << "," << rp << "," << rd << "," << sol.objective_primal
                         << "," << certify_lower_bound(p, sol) << "\n";
    }
    if (rp <= params.tol_primal && rd <= params.tol_dual) {
      sol.status = SolveStatus::Converged;
      break;
    }
    if (params.adaptive_sigma && it % params.adapt_period == 0) {
      if (rp > params.adapt_ratio * rd)
        sigma = std::min(sigma * 2.0, 1e6);
      else if (rd > params.adapt_ratio * rp)
        sigma = std::max(sigma * 0.5, 1e-6);
    }
  }

  sol.iterations = std::min(it, params.max_iterations);
  sol.sigma_final = sigma;
  sol.primal = Y_psd;
  sol.affine = X;
  export_multipliers();
  sol.objective_dual_safe = certify_lower_bound(p, sol);
  return sol;
}

double certify_lower_bound(const SdpProblem& p, const AdmmSolution& sol) {
  const int N = p.order();
  const int M = static_cast<int>(p.equalities.size());

  Eigen::MatrixXd slack = p.cost;
  double dual_value = 0.0;
  if (sol.dual.size() == M) {
    for (int a = 0; a < M; ++a) p.equalities[a].accumulate(slack, -sol.dual(a));
    dual_value = p.rhs.dot(sol.dual);
  }
  if (sol.sign_multiplier.rows() == N && p.nonneg != NonnegMode::None) {
    // Only a nonnegative multiplier supported on sign-constrained entries
    // keeps the bound valid; enforce both rather than trusting the input.
    Eigen::MatrixXd H = sol.sign_multiplier.cwiseMax(0.0);
    if (p.nonneg == NonnegMode::Band) {
      Eigen::MatrixXd masked = Eigen::MatrixXd::Zero(N, N);
      for (auto [i, j] : p.sign_entries) {
        masked(i, j) = H(i, j);
        masked(j, i) = H(j, i);
      }
      H.swap(masked);
    }
    slack -= H;
  }
  if (sol.ineq_multiplier.size() == static_cast<Eigen::Index>(p.inequalities.size()))
    for (size_t t = 0; t < p.inequalities.size(); ++t) {
      const double mu = std::max(0.0, sol.ineq_multiplier(static_cast<Eigen::Index>(t)));
      if (mu > 0.0) p.inequalities[t].accumulate(slack, -mu);
    }

  Eigen::MatrixXd reduced;
  if (p.slater.size() > 0)
    reduced = p.slater.transpose() * slack * p.slater;
  else
    reduced = slack;
  reduced = 0.5 * (reduced + reduced.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(reduced);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("eigendecomposition failed in certification");
  double lam = es.eigenvalues()(0);
  const Eigen::VectorXd v = es.eigenvectors().col(0);
  const double resid = (reduced * v - lam * v).norm();
  if (resid > 1e-6 * std::max(1.0, reduced.norm()))
    throw NumericalFailure("certificate eigenpair residual too large");
  lam -= resid;
  return dual_value + p.trace_bound * std::min(0.0, lam);
}

}  // namespace bwp
