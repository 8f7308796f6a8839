#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "bwp/graph.hpp"
#include "bwp/partition.hpp"

namespace bwp {

/// Index arithmetic for the lifted variable: kk row blocks of size n plus a
/// border row/column, so the matrix order is n*kk + 1. The full model keeps
/// kk = k blocks, the reduced model kk = k-1.
struct BlockLayout {
  int n = 0;
  int kk = 0;

  int order() const { return n * kk + 1; }
  int corner() const { return n * kk; }
  /// 0-based matrix index of vertex v (1-based) inside block b (1-based).
  int idx(int b, int v) const { return (b - 1) * n + (v - 1); }
};

/// Convenience views over a lifted matrix in a given layout.
struct BlockMatrix {
  Eigen::MatrixXd Z;
  BlockLayout layout;

  Eigen::Block<const Eigen::MatrixXd> block(int i, int j) const {
    return Z.block(layout.idx(i, 1), layout.idx(j, 1), layout.n, layout.n);
  }
  Eigen::Block<const Eigen::MatrixXd> border(int i) const {
    return Z.block(layout.idx(i, 1), layout.corner(), layout.n, 1);
  }
  double corner() const { return Z(layout.corner(), layout.corner()); }
};

/// A symmetric linear functional <E, Z> stored as an explicit entry list;
/// off-diagonal support carries both mirror entries.
struct LinearOperator {
  std::vector<int> row, col;
  std::vector<double> coef;

  /// Adds entry (i,j); for i != j the mirror entry (j,i) is added as well,
  /// each with coefficient c.
  void add_sym(int i, int j, double c);

  double apply(const Eigen::MatrixXd& Z) const;
  void accumulate(Eigen::MatrixXd& M, double w) const;  // M += w * E
  Eigen::MatrixXd dense(int order) const;
  double norm() const;  // Frobenius norm of E
  size_t entries() const { return coef.size(); }
};

enum class NonnegMode { None, Band, All };
enum class ModelKind { Full, Reduced, Slater };

/// A semidefinite program over one symmetric matrix variable:
///   min <cost, Z>  s.t.  <E_a, Z> = rhs_a,  Z psd,
///                        Z >= 0 on sign-constrained entries,
///                        <F_t, Z> >= 0 for the general inequalities.
/// When `slater` is nonempty the psd constraint is Z = W U W^T with U psd,
/// where W = slater has orthonormal columns.
struct SdpProblem {
  ModelKind kind = ModelKind::Full;
  BlockLayout layout;
  PartitionSpec spec;

  Eigen::MatrixXd cost;
  std::vector<LinearOperator> equalities;
  Eigen::VectorXd rhs;

  NonnegMode nonneg = NonnegMode::None;
  std::vector<std::pair<int, int>> sign_entries;  // (i,j) with i <= j; empty for All
  std::vector<LinearOperator> inequalities;

  double trace_bound = 0.0;  // trace of any feasible variable (pinned by the equalities)
  Eigen::MatrixXd slater;    // orthonormal basis W; empty unless kind == Slater

  int order() const { return layout.order(); }
  Eigen::VectorXd eval_equalities(const Eigen::MatrixXd& Z) const;

  /// Plain-text dump (cost triplets, equality triplets with rhs, sign entry
  /// list, inequality triplets) for cross-checking with external solvers.
  void dump(std::ostream& out) const;
};

/// Lifted model over all k blocks; matrix order n*k + 1. The cost satisfies
/// <cost, lift(X)> = far_edge_count(g, X, r) for every partition X.
SdpProblem build_full_model(const Graph& g, const PartitionSpec& spec,
                            NonnegMode nonneg);

/// Model with the last block eliminated; matrix order n*(k-1) + 1. Sign
/// constraints in Band mode cover the retained far blocks entrywise and the
/// eliminated far blocks through affine inequalities. with_elim_nonneg adds
/// the two inequality families expressing entrywise nonnegativity of the
/// whole eliminated block row, which together with All-mode signs makes the
/// model match the full model with Z >= 0.
SdpProblem build_reduced_model(const Graph& g, const PartitionSpec& spec,
                               NonnegMode nonneg, bool with_elim_nonneg);

/// Full model restricted to the orthogonal complement of the forced
/// nullspace, so the feasible region has interior; the psd variable has
/// order (k-1)(n-1) + 1.
SdpProblem build_slater_model(const Graph& g, const PartitionSpec& spec,
                              NonnegMode nonneg);

/// The (nk+1) x (n+k) matrix whose columns span the forced nullspace of any
/// feasible lifted variable: k block-indicator columns with corner -m_i and
/// n stacked-identity columns with corner -1. Rank n+k-1.
Eigen::MatrixXd nullspace_basis(int n, const std::vector<int>& m);

/// Orthonormal basis of the orthogonal complement of nullspace_basis(n, m):
/// (nk+1) x ((k-1)(n-1)+1), sign-fixed so the first nonzero entry of each
/// column is positive.
Eigen::MatrixXd slater_basis(int n, const std::vector<int>& m);

/// Forced nullspace of the reduced variable: the k-1 block-indicator columns
/// with corner -m_i, of size (n(k-1)+1) x (k-1). Any matrix feasible for the
/// reduced equalities and psd annihilates it.
Eigen::MatrixXd reduced_nullspace_basis(int n, const std::vector<int>& m);

/// Restricts a Full or Reduced problem to the orthogonal complement of its
/// forced nullspace, which makes the feasible region have relative interior
/// without changing the optimum. First-order solves then attain their duals.
void attach_interior_basis(SdpProblem& p);

/// Rank-one lift [vec(X); 1] [vec(X); 1]^T of a partition, either over all
/// k blocks (order nk+1) or with the last block dropped (order n(k-1)+1).
Eigen::MatrixXd lift_partition(const PartitionMatrix& part);
Eigen::MatrixXd lift_partition_reduced(const PartitionMatrix& part);

/// Rebuilds the full-order variable from a reduced-order one via the block
/// row-sum identities; exact on lifted partitions.
Eigen::MatrixXd reconstruct_full_from_reduced(const Eigen::MatrixXd& Zred,
                                              const PartitionSpec& spec);

/// W^T E W for a sparse operator; used to transport equalities and cost
/// into the Slater variable space.
Eigen::MatrixXd transport_operator(const LinearOperator& op, const Eigen::MatrixXd& W);

/// Largest violation of the block row-sum identities
/// sum_j X_ij = x_i e^T (all i) and sum_i x_i = e on a full-order variable.
double block_rowsum_residual(const Eigen::MatrixXd& Z, int n, int k);

}  // namespace bwp
