#include "bwp/sdp_model.hpp"

#include <cmath>
#include <ostream>

namespace bwp {

void LinearOperator::add_sym(int i, int j, double c) {
  row.push_back(i);
  col.push_back(j);
  coef.push_back(c);
  if (i != j) {
    row.push_back(j);
    col.push_back(i);
    coef.push_back(c);
  }
}

double LinearOperator::apply(const Eigen::MatrixXd& Z) const {
  double sum = 0.0;
  for (size_t t = 0; t < coef.size(); ++t) sum += coef[t] * Z(row[t], col[t]);
  return sum;
}

void LinearOperator::accumulate(Eigen::MatrixXd& M, double w) const {
  for (size_t t = 0; t < coef.size(); ++t) M(row[t], col[t]) += w * coef[t];
}

Eigen::MatrixXd LinearOperator::dense(int order) const {
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(order, order);
  accumulate(E, 1.0);
  return E;
}

double LinearOperator::norm() const {
  double sum = 0.0;
  for (double c : coef) sum += c * c;
  return std::sqrt(sum);
}

Eigen::VectorXd SdpProblem::eval_equalities(const Eigen::MatrixXd& Z) const {
  Eigen::VectorXd vals(static_cast<Eigen::Index>(equalities.size()));
  for (size_t a = 0; a < equalities.size(); ++a)
    vals(static_cast<Eigen::Index>(a)) = equalities[a].apply(Z);
  return vals;
}

namespace {

// Shared equality families over the retained blocks 1..kk.
void add_equalities(SdpProblem& p) {
  const BlockLayout& L = p.layout;
  const int n = L.n, kk = L.kk, corner = L.corner();

  // diag(X_i) = x_i, entry by entry
  for (int i = 1; i <= kk; ++i)
    for (int t = 1; t <= n; ++t) {
      LinearOperator op;
      op.add_sym(L.idx(i, t), L.idx(i, t), 1.0);
      op.add_sym(L.idx(i, t), corner, -0.5);
      p.equalities.push_back(std::move(op));
    }
  // diag(X_ij) = 0
  for (int i = 1; i <= kk; ++i)
    for (int j = i + 1; j <= kk; ++j)
      for (int t = 1; t <= n; ++t) {
        LinearOperator op;
        op.add_sym(L.idx(i, t), L.idx(j, t), 0.5);
        p.equalities.push_back(std::move(op));
      }
  // trace(X_i) = m_i
  for (int i = 1; i <= kk; ++i) {
    LinearOperator op;
    for (int t = 1; t <= n; ++t) op.add_sym(L.idx(i, t), L.idx(i, t), 1.0);
    p.equalities.push_back(std::move(op));
  }
  // <J, X_i> = m_i^2
  for (int i = 1; i <= kk; ++i) {
    LinearOperator op;
    for (int t = 1; t <= n; ++t)
      for (int s = t; s <= n; ++s) op.add_sym(L.idx(i, t), L.idx(i, s), 1.0);
    p.equalities.push_back(std::move(op));
  }
  // <J, X_ij + X_ij^T> = 2 m_i m_j
  for (int i = 1; i <= kk; ++i)
    for (int j = i + 1; j <= kk; ++j) {
      LinearOperator op;
      for (int t = 1; t <= n; ++t)
        for (int s = 1; s <= n; ++s) op.add_sym(L.idx(i, t), L.idx(j, s), 1.0);
      p.equalities.push_back(std::move(op));
    }
  // corner = 1
  {
    LinearOperator op;
    op.add_sym(corner, corner, 1.0);
    p.equalities.push_back(std::move(op));
  }

  const auto& m = p.spec.m;
  p.rhs.resize(static_cast<Eigen::Index>(p.equalities.size()));
  Eigen::Index a = 0;
  for (int i = 0; i < kk * n; ++i) p.rhs(a++) = 0.0;                      // diag-border
  for (int i = 0; i < kk * (kk - 1) / 2 * n; ++i) p.rhs(a++) = 0.0;      // off-diag zeros
  for (int i = 1; i <= kk; ++i) p.rhs(a++) = m[i - 1];                   // traces
  for (int i = 1; i <= kk; ++i) p.rhs(a++) = double(m[i - 1]) * m[i - 1];
  for (int i = 1; i <= kk; ++i)
    for (int j = i + 1; j <= kk; ++j) p.rhs(a++) = 2.0 * m[i - 1] * m[j - 1];
  p.rhs(a++) = 1.0;  // corner
}

void add_band_sign_entries(SdpProblem& p, int block_count) {
  const BlockLayout& L = p.layout;
  for (int u = 1; u <= block_count; ++u)
    for (int v = u + 1; v <= block_count; ++v) {
      if (v - u <= p.spec.r) continue;
      for (int t = 1; t <= L.n; ++t)
        for (int s = 1; s <= L.n; ++s)
          p.sign_entries.emplace_back(L.idx(u, t), L.idx(v, s));
    }
}

// <F, Z> = (X_u)_{ii} - sum_l (X_ul)_{ij}: the (i,j) entry of the eliminated
// block X_{u,k} expressed on retained variables.
LinearOperator eliminated_entry_op(const BlockLayout& L, int u, int i, int j) {
  LinearOperator op;
  op.add_sym(L.idx(u, i), L.idx(u, i), 1.0);
  for (int l = 1; l <= L.kk; ++l) op.add_sym(L.idx(u, i), L.idx(l, j), -0.5);
  return op;
}

}  // namespace

SdpProblem build_full_model(const Graph& g, const PartitionSpec& spec,
                            NonnegMode nonneg) {
  spec.validate();
  if (spec.n() != g.order())
    throw InvalidParameter("spec block sizes do not sum to the graph order");
  SdpProblem p;
  p.kind = ModelKind::Full;
  p.layout = BlockLayout{g.order(), spec.k};
  p.spec = spec;
  p.nonneg = nonneg;
  p.trace_bound = g.order() + 1.0;

  const int N = p.order();
  p.cost = Eigen::MatrixXd::Zero(N, N);
  for (int u = 1; u <= spec.k; ++u)
    for (int v = u + 1; v <= spec.k; ++v) {
      if (v - u <= spec.r) continue;
      for (auto [a, b] : g.edges()) {
        // both endpoint orders of each edge, halved across the two mirrors
        p.cost(p.layout.idx(u, a), p.layout.idx(v, b)) += 0.5;
        p.cost(p.layout.idx(v, b), p.layout.idx(u, a)) += 0.5;
        p.cost(p.layout.idx(u, b), p.layout.idx(v, a)) += 0.5;
        p.cost(p.layout.idx(v, a), p.layout.idx(u, b)) += 0.5;
      }
    }

  add_equalities(p);
  if (nonneg == NonnegMode::Band) add_band_sign_entries(p, spec.k);
  return p;
}

SdpProblem build_reduced_model(const Graph& g, const PartitionSpec& spec,
                               NonnegMode nonneg, bool with_elim_nonneg) {
  spec.validate();
  if (spec.n() != g.order())
    throw InvalidParameter("spec block sizes do not sum to the graph order");
  SdpProblem p;
  p.kind = ModelKind::Reduced;
  p.layout = BlockLayout{g.order(), spec.k - 1};
  p.spec = spec;
  p.nonneg = nonneg;
  p.trace_bound = g.order() - spec.m.back() + 1.0;

  const BlockLayout& L = p.layout;
  const int n = g.order(), kk = spec.k - 1, N = p.order();
  p.cost = Eigen::MatrixXd::Zero(N, N);

  // Retained far pairs contribute <A, X_uv> directly.
  for (int u = 1; u <= kk; ++u)
    for (int v = u + 1; v <= kk; ++v) {
      if (v - u <= spec.r) continue;
      for (auto [a, b] : g.edges()) {
        p.cost(L.idx(u, a), L.idx(v, b)) += 0.5;
        p.cost(L.idx(v, b), L.idx(u, a)) += 0.5;
        p.cost(L.idx(u, b), L.idx(v, a)) += 0.5;
        p.cost(L.idx(v, a), L.idx(u, b)) += 0.5;
      }
    }
  // Eliminated far pairs (u, k) contribute
  // <A, x_u e^T> - <A, X_u> - sum_l <A, X_ul> via the row-sum identities.
  const Eigen::VectorXd deg = g.adjacency_matrix() * Eigen::VectorXd::Ones(n);
  for (int u = 1; u <= spec.k - spec.r - 1; ++u) {
    for (int t = 1; t <= n; ++t) {
      p.cost(L.idx(u, t), L.corner()) += 0.5 * deg(t - 1);
      p.cost(L.corner(), L.idx(u, t)) += 0.5 * deg(t - 1);
    }
    for (auto [a, b] : g.edges()) {
      p.cost(L.idx(u, a), L.idx(u, b)) -= 1.0;
      p.cost(L.idx(u, b), L.idx(u, a)) -= 1.0;
      for (int l = 1; l <= kk; ++l) {
        if (l == u) continue;
        p.cost(L.idx(u, a), L.idx(l, b)) -= 0.5;
        p.cost(L.idx(l, b), L.idx(u, a)) -= 0.5;
        p.cost(L.idx(u, b), L.idx(l, a)) -= 0.5;
        p.cost(L.idx(l, a), L.idx(u, b)) -= 0.5;
      }
    }
  }

  add_equalities(p);

  if (nonneg == NonnegMode::Band) {
    add_band_sign_entries(p, kk);
    if (!with_elim_nonneg) {
      // Entrywise nonnegativity of the eliminated far blocks, expressed on
      // the retained variables. Diagonal entries vanish identically.
      for (int u = 1; u <= spec.k - spec.r - 1; ++u)
        for (int i = 1; i <= n; ++i)
          for (int j = 1; j <= n; ++j)
            if (i != j) p.inequalities.push_back(eliminated_entry_op(L, u, i, j));
    }
  }

  if (with_elim_nonneg) {
    // Off-diagonal entries of the eliminated diagonal block X_k >= 0.
    for (int i = 2; i <= n; ++i)
      for (int j = 1; j < i; ++j) {
        LinearOperator op;
        op.add_sym(L.corner(), L.corner(), 1.0);
        for (int s = 1; s <= kk; ++s) {
          op.add_sym(L.idx(s, i), L.idx(s, i), -1.0);
          op.add_sym(L.idx(s, j), L.idx(s, j), -1.0);
        }
        for (int s = 1; s <= kk; ++s)
          for (int pbl = 1; pbl <= kk; ++pbl)
            op.add_sym(L.idx(s, i), L.idx(pbl, j), 0.5);
        p.inequalities.push_back(std::move(op));
      }
    // Entrywise nonnegativity of every eliminated off-diagonal block.
    for (int u = 1; u <= kk; ++u)
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
          if (i != j) p.inequalities.push_back(eliminated_entry_op(L, u, i, j));
  }
  return p;
}

SdpProblem build_slater_model(const Graph& g, const PartitionSpec& spec,
                              NonnegMode nonneg) {
  SdpProblem p = build_full_model(g, spec, nonneg);
  p.kind = ModelKind::Slater;
  p.slater = slater_basis(g.order(), spec.m);
  return p;
}

Eigen::MatrixXd nullspace_basis(int n, const std::vector<int>& m) {
  const int k = static_cast<int>(m.size());
  if (n < k || k < 3) throw InvalidParameter("nullspace basis requires n >= k >= 3");
  const int N = n * k + 1;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(N, n + k);
  for (int i = 0; i < k; ++i) {
    B.block(i * n, i, n, 1).setOnes();
    B(N - 1, i) = -double(m[i]);
  }
  for (int j = 0; j < n; ++j) {
    for (int b = 0; b < k; ++b) B(b * n + j, k + j) = 1.0;
    B(N - 1, k + j) = -1.0;
  }
  return B;
}

namespace {

Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& B, int expected_rank) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
  if (static_cast<int>(qr.rank()) != expected_rank)
    throw NumericalFailure("unexpected nullspace rank " + std::to_string(qr.rank()));
  Eigen::MatrixXd Q = qr.householderQ();
  Eigen::MatrixXd W = Q.rightCols(B.rows() - expected_rank);
  for (Eigen::Index c = 0; c < W.cols(); ++c)
    for (Eigen::Index r = 0; r < W.rows(); ++r)
      if (std::abs(W(r, c)) > 1e-9) {
        if (W(r, c) < 0) W.col(c) = -W.col(c);
        break;
      }
  return W;
}

}  // namespace

Eigen::MatrixXd slater_basis(int n, const std::vector<int>& m) {
  const int k = static_cast<int>(m.size());
  return orthogonal_complement(nullspace_basis(n, m), n + k - 1);
}

Eigen::MatrixXd reduced_nullspace_basis(int n, const std::vector<int>& m) {
  const int k = static_cast<int>(m.size());
  if (n < k || k < 3) throw InvalidParameter("nullspace basis requires n >= k >= 3");
  const int N = n * (k - 1) + 1;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(N, k - 1);
  for (int i = 0; i < k - 1; ++i) {
    B.block(i * n, i, n, 1).setOnes();
    B(N - 1, i) = -double(m[i]);
  }
  return B;
}

void attach_interior_basis(SdpProblem& p) {
  if (p.slater.size() > 0) return;
  const int n = p.layout.n;
  if (p.kind == ModelKind::Reduced)
    p.slater = orthogonal_complement(reduced_nullspace_basis(n, p.spec.m), p.spec.k - 1);
  else
    p.slater = slater_basis(n, p.spec.m);
}

namespace {

Eigen::VectorXd lift_vector(const PartitionMatrix& part, int kk) {
  const int n = part.n();
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n * kk + 1);
  for (int v = 1; v <= n; ++v) {
    const int b = part.block_of(v);
    if (b <= kk) z((b - 1) * n + (v - 1)) = 1.0;
  }
  z(n * kk) = 1.0;
  return z;
}

}  // namespace

Eigen::MatrixXd lift_partition(const PartitionMatrix& part) {
  Eigen::VectorXd z = lift_vector(part, part.k);
  return z * z.transpose();
}

Eigen::MatrixXd lift_partition_reduced(const PartitionMatrix& part) {
  Eigen::VectorXd z = lift_vector(part, part.k - 1);
  return z * z.transpose();
}

Eigen::MatrixXd reconstruct_full_from_reduced(const Eigen::MatrixXd& Zred,
                                              const PartitionSpec& spec) {
  spec.validate();
  const int n = spec.n(), k = spec.k;
  const BlockLayout red{n, k - 1}, full{n, k};
  if (Zred.rows() != red.order() || Zred.cols() != red.order())
    throw InvalidParameter("reduced matrix has the wrong order");

  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(full.order(), full.order());
  const int body = n * (k - 1);
  Z.topLeftCorner(body, body) = Zred.topLeftCorner(body, body);
  Z.block(0, full.corner(), body, 1) = Zred.block(0, red.corner(), body, 1);
  Z.block(full.corner(), 0, 1, body) = Zred.block(red.corner(), 0, 1, body);
  Z(full.corner(), full.corner()) = Zred(red.corner(), red.corner());

  Eigen::VectorXd xk = Eigen::VectorXd::Ones(n);
  for (int i = 1; i <= k - 1; ++i) xk -= Zred.block(red.idx(i, 1), red.corner(), n, 1);
  Z.block(full.idx(k, 1), full.corner(), n, 1) = xk;
  Z.block(full.corner(), full.idx(k, 1), 1, n) = xk.transpose();

  const Eigen::RowVectorXd ones = Eigen::RowVectorXd::Ones(n);
  for (int i = 1; i <= k - 1; ++i) {
    Eigen::MatrixXd Xik = Zred.block(red.idx(i, 1), red.corner(), n, 1) * ones;
    for (int j = 1; j <= k - 1; ++j)
      Xik -= Zred.block(red.idx(i, 1), red.idx(j, 1), n, n);
    Z.block(full.idx(i, 1), full.idx(k, 1), n, n) = Xik;
    Z.block(full.idx(k, 1), full.idx(i, 1), n, n) = Xik.transpose();
  }

  Eigen::MatrixXd Xk = xk * ones;
  for (int j = 1; j <= k - 1; ++j) Xk -= Z.block(full.idx(k, 1), full.idx(j, 1), n, n);
  Z.block(full.idx(k, 1), full.idx(k, 1), n, n) = Xk;

  return 0.5 * (Z + Z.transpose());
}

Eigen::MatrixXd transport_operator(const LinearOperator& op, const Eigen::MatrixXd& W) {
  return W.transpose() * op.dense(static_cast<int>(W.rows())) * W;
}

double block_rowsum_residual(const Eigen::MatrixXd& Z, int n, int k) {
  const BlockLayout L{n, k};
  if (Z.rows() != L.order()) throw InvalidParameter("matrix order does not match layout");
  const Eigen::RowVectorXd ones = Eigen::RowVectorXd::Ones(n);
  double worst = 0.0;
  for (int i = 1; i <= k; ++i) {
    Eigen::MatrixXd sum = -Z.block(L.idx(i, 1), L.corner(), n, 1) * ones;
    for (int j = 1; j <= k; ++j) sum += Z.block(L.idx(i, 1), L.idx(j, 1), n, n);
    worst = std::max(worst, sum.cwiseAbs().maxCoeff());
  }
  Eigen::VectorXd xs = Eigen::VectorXd::Zero(n);
  for (int i = 1; i <= k; ++i) xs += Z.block(L.idx(i, 1), L.corner(), n, 1);
  worst = std::max(worst, (xs - Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff());
  return worst;
}

void SdpProblem::dump(std::ostream& out) const {
  auto put_entries = [&out](const LinearOperator& op) {
    for (size_t t = 0; t < op.entries(); ++t)
      out << op.row[t] << " " << op.col[t] << " " << op.coef[t] << "\n";
  };
  out << "bwp-sdp 1\n";
  out << "order " << order() << "\n";
  out << "trace-bound " << trace_bound << "\n";

  long cost_nnz = 0;
  for (int i = 0; i < cost.rows(); ++i)
    for (int j = 0; j < cost.cols(); ++j)
      if (cost(i, j) != 0.0) ++cost_nnz;
  out << "cost " << cost_nnz << "\n";
  for (int i = 0; i < cost.rows(); ++i)
    for (int j = 0; j < cost.cols(); ++j)
      if (cost(i, j) != 0.0) out << i << " " << j << " " << cost(i, j) << "\n";

  out << "equalities " << equalities.size() << "\n";
  for (size_t a = 0; a < equalities.size(); ++a) {
    out << "eq " << a << " rhs " << rhs(static_cast<Eigen::Index>(a)) << " nnz "
        << equalities[a].entries() << "\n";
    put_entries(equalities[a]);
  }

  const char* mode = (nonneg == NonnegMode::All)    ? "all"
                     : (nonneg == NonnegMode::Band) ? "band"
                                                    : "none";
  out << "signs " << mode << " " << sign_entries.size() << "\n";
  for (auto [i, j] : sign_entries) out << i << " " << j << "\n";

  out << "inequalities " << inequalities.size() << "\n";
  for (size_t t = 0; t < inequalities.size(); ++t) {
    out << "ineq " << t << " nnz " << inequalities[t].entries() << "\n";
    put_entries(inequalities[t]);
  }
}

}  // namespace bwp
