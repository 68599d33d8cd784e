#pragma once

#include <map>
#include <string>
#include <vector>

#include "linrel/nonneg.hpp"

namespace linrel {

/// Relation generated by a grid of blocks. blocks[i][j] maps component j of
/// the input (coordinates w.r.t. in_bases[j]) to component i of the output
/// (coordinates w.r.t. out_bases[i]). Pairs are (Σ_j Q_j x_j, Σ_i P_i Σ_j y_ij)
/// with every (x_j, y_ij) in the corresponding block.
inline LinearRelation generate_blocks(const std::vector<std::vector<LinearRelation>>& blocks,
                                      const std::vector<ComplexMatrix>& in_bases,
                                      const std::vector<ComplexMatrix>& out_bases, const Tolerances& tol = {}) {
  const std::size_t p = out_bases.size();
  const std::size_t q = in_bases.size();
  if (blocks.size() != p) raise(ErrorKind::ComponentMismatch, "generated relation: wrong number of block rows");
  const Index n = q ? in_bases[0].rows() : 0;
  const Index m = p ? out_bases[0].rows() : 0;

  std::vector<Index> x_off(q), y_off(p * q);
  Index total = 0;
  for (std::size_t j = 0; j < q; ++j) {
    if (in_bases[j].rows() != n) raise(ErrorKind::ComponentMismatch, "generated relation: input bases differ in ambient size");
    x_off[j] = total;
    total += in_bases[j].cols();
  }
  for (std::size_t i = 0; i < p; ++i) {
    if (out_bases[i].rows() != m) raise(ErrorKind::ComponentMismatch, "generated relation: output bases differ in ambient size");
    if (blocks[i].size() != q) raise(ErrorKind::ComponentMismatch, "generated relation: ragged block row");
    for (std::size_t j = 0; j < q; ++j) {
      const auto& blk = blocks[i][j];
      if (blk.dim_in() != in_bases[j].cols() || blk.dim_out() != out_bases[i].cols()) {
        raise(ErrorKind::ComponentMismatch, "block (" + std::to_string(i) + "," + std::to_string(j) + ") does not fit its components");
      }
      y_off[i * q + j] = total;
      total += out_bases[i].cols();
    }
  }

  std::vector<ComplexMatrix> rows;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < q; ++j)
      rows.push_back(detail::membership_rows(blocks[i][j], x_off[j], y_off[i * q + j], total, tol));
  const ComplexMatrix free = null_space(detail::stack_rows(rows, total), tol);

  ComplexMatrix pairs = ComplexMatrix::Zero(n + m, free.cols());
  for (std::size_t j = 0; j < q; ++j) pairs.topRows(n) += in_bases[j] * free.middleRows(x_off[j], in_bases[j].cols());
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < q; ++j)
      pairs.bottomRows(m) += out_bases[i] * free.middleRows(y_off[i * q + j], out_bases[i].cols());
  return LinearRelation::from_graph(pairs, n, m, tol);
}

/// The relation generated by [[a, b], [c, d]] w.r.t. S ⊕ S⊥. Blocks are given
/// in coordinates of the bases of S and complement(S).
inline LinearRelation assemble(const LinearRelation& a, const LinearRelation& b, const LinearRelation& c,
                               const LinearRelation& d, const Subspace& s, const Tolerances& tol = {}) {
  const ComplexMatrix qs = s.basis();
  const ComplexMatrix qp = complement(s, tol).basis();
  return generate_blocks({{a, b}, {c, d}}, {qs, qp}, {qs, qp}, tol);
}

/// Row relation [r1, r2] : S ⊕ S⊥ -> C^k, blocks in coordinates.
inline LinearRelation assemble_row(const LinearRelation& r1, const LinearRelation& r2, const Subspace& s,
                                   const Tolerances& tol = {}) {
  if (r1.dim_out() != r2.dim_out()) raise(ErrorKind::ComponentMismatch, "row blocks have different targets");
  return generate_blocks({{r1, r2}}, {s.basis(), complement(s, tol).basis()},
                         {ComplexMatrix::Identity(r1.dim_out(), r1.dim_out())}, tol);
}

/// Three conditions that are equivalent for a nonnegative selfadjoint A.
struct SplittingConditions {
  bool dom_invariant = false;  // P_S(dom A) ⊆ dom A
  bool s_splits = false;       // S = N1 ⊕ M1
  bool s_perp_splits = false;  // S⊥ = N2 ⊕ M2

  bool agree() const { return dom_invariant == s_splits && s_splits == s_perp_splits; }
};

inline SplittingConditions splitting_conditions(const NonnegSelfAdjointRelation& a, const Subspace& s,
                                                const Tolerances& tol = {}) {
  SplittingConditions out;
  const Subspace sp = complement(s, tol);
  out.dom_invariant = is_invariant(a.dom(), s, tol);
  out.s_splits = same(s, sum(intersect(s, a.dom(), tol), intersect(s, a.mul(), tol), tol), tol);
  out.s_perp_splits = same(sp, sum(intersect(sp, a.dom(), tol), intersect(sp, a.mul(), tol), tol), tol);
  return out;
}

struct Factorization {
  ComplexMatrix W;  // [[1, f], [0, Df]] on N1 ⊕ N2 coordinates
  LinearRelation Z; // diag(a0^(1/2), d0^(1/2)) on N1 ⊕ N2 coordinates
  ComplexMatrix n_basis;  // [Q_N1, Q_N2]

  /// W and Z carried back to the ambient space (zero off N1 ⊕ N2).
  ComplexMatrix w_ambient() const { return n_basis * W * n_basis.adjoint(); }
  ComplexMatrix z_ambient() const {
    return n_basis * Z.y_part() * pseudo_inverse(Z.x_part()) * n_basis.adjoint();
  }
};

/// Everything the block analysis of (A, S) produces. Subspaces live in the
/// ambient space; the relations a, b, c, d and the matrices g, Dg act on
/// coordinates of the bases of S and S⊥; a0..d0, f, Df act on coordinates of
/// the bases of N1 and N2.
struct BlockRepresentation {
  Subspace S, S_perp;
  Subspace D1, D2, M1, M2, N1, N2;
  LinearRelation a, b, c, d;
  NonnegSelfAdjointRelation a_nn, d_nn;  // a and d after Friedrichs completion
  ComplexMatrix a0, b0, c0, d0;
  ComplexMatrix a0_root, d0_root;
  ComplexMatrix V1, V2;  // n x dim N1, n x dim N2
  ComplexMatrix f, g, Df, Dg;
  std::map<std::string, double> diagnostics;

  /// S and S⊥ components expressed in coordinates of S and S⊥.
  Subspace D1_coords(const Tolerances& tol = {}) const { return relative_to(D1, S, tol); }
  Subspace D2_coords(const Tolerances& tol = {}) const { return relative_to(D2, S_perp, tol); }
  Subspace N2_coords() const { return Subspace::from_orthonormal(coordinates_in(N2, S_perp)); }

  /// g as an operator on the ambient space, S⊥ -> S.
  ComplexMatrix g_ambient() const { return S.basis() * g * S_perp.basis().adjoint(); }
  ComplexMatrix f_ambient() const { return N1.basis() * f * N2.basis().adjoint(); }
};

/// Blocks of A0 w.r.t. N1 ⊕ N2.
struct OperatorBlocks {
  ComplexMatrix a0, b0, c0, d0;
};

inline OperatorBlocks operator_block(const BlockRepresentation& rep) { return {rep.a0, rep.b0, rep.c0, rep.d0}; }

namespace detail {

// {(P* x, R* y) : (x, y) in T}, for T restricted to a subspace spanned by P.
inline LinearRelation compress_block(const LinearRelation& t, const Subspace& in, const Subspace& out,
                                     const Tolerances& tol) {
  return map_pairs(in.basis().adjoint(), out.basis().adjoint(), restrict(t, in, tol), tol);
}

// Partial isometry sending root_c h to big_root q h and vanishing off ran(root_c).
inline ComplexMatrix partial_isometry(const ComplexMatrix& big_root, const ComplexMatrix& q, const ComplexMatrix& root_c,
                                      const Tolerances& tol) {
  return big_root * q * pseudo_inverse(root_c, tol);
}

}  // namespace detail

inline BlockRepresentation analyze(const NonnegSelfAdjointRelation& A, const Subspace& s, const Tolerances& tol = {}) {
  tol.check();
  if (s.ambient_dim() != A.dim()) raise(ErrorKind::DimensionMismatch, "analyze: subspace ambient dimension");
  const auto inv = invariance_report(A.dom(), s, tol);
  if (!inv.invariant()) {
    std::string w;
    for (Index i = 0; i < inv.witness.size(); ++i) {
      w += (i ? ", " : "") + std::to_string(inv.witness(i).real()) + (inv.witness(i).imag() >= 0 ? "+" : "") +
           std::to_string(inv.witness(i).imag()) + "i";
    }
    raise(ErrorKind::InvarianceViolated, "P_S(dom A) leaves dom A; witness x = (" + w + ")");
  }

  BlockRepresentation r;
  const LinearRelation& rel = A.relation();
  r.S = s;
  r.S_perp = complement(s, tol);
  r.D1 = intersect(s, A.dom(), tol);
  r.D2 = intersect(r.S_perp, A.dom(), tol);
  r.M1 = intersect(s, A.mul(), tol);
  r.M2 = intersect(r.S_perp, A.mul(), tol);
  r.N1 = r.D1;
  r.N2 = r.D2;

  r.a = detail::compress_block(rel, r.S, r.S, tol);
  r.b = detail::compress_block(rel, r.S_perp, r.S, tol);
  r.c = detail::compress_block(rel, r.S, r.S_perp, tol);
  r.d = detail::compress_block(rel, r.S_perp, r.S_perp, tol);
  r.a_nn = friedrichs(r.a, tol);
  r.d_nn = friedrichs(r.d, tol);

  const ComplexMatrix a_op = A.op_matrix();
  const ComplexMatrix& q1 = r.N1.basis();
  const ComplexMatrix& q2 = r.N2.basis();
  r.a0 = hermitian_part(q1.adjoint() * a_op * q1);
  r.b0 = q1.adjoint() * a_op * q2;
  r.c0 = q2.adjoint() * a_op * q1;
  r.d0 = hermitian_part(q2.adjoint() * a_op * q2);
  r.a0_root = psd_sqrt(r.a0, tol);
  r.d0_root = psd_sqrt(r.d0, tol);

  const ComplexMatrix big_root = A.root_matrix();
  r.V1 = detail::partial_isometry(big_root, q1, r.a0_root, tol);
  r.V2 = detail::partial_isometry(big_root, q2, r.d0_root, tol);
  r.f = r.V1.adjoint() * r.V2;
  // g acts as f from N2 to N1 and vanishes on M2
  r.g = coordinates_in(r.N1, r.S) * r.f * coordinates_in(r.N2, r.S_perp).adjoint();
  r.Df = psd_sqrt(ComplexMatrix::Identity(r.f.cols(), r.f.cols()) - r.f.adjoint() * r.f, tol);
  r.Dg = psd_sqrt(ComplexMatrix::Identity(r.g.cols(), r.g.cols()) - r.g.adjoint() * r.g, tol);
  return r;
}

/// Square roots of the corner blocks restricted to their domains, in S and
/// S⊥ coordinates.
inline LinearRelation a_root_on_d1(const BlockRepresentation& r, const Tolerances& tol = {}) {
  return restrict(sqrt(r.a_nn, tol).relation(), r.D1_coords(tol), tol);
}

inline LinearRelation d_root_on_d2(const BlockRepresentation& r, const Tolerances& tol = {}) {
  return restrict(sqrt(r.d_nn, tol).relation(), r.D2_coords(tol), tol);
}

inline Factorization factorize(const BlockRepresentation& r, const Tolerances& tol = {}) {
  const Index r1 = r.N1.dim();
  const Index r2 = r.N2.dim();
  Factorization out;
  out.W = ComplexMatrix::Zero(r1 + r2, r1 + r2);
  out.W.topLeftCorner(r1, r1).setIdentity();
  out.W.topRightCorner(r1, r2) = r.f;
  out.W.bottomRightCorner(r2, r2) = r.Df;
  ComplexMatrix z = ComplexMatrix::Zero(r1 + r2, r1 + r2);
  z.topLeftCorner(r1, r1) = r.a0_root;
  z.bottomRightCorner(r2, r2) = r.d0_root;
  out.Z = LinearRelation::from_matrix(z, tol);
  out.n_basis = ComplexMatrix(r.N1.ambient_dim(), r1 + r2);
  out.n_basis << r.N1.basis(), r.N2.basis();
  return out;
}

/// Residuals of the structural identities of a block representation.
struct BlockChecks {
  double roundtrip = 0.0;       // gap(assemble(a, b, c, d), A)
  double adjoint_blocks = 0.0;  // gap(assemble(a*, c*, b*, d*), A)
  double b_reconstruction = 0.0;
  double c_reconstruction = 0.0;
  double f_norm = 0.0;
  double g_norm = 0.0;
  double c_in_b_star = 0.0;     // 0 when c ⊆ b*, else 1
  double v1_isometry = 0.0;     // ||V1* V1 - P_ran(a0^(1/2))||
  double v2_isometry = 0.0;
  double dom_split = 0.0;       // gap(dom A, D1 ⊕ D2)
  double mul_split = 0.0;       // gap(mul A, M1 ⊕ M2)
  double factorization = 0.0;   // gap(gram(WZ), A0 on N1 ⊕ N2)
  double wz_matrix = 0.0;       // ||(WZ)*(WZ) - [[a0, b0], [c0, d0]]||
  SplittingConditions splitting;
  bool mul_invariant = false;   // P_S(mul A) ⊆ mul A
};

inline BlockChecks block_checks(const NonnegSelfAdjointRelation& A, const BlockRepresentation& r,
                                const Tolerances& tol = {}) {
  BlockChecks out;
  const LinearRelation& rel = A.relation();
  out.roundtrip = graph_gap(assemble(r.a, r.b, r.c, r.d, r.S, tol), rel);
  out.adjoint_blocks =
      graph_gap(assemble(adjoint(r.a, tol), adjoint(r.c, tol), adjoint(r.b, tol), adjoint(r.d, tol), r.S, tol), rel);

  const LinearRelation a_root = sqrt(r.a_nn, tol).relation();
  const LinearRelation d_root = sqrt(r.d_nn, tol).relation();
  const LinearRelation g_rel = LinearRelation::from_matrix(r.g, tol);
  const LinearRelation g_star = LinearRelation::from_matrix(r.g.adjoint(), tol);
  out.b_reconstruction =
      graph_gap(r.b, compose(a_root, compose(g_rel, restrict(d_root, r.D2_coords(tol), tol), tol), tol));
  out.c_reconstruction =
      graph_gap(r.c, compose(d_root, compose(g_star, restrict(a_root, r.D1_coords(tol), tol), tol), tol));
  out.f_norm = op_norm(r.f);
  out.g_norm = op_norm(r.g);
  out.c_in_b_star = includes(adjoint(r.b, tol), r.c, tol) ? 0.0 : 1.0;

  auto isometry_defect = [&](const ComplexMatrix& v, const ComplexMatrix& root) {
    const ComplexMatrix q = orthonormal_columns(root, tol);
    return op_norm(v.adjoint() * v - q * q.adjoint());
  };
  out.v1_isometry = isometry_defect(r.V1, r.a0_root);
  out.v2_isometry = isometry_defect(r.V2, r.d0_root);
  out.dom_split = gap(A.dom(), sum(r.D1, r.D2, tol));
  out.mul_split = gap(A.mul(), sum(r.M1, r.M2, tol));

  const auto fz = factorize(r, tol);
  const ComplexMatrix& qn = fz.n_basis;
  const ComplexMatrix a0_n = hermitian_part(qn.adjoint() * A.op_matrix() * qn);
  const LinearRelation wz = compose(LinearRelation::from_matrix(fz.W, tol), fz.Z, tol);
  out.factorization = graph_gap(gram(wz, tol).relation(), LinearRelation::from_matrix(a0_n, tol));
  const ComplexMatrix wz_m = fz.W * fz.Z.y_part() * pseudo_inverse(fz.Z.x_part(), tol);
  out.wz_matrix = op_norm(wz_m.adjoint() * wz_m - a0_n);

  out.splitting = splitting_conditions(A, r.S, tol);
  out.mul_invariant = is_invariant(A.mul(), r.S, tol);
  return out;
}

}  // namespace linrel
