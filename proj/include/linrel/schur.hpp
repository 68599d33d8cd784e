#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "linrel/block.hpp"
#include "linrel/random.hpp"

namespace linrel {

/// Schur complement and compression of A w.r.t. S together with the
/// intermediate objects they are built from. The relations T and row act on
/// coordinates (T on S⊥ coordinates, row from H into S coordinates).
struct SchurResult {
  BlockRepresentation rep;
  LinearRelation T;        // D_g d^(1/2) on D2
  ComplexMatrix t;         // D_f d0^(1/2), its operator part on N2 coordinates
  NonnegSelfAdjointRelation schur;
  NonnegSelfAdjointRelation compression;
  LinearRelation row;      // [a^(1/2) on D1, g d^(1/2) on D2]
  ComplexMatrix s;         // [a0^(1/2), f d0^(1/2)], N1 ⊕ N2 -> N1
  Subspace L;              // A^(1/2)(D1) ∩ dom A
  std::map<std::string, double> diagnostics;
};

namespace detail {

inline LinearRelation zero_block(Index dim_in, Index dim_out) { return LinearRelation::zero(dim_in, dim_out); }

inline void fill_schur(const NonnegSelfAdjointRelation& A, SchurResult& res, const Tolerances& tol) {
  const BlockRepresentation& r = res.rep;
  const Index k = r.S.dim();
  const Index nk = r.S_perp.dim();
  res.T = compose(LinearRelation::from_matrix(r.Dg, tol), d_root_on_d2(r, tol), tol);
  res.t = r.Df * r.d0_root;
  const NonnegSelfAdjointRelation tt = gram(res.T, tol);
  res.schur = validate(assemble(zero_block(k, k), zero_block(nk, k), zero_block(k, nk), tt.relation(), r.S, tol), tol);

  // the same T*T from the defect of f: d0^(1/2) Df^2 d0^(1/2) ⊕̂ ({0} x M2)
  const NonnegSelfAdjointRelation lemma = make_nonneg(r.N2_coords(), res.t.adjoint() * res.t, tol);
  res.diagnostics["schur_lemma_gap"] = graph_gap(tt.relation(), lemma.relation());
  res.diagnostics["schur_range_in_s_perp"] = contains(r.S_perp, res.schur.relation().ran(tol), tol) ? 1.0 : 0.0;
  res.diagnostics["schur_below_a"] = leq(res.schur, A, tol) ? 1.0 : 0.0;
}

inline void fill_compression(const NonnegSelfAdjointRelation& A, SchurResult& res, const Tolerances& tol) {
  const BlockRepresentation& r = res.rep;
  const LinearRelation g_part = compose(LinearRelation::from_matrix(r.g, tol), d_root_on_d2(r, tol), tol);
  res.row = assemble_row(a_root_on_d1(r, tol), g_part, r.S, tol);
  res.compression = gram(res.row, tol);

  const Index r1 = r.N1.dim();
  const Index r2 = r.N2.dim();
  res.s = ComplexMatrix(r1, r1 + r2);
  res.s << r.a0_root, r.f * r.d0_root;
  ComplexMatrix n_basis(A.dim(), r1 + r2);
  n_basis << r.N1.basis(), r.N2.basis();
  const ComplexMatrix s_amb = r.N1.basis() * res.s * n_basis.adjoint();
  const ComplexMatrix& qd = A.dom().basis();
  const NonnegSelfAdjointRelation lemma =
      make_nonneg(A.dom(), hermitian_part(qd.adjoint() * s_amb.adjoint() * s_amb * qd), tol);
  res.diagnostics["compression_lemma_gap"] = graph_gap(res.compression.relation(), lemma.relation());
  res.diagnostics["compression_mul_gap"] = gap(res.compression.mul(), A.mul());
  res.diagnostics["compression_below_a"] = leq(res.compression, A, tol) ? 1.0 : 0.0;
}

}  // namespace detail

/// A_{/S} = [[0, 0], [0, T*T]] with T = D_g d^(1/2)|_{D2}.
inline SchurResult schur_complement(const NonnegSelfAdjointRelation& A, const Subspace& s, const Tolerances& tol = {}) {
  SchurResult res;
  res.rep = analyze(A, s, tol);
  detail::fill_schur(A, res, tol);
  if (!(res.diagnostics["schur_lemma_gap"] < tol.eq_abs)) {
    raise(ErrorKind::InternalInconsistency,
          "two expressions for T*T differ by " + std::to_string(res.diagnostics["schur_lemma_gap"]));
  }
  return res;
}

/// A_S = S* S for the row relation S = [a^(1/2)|_{D1}, g d^(1/2)|_{D2}].
inline SchurResult compression(const NonnegSelfAdjointRelation& A, const Subspace& s, const Tolerances& tol = {}) {
  SchurResult res;
  res.rep = analyze(A, s, tol);
  detail::fill_compression(A, res, tol);
  if (!(res.diagnostics["compression_lemma_gap"] < tol.eq_abs) || res.diagnostics["compression_below_a"] != 1.0) {
    raise(ErrorKind::InternalInconsistency, "compression disagrees with s*s or is not dominated by A");
  }
  return res;
}

/// 0 <= X <= A with ran X ⊆ S⊥.
inline bool is_member(const NonnegSelfAdjointRelation& A, const Subspace& s, const NonnegSelfAdjointRelation& x,
                      const Tolerances& tol = {}) {
  if (x.dim() != A.dim() || s.ambient_dim() != A.dim()) raise(ErrorKind::DimensionMismatch, "is_member: ambient dimensions");
  return contains(complement(s, tol), x.relation().ran(tol), tol) && leq(x, A, tol);
}

struct MaximalityReport {
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
  std::int64_t violations = 0;
  double worst_margin = 0.0;  // most negative eigenvalue of G_schur - G_X seen among members
};

/// Samples members X of M(A, S⊥) and checks X <= A_{/S} for each. Even
/// samples are c A_{/S}; odd samples are random PSD operators on S⊥ ∩ M⊥,
/// M a random subspace of S⊥ ∩ mul A, plus {0} x M.
inline MaximalityReport maximality_probe(const NonnegSelfAdjointRelation& A, const Subspace& s, const SchurResult& result,
                                         std::uint64_t seed, std::int64_t samples, const Tolerances& tol = {}) {
  MaximalityReport rep;
  const Index n = A.dim();
  const Subspace sp = complement(s, tol);
  const Subspace m2 = intersect(sp, A.mul(), tol);
  const double scale = std::max(1.0, op_norm(A.op_coords()));
  for (std::int64_t i = 0; i < samples; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    NonnegSelfAdjointRelation x;
    if (i % 2 == 0) {
      x = scaled(result.schur, rng.uniform(), tol);
    } else {
      const Index mdim = static_cast<Index>(rng.integer(0, m2.dim()));
      const Subspace m = embed(Subspace::span(rng.gaussian(m2.dim(), mdim), tol), m2);
      const Subspace dom = complement(m, tol);
      const ComplexMatrix p = intersect(sp, dom, tol).projector();
      const ComplexMatrix g = rng.gaussian(n, n);
      const double size = scale * std::exp(rng.uniform(-6.0, 0.0)) / std::max(1.0, op_norm(g * g.adjoint()));
      const ComplexMatrix op = size * p * g * g.adjoint() * p;
      x = make_nonneg(dom, hermitian_part(dom.basis().adjoint() * op * dom.basis()), tol);
    }
    if (!is_member(A, s, x, tol)) {
      ++rep.rejected;
      continue;
    }
    ++rep.accepted;
    if (!leq(x, result.schur, tol)) ++rep.violations;
  }
  return rep;
}

/// Classical bounded formula: blocks w.r.t. S ⊕ S⊥, y solving b = a^(1/2) y,
/// result [[0, 0], [0, d - y*y]].
inline ComplexMatrix anderson_trapp(const ComplexMatrix& a_mat, const Subspace& s, const Tolerances& tol = {}) {
  detail::require_hermitian(a_mat, tol, "anderson_trapp");
  if (s.ambient_dim() != a_mat.rows()) raise(ErrorKind::DimensionMismatch, "anderson_trapp: subspace ambient dimension");
  const ComplexMatrix h = hermitian_part(a_mat);
  if (h.rows() > 0) {
    const double lo = min_eigenvalue(h, tol);
    if (lo < -tol.eq_abs * std::max(1.0, op_norm(h))) raise(ErrorKind::NotPSD, "anderson_trapp: eigenvalue " + std::to_string(lo));
  }
  const ComplexMatrix qs = s.basis();
  const ComplexMatrix qp = complement(s, tol).basis();
  const ComplexMatrix a = qs.adjoint() * h * qs;
  const ComplexMatrix b = qs.adjoint() * h * qp;
  const ComplexMatrix d = qp.adjoint() * h * qp;
  const ComplexMatrix y = pseudo_apply_inverse(psd_sqrt(a, tol), b, tol);
  return qp * hermitian_part(d - y.adjoint() * y) * qp.adjoint();
}

struct PekarevResult {
  NonnegSelfAdjointRelation schur_p;
  NonnegSelfAdjointRelation compression_p;
  Subspace L;
  bool cond_gg_domain = false;    // dom(d^(1/2) g*g d^(1/2)|_{D2}) = D2
  bool cond_defect_domain = false;// dom(d^(1/2) Dg^2 d^(1/2)|_{D2}) = D2
  bool cond_projection = false;   // P_L(A^(1/2)(dom A)) ⊆ dom A^(1/2)
};

inline Subspace pekarev_subspace(const NonnegSelfAdjointRelation& A, const Subspace& d1, const Tolerances& tol = {}) {
  return intersect(image(sqrt(A, tol).relation(), d1, tol), A.dom(), tol);
}

/// A^(1/2) P A^(1/2)|_{dom A} with P the projector onto L⊥ (Schur
/// complement) and onto L (compression).
inline PekarevResult pekarev(const NonnegSelfAdjointRelation& A, const Subspace& s, const Tolerances& tol = {}) {
  const BlockRepresentation r = analyze(A, s, tol);
  PekarevResult out;
  out.L = pekarev_subspace(A, r.D1, tol);

  const LinearRelation d_half = sqrt(r.d_nn, tol).relation();
  const LinearRelation d_on_d2 = d_root_on_d2(r, tol);
  const Subspace d2c = r.D2_coords(tol);
  const ComplexMatrix id = ComplexMatrix::Identity(r.g.cols(), r.g.cols());
  const LinearRelation gg = compose(d_half, compose(LinearRelation::from_matrix(r.g.adjoint() * r.g, tol), d_on_d2, tol), tol);
  const LinearRelation dd = compose(d_half, compose(LinearRelation::from_matrix(r.Dg * r.Dg, tol), d_on_d2, tol), tol);
  out.cond_gg_domain = same(gg.dom(tol), d2c, tol);
  out.cond_defect_domain = same(dd.dom(tol), d2c, tol);

  const LinearRelation half = sqrt(A, tol).relation();
  const Subspace img = image(half, A.dom(), tol);
  out.cond_projection = contains(A.dom(), Subspace::span(out.L.project(img.basis()), tol), tol);
  if (!(out.cond_gg_domain && out.cond_defect_domain && out.cond_projection)) {
    raise(ErrorKind::ConditionViolated, "pekarev: domain conditions fail");
  }

  const LinearRelation on_dom = restrict(half, A.dom(), tol);
  const ComplexMatrix pl = out.L.projector();
  const ComplexMatrix pl_perp = ComplexMatrix::Identity(A.dim(), A.dim()) - pl;
  out.schur_p = validate(compose(half, left_multiply(pl_perp, on_dom, tol), tol), tol);
  out.compression_p = validate(compose(half, left_multiply(pl, on_dom, tol), tol), tol);
  return out;
}

/// The three equivalent conditions for A = A_S + A_{/S}, and the sum itself.
struct AdditiveDecomposition {
  NonnegSelfAdjointRelation compression;
  NonnegSelfAdjointRelation schur;
  bool dom_in_compression_dom = false;  // dom A ⊆ dom A_S
  bool projection_condition = false;    // P_L(A^(1/2)(dom A)) ⊆ dom A^(1/2)
  bool sum_equals = false;              // A_S + A_{/S} = A
  double sum_gap = 1.0;

  bool verified() const { return dom_in_compression_dom && projection_condition && sum_equals; }
};

inline AdditiveDecomposition additive_decomposition(const NonnegSelfAdjointRelation& A, const Subspace& s,
                                                    const Tolerances& tol = {}) {
  SchurResult res;
  res.rep = analyze(A, s, tol);
  detail::fill_schur(A, res, tol);
  detail::fill_compression(A, res, tol);
  AdditiveDecomposition out;
  out.compression = res.compression;
  out.schur = res.schur;
  out.dom_in_compression_dom = contains(res.compression.dom(), A.dom(), tol);
  const Subspace L = pekarev_subspace(A, res.rep.D1, tol);
  const Subspace img = image(sqrt(A, tol).relation(), A.dom(), tol);
  out.projection_condition = contains(A.dom(), Subspace::span(L.project(img.basis()), tol), tol);
  out.sum_gap = graph_gap(add(res.compression.relation(), res.schur.relation(), tol), A.relation());
  out.sum_equals = out.sum_gap < tol.eq_abs;
  return out;
}

/// Schur complement, compression and L in one pass, with all diagnostics.
inline SchurResult schur_analysis(const NonnegSelfAdjointRelation& A, const Subspace& s, const Tolerances& tol = {}) {
  SchurResult res;
  res.rep = analyze(A, s, tol);
  detail::fill_schur(A, res, tol);
  detail::fill_compression(A, res, tol);
  res.L = pekarev_subspace(A, res.rep.D1, tol);
  res.diagnostics["additive_gap"] = graph_gap(add(res.compression.relation(), res.schur.relation(), tol), A.relation());
  return res;
}

}  // namespace linrel
