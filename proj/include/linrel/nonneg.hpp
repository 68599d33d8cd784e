#pragma once

#include <algorithm>
#include <utility>

#include "linrel/relation.hpp"

namespace linrel {

/// A relation known to be selfadjoint and nonnegative. Holds the operator
/// part in coordinates of an orthonormal basis of dom A, and its square root.
class NonnegSelfAdjointRelation {
 public:
  /// The trivial relation on C^0.
  NonnegSelfAdjointRelation() = default;

  const LinearRelation& relation() const { return rel_; }
  Index dim() const { return rel_.dim_in(); }
  const Subspace& dom() const { return dom_; }
  const Subspace& mul() const { return mul_; }

  /// Operator part in dom coordinates: Q* A0 Q.
  const ComplexMatrix& op_coords() const { return op_; }
  const ComplexMatrix& root_coords() const { return root_; }

  /// A0 and A0^(1/2) as n x n matrices vanishing on mul A.
  ComplexMatrix op_matrix() const { return dom_.basis() * op_ * dom_.basis().adjoint(); }
  ComplexMatrix root_matrix() const { return dom_.basis() * root_ * dom_.basis().adjoint(); }

  OperatorPartDecomposition operator_part() const {
    return OperatorPartDecomposition{dom_, ComplexMatrix(dom_.basis() * op_), mul_};
  }

  friend NonnegSelfAdjointRelation make_nonneg(const Subspace&, const ComplexMatrix&, const Tolerances&);

 private:
  NonnegSelfAdjointRelation(LinearRelation rel, Subspace dom, Subspace mul, ComplexMatrix op, ComplexMatrix root)
      : rel_(std::move(rel)), dom_(std::move(dom)), mul_(std::move(mul)), op_(std::move(op)), root_(std::move(root)) {}

  LinearRelation rel_{0, 0, Subspace::zero(0)};
  Subspace dom_{Subspace::zero(0)};
  Subspace mul_{Subspace::zero(0)};
  ComplexMatrix op_{ComplexMatrix(0, 0)};
  ComplexMatrix root_{ComplexMatrix(0, 0)};
};

/// h ⊕̂ ({0} x dom⊥) where h is Hermitian PSD in coordinates of `domain`.
inline NonnegSelfAdjointRelation make_nonneg(const Subspace& domain, const ComplexMatrix& h, const Tolerances& tol = {}) {
  if (h.rows() != domain.dim() || h.cols() != domain.dim()) raise(ErrorKind::DimensionMismatch, "make_nonneg: shape");
  detail::require_hermitian(h, tol, "make_nonneg");
  const ComplexMatrix sym = hermitian_part(h);
  ComplexMatrix root;
  try {
    root = psd_sqrt(sym, tol);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotPSD) throw;
    raise(ErrorKind::NotNonnegative, std::string("operator part has eigenvalue ") + std::to_string(min_eigenvalue(sym, tol)));
  }
  Subspace mul = complement(domain, tol);
  LinearRelation rel = LinearRelation::from_operator_and_mul(domain, ComplexMatrix(domain.basis() * sym), mul, tol);
  return NonnegSelfAdjointRelation(std::move(rel), domain, std::move(mul), sym, std::move(root));
}

/// Recognizes T as nonnegative selfadjoint: T = T* and T0 PSD on dom T.
inline NonnegSelfAdjointRelation validate(const LinearRelation& t, const Tolerances& tol = {}) {
  tol.check();
  if (t.dim_in() != t.dim_out()) raise(ErrorKind::DimensionMismatch, "validate: relation is not square");
  const double g = graph_gap(t, adjoint(t, tol));
  if (!(g < tol.eq_abs)) raise(ErrorKind::NotSelfAdjoint, "gap(T, T*) = " + std::to_string(g));
  const auto part = operator_part(t, tol);
  const ComplexMatrix h = part.t0_domain.basis().adjoint() * part.t0_matrix;
  try {
    return make_nonneg(part.t0_domain, hermitian_part(h), tol);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotNonnegative) throw;
    raise(ErrorKind::NotSelfAdjoint, e.what());
  }
}

/// A^(1/2) = A0^(1/2) ⊕̂ ({0} x mul A).
inline NonnegSelfAdjointRelation sqrt(const NonnegSelfAdjointRelation& a, const Tolerances& tol = {}) {
  return make_nonneg(a.dom(), a.root_coords(), tol);
}

/// c A0 ⊕̂ ({0} x mul A) for c >= 0.
inline NonnegSelfAdjointRelation scaled(const NonnegSelfAdjointRelation& a, double c, const Tolerances& tol = {}) {
  if (!(c >= 0.0)) raise(ErrorKind::NotNonnegative, "scaled: negative factor");
  return make_nonneg(a.dom(), c * a.op_coords(), tol);
}

/// Forms ordering A <= B: dom B0^(1/2) ⊆ dom A0^(1/2) and
/// ||A0^(1/2) u|| <= ||B0^(1/2) u|| on dom B0^(1/2).
inline bool leq(const NonnegSelfAdjointRelation& a, const NonnegSelfAdjointRelation& b, const Tolerances& tol = {}) {
  if (a.dim() != b.dim()) raise(ErrorKind::DimensionMismatch, "leq: ambient dimensions differ");
  if (!contains(a.dom(), b.dom(), tol)) return false;
  const ComplexMatrix& u = b.dom().basis();
  const ComplexMatrix ra = a.root_matrix() * u;
  const ComplexMatrix rb = b.root_matrix() * u;
  const ComplexMatrix gb = rb.adjoint() * rb;
  const ComplexMatrix diff = hermitian_part(gb - ra.adjoint() * ra);
  return min_eigenvalue(diff, tol) >= -tol.eq_abs * (1.0 + op_norm(gb));
}

/// Contraction W with W B0^(1/2) = A0^(1/2) on dom B, zero off ran B0^(1/2).
inline ComplexMatrix order_contraction(const NonnegSelfAdjointRelation& a, const NonnegSelfAdjointRelation& b,
                                       const Tolerances& tol = {}) {
  if (!leq(a, b, tol)) raise(ErrorKind::OrderViolated, "order_contraction: A <= B fails");
  return a.root_matrix() * pseudo_inverse(b.root_matrix(), tol);
}

/// Gaps of the identities satisfied by T*T.
struct GramIdentities {
  double star_t0 = 0.0;     // T*T vs T*T0
  double t0star_t0 = 0.0;   // T*T vs T0*T0
  double kernel = 0.0;      // ker T*T vs ker T
  double mul = 0.0;         // mul T*T vs mul T*
  double op_part = 0.0;     // (T*T)0 vs (T*)0 T0

  double worst() const { return std::max({star_t0, t0star_t0, kernel, mul, op_part}); }
};

inline GramIdentities gram_identities(const LinearRelation& t, const LinearRelation& gram_rel, const Tolerances& tol = {}) {
  GramIdentities out;
  const LinearRelation t_star = adjoint(t, tol);
  const LinearRelation t0 = operator_part(t, tol).t0(tol);
  out.star_t0 = graph_gap(gram_rel, compose(t_star, t0, tol));
  out.t0star_t0 = graph_gap(gram_rel, compose(adjoint(t0, tol), t0, tol));
  out.kernel = gap(gram_rel.ker(tol), t.ker(tol));
  out.mul = gap(gram_rel.mul(tol), t_star.mul(tol));
  const LinearRelation star0 = operator_part(t_star, tol).t0(tol);
  out.op_part = graph_gap(operator_part(gram_rel, tol).t0(tol), compose(star0, t0, tol));
  return out;
}

/// T*T, validated, with its defining identities checked.
inline NonnegSelfAdjointRelation gram(const LinearRelation& t, const Tolerances& tol = {}) {
  const LinearRelation product = compose(adjoint(t, tol), t, tol);
  auto out = validate(product, tol);
  const auto ids = gram_identities(t, product, tol);
  if (!(ids.worst() < tol.eq_abs)) {
    raise(ErrorKind::InternalInconsistency, "T*T identities fail by " + std::to_string(ids.worst()));
  }
  return out;
}

/// Finite-dimensional Friedrichs extension T0 ⊕̂ ({0} x dom(T)⊥) of a
/// nonnegative symmetric relation.
inline NonnegSelfAdjointRelation friedrichs(const LinearRelation& t, const Tolerances& tol = {}) {
  if (t.dim_in() != t.dim_out()) raise(ErrorKind::DimensionMismatch, "friedrichs: relation is not square");
  if (!includes(adjoint(t, tol), t, tol)) raise(ErrorKind::NotSymmetric, "friedrichs: T is not contained in T*");
  const auto part = operator_part(t, tol);
  const ComplexMatrix h = part.t0_domain.basis().adjoint() * part.t0_matrix;
  return make_nonneg(part.t0_domain, hermitian_part(h), tol);
}

}  // namespace linrel
