#pragma once

#include <utility>
#include <vector>

#include "linrel/kernel.hpp"

namespace linrel {

/// A subspace of C^n held as an orthonormal basis. Two subspaces are equal
/// when their gap is below eq_abs; basis matrices are never compared.
class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(Index ambient) { return Subspace(ambient, ComplexMatrix(ambient, 0)); }
  static Subspace full(Index ambient) { return Subspace(ambient, ComplexMatrix::Identity(ambient, ambient)); }

  /// Span of the columns of `vectors` (need not be independent or orthonormal).
  static Subspace span(const ComplexMatrix& vectors, const Tolerances& tol = {}) {
    return Subspace(vectors.rows(), orthonormal_columns(vectors, tol));
  }

  static Subspace span(const std::vector<ComplexVector>& vectors, Index ambient, const Tolerances& tol = {}) {
    ComplexMatrix m(ambient, static_cast<Index>(vectors.size()));
    for (std::size_t j = 0; j < vectors.size(); ++j) {
      if (vectors[j].size() != ambient) raise(ErrorKind::DimensionMismatch, "span: vector length differs from ambient dimension");
      m.col(static_cast<Index>(j)) = vectors[j];
    }
    return span(m, tol);
  }

  /// Wraps a basis the caller already knows to be orthonormal.
  static Subspace from_orthonormal(ComplexMatrix basis) {
    const Index n = basis.rows();
    return Subspace(n, std::move(basis));
  }

  Index ambient_dim() const { return ambient_; }
  Index dim() const { return basis_.cols(); }
  const ComplexMatrix& basis() const { return basis_; }

  ComplexMatrix projector() const { return basis_ * basis_.adjoint(); }

  /// P_U applied to the columns of m.
  ComplexMatrix project(const ComplexMatrix& m) const { return basis_ * (basis_.adjoint() * m); }

 private:
  Subspace(Index ambient, ComplexMatrix basis) : ambient_(ambient), basis_(std::move(basis)) {}

  Index ambient_ = 0;
  ComplexMatrix basis_{ComplexMatrix(0, 0)};
};

namespace detail {

inline void require_same_ambient(const Subspace& u, const Subspace& v, const char* what) {
  if (u.ambient_dim() != v.ambient_dim()) {
    raise(ErrorKind::DimensionMismatch, std::string(what) + ": ambient dimensions differ");
  }
}

}  // namespace detail

inline ComplexMatrix projector(const Subspace& u) { return u.projector(); }

inline Subspace complement(const Subspace& u, const Tolerances& tol = {}) {
  if (u.dim() == 0) return Subspace::full(u.ambient_dim());
  return Subspace::from_orthonormal(null_space(u.basis().adjoint(), tol));
}

inline Subspace sum(const Subspace& u, const Subspace& v, const Tolerances& tol = {}) {
  detail::require_same_ambient(u, v, "sum");
  ComplexMatrix both(u.ambient_dim(), u.dim() + v.dim());
  both << u.basis(), v.basis();
  return Subspace::span(both, tol);
}

/// Intersection of any number of subspaces: the null space of the stacked
/// adjoints of their complements.
inline Subspace intersect_all(const std::vector<Subspace>& parts, const Tolerances& tol = {}) {
  if (parts.empty()) raise(ErrorKind::DimensionMismatch, "intersect_all: no subspaces");
  const Index n = parts.front().ambient_dim();
  std::vector<ComplexMatrix> rows;
  Index total = 0;
  for (const auto& p : parts) {
    detail::require_same_ambient(parts.front(), p, "intersect");
    if (p.dim() == n) continue;
    rows.push_back(complement(p, tol).basis().adjoint());
    total += rows.back().rows();
  }
  if (total == 0) return Subspace::full(n);
  ComplexMatrix stacked(total, n);
  Index at = 0;
  for (const auto& r : rows) {
    stacked.middleRows(at, r.rows()) = r;
    at += r.rows();
  }
  return Subspace::from_orthonormal(null_space(stacked, tol));
}

inline Subspace intersect(const Subspace& u, const Subspace& v, const Tolerances& tol = {}) {
  return intersect_all({u, v}, tol);
}

/// ||P_U - P_V|| in operator norm. Subspaces of different dimension are at
/// gap exactly 1.
inline double gap(const Subspace& u, const Subspace& v) {
  detail::require_same_ambient(u, v, "gap");
  if (u.dim() != v.dim()) return 1.0;
  if (u.dim() == 0) return 0.0;
  // for equal dimensions the gap is the sine of the largest principal angle
  return std::min(1.0, op_norm(u.basis() - v.project(u.basis())));
}

/// True when V is contained in U up to eq_abs.
inline bool contains(const Subspace& u, const Subspace& v, const Tolerances& tol = {}) {
  detail::require_same_ambient(u, v, "contains");
  if (v.dim() == 0) return true;
  return op_norm(v.basis() - u.project(v.basis())) <= tol.eq_abs;
}

inline bool same(const Subspace& u, const Subspace& v, const Tolerances& tol = {}) {
  return gap(u, v) < tol.eq_abs;
}

/// Coordinates of the basis of U with respect to the basis of V (U inside V).
inline ComplexMatrix coordinates_in(const Subspace& u, const Subspace& v) {
  detail::require_same_ambient(u, v, "coordinates_in");
  return v.basis().adjoint() * u.basis();
}

/// The subspace of C^dim(V) given by the coordinates of U inside V.
inline Subspace relative_to(const Subspace& u, const Subspace& v, const Tolerances& tol = {}) {
  return Subspace::span(coordinates_in(u, v), tol);
}

/// The subspace of the ambient space whose V-coordinates are spanned by `coords`.
inline Subspace embed(const Subspace& coords, const Subspace& v) {
  if (coords.ambient_dim() != v.dim()) raise(ErrorKind::DimensionMismatch, "embed: coordinate space mismatch");
  return Subspace::from_orthonormal(v.basis() * coords.basis());
}

/// Direct product U x V inside C^(n+m).
inline Subspace product(const Subspace& u, const Subspace& v) {
  ComplexMatrix b = ComplexMatrix::Zero(u.ambient_dim() + v.ambient_dim(), u.dim() + v.dim());
  b.topLeftCorner(u.ambient_dim(), u.dim()) = u.basis();
  b.bottomRightCorner(v.ambient_dim(), v.dim()) = v.basis();
  return Subspace::from_orthonormal(std::move(b));
}

/// Outcome of the invariance test P_S(M) ⊆ M, with the two equivalent
/// reformulations evaluated independently.
struct InvarianceReport {
  bool projection_inside = false;  // P_S(M) ⊆ M
  bool splits = false;             // M = (S ∩ M) ⊕ (S⊥ ∩ M)
  bool projection_is_meet = false; // P_S(M) = S ∩ M
  ComplexVector witness;           // x in M with P_S x furthest from M (empty when invariant)

  bool invariant() const { return projection_inside; }
  bool consistent() const { return projection_inside == splits && splits == projection_is_meet; }
};

inline InvarianceReport invariance_report(const Subspace& m, const Subspace& s, const Tolerances& tol = {}) {
  detail::require_same_ambient(m, s, "is_invariant");
  InvarianceReport rep;
  const ComplexMatrix ps_m = s.project(m.basis());
  const ComplexMatrix leak = ps_m - m.project(ps_m);
  rep.projection_inside = m.dim() == 0 || op_norm(leak) <= tol.eq_abs;
  if (!rep.projection_inside) {
    Eigen::JacobiSVD<ComplexMatrix> svd(leak, Eigen::ComputeThinV);
    rep.witness = m.basis() * svd.matrixV().col(0);
  }
  const Subspace s_perp = complement(s, tol);
  const Subspace s_m = intersect(s, m, tol);
  const Subspace sp_m = intersect(s_perp, m, tol);
  rep.splits = same(m, sum(s_m, sp_m, tol), tol);
  rep.projection_is_meet = same(Subspace::span(ps_m, tol), s_m, tol);
  return rep;
}

inline bool is_invariant(const Subspace& m, const Subspace& s, const Tolerances& tol = {}) {
  return invariance_report(m, s, tol).invariant();
}

}  // namespace linrel
