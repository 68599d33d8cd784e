#pragma once

#include <utility>
#include <vector>

#include "linrel/subspace.hpp"

namespace linrel {

/// A linear relation from C^n to C^m: a subspace of C^(n+m). The first n
/// coordinates of a graph vector are the input x, the last m the output y.
class LinearRelation {
 public:
  LinearRelation() = default;

  LinearRelation(Index dim_in, Index dim_out, Subspace graph)
      : dim_in_(dim_in), dim_out_(dim_out), graph_(std::move(graph)) {
    if (graph_.ambient_dim() != dim_in + dim_out) {
      raise(ErrorKind::DimensionMismatch, "relation graph has the wrong ambient dimension");
    }
  }

  /// Columns of `pairs` are stacked (x, y) with x of length dim_in.
  static LinearRelation from_graph(const ComplexMatrix& pairs, Index dim_in, Index dim_out,
                                   const Tolerances& tol = {}) {
    if (pairs.rows() != dim_in + dim_out) raise(ErrorKind::DimensionMismatch, "from_graph: pair length");
    return LinearRelation(dim_in, dim_out, Subspace::span(pairs, tol));
  }

  /// Graph {(x, Mx)} of an everywhere defined m x n matrix.
  static LinearRelation from_matrix(const ComplexMatrix& m, const Tolerances& tol = {}) {
    ComplexMatrix pairs(m.cols() + m.rows(), m.cols());
    pairs << ComplexMatrix::Identity(m.cols(), m.cols()), m;
    return from_graph(pairs, m.cols(), m.rows(), tol);
  }

  /// {(x, Kx)} for x in `domain` plus {0} x `mul`. `matrix_on_domain` is
  /// dim_out x dim(domain) and acts on coordinates in the domain basis.
  static LinearRelation from_operator_and_mul(const Subspace& domain, const ComplexMatrix& matrix_on_domain,
                                              const Subspace& mul, const Tolerances& tol = {}) {
    const Index n = domain.ambient_dim();
    const Index m = mul.ambient_dim();
    if (matrix_on_domain.rows() != m || matrix_on_domain.cols() != domain.dim()) {
      raise(ErrorKind::DimensionMismatch, "from_operator_and_mul: matrix shape does not fit domain and mul");
    }
    ComplexMatrix pairs = ComplexMatrix::Zero(n + m, domain.dim() + mul.dim());
    pairs.topLeftCorner(n, domain.dim()) = domain.basis();
    pairs.bottomLeftCorner(m, domain.dim()) = matrix_on_domain;
    pairs.bottomRightCorner(m, mul.dim()) = mul.basis();
    return from_graph(pairs, n, m, tol);
  }

  static LinearRelation zero(Index dim_in, Index dim_out) {
    return from_matrix(ComplexMatrix::Zero(dim_out, dim_in));
  }

  /// {0} x mul.
  static LinearRelation pure_mul(Index dim_in, const Subspace& mul) {
    return LinearRelation(dim_in, mul.ambient_dim(), product(Subspace::zero(dim_in), mul));
  }

  Index dim_in() const { return dim_in_; }
  Index dim_out() const { return dim_out_; }
  const Subspace& graph() const { return graph_; }

  /// Input and output rows of the graph basis.
  ComplexMatrix x_part() const { return graph_.basis().topRows(dim_in_); }
  ComplexMatrix y_part() const { return graph_.basis().bottomRows(dim_out_); }

  Subspace dom(const Tolerances& tol = {}) const { return Subspace::span(x_part(), tol); }
  Subspace ran(const Tolerances& tol = {}) const { return Subspace::span(y_part(), tol); }

  Subspace mul(const Tolerances& tol = {}) const {
    return Subspace::span(ComplexMatrix(y_part() * null_space(x_part(), tol)), tol);
  }

  Subspace ker(const Tolerances& tol = {}) const {
    return Subspace::span(ComplexMatrix(x_part() * null_space(y_part(), tol)), tol);
  }

 private:
  Index dim_in_ = 0;
  Index dim_out_ = 0;
  Subspace graph_;
};

namespace detail {

inline void require_dims(const LinearRelation& t, Index n, Index m, const char* what) {
  if (t.dim_in() != n || t.dim_out() != m) raise(ErrorKind::DimensionMismatch, std::string(what) + ": dimensions differ");
}

// Rows of the linear constraint "(v[x_off..], v[y_off..]) lies in graph t"
// for a vector v of length `total`.
inline ComplexMatrix membership_rows(const LinearRelation& t, Index x_off, Index y_off, Index total,
                                     const Tolerances& tol) {
  const ComplexMatrix c = complement(t.graph(), tol).basis().adjoint();
  ComplexMatrix rows = ComplexMatrix::Zero(c.rows(), total);
  rows.middleCols(x_off, t.dim_in()) = c.leftCols(t.dim_in());
  rows.middleCols(y_off, t.dim_out()) += c.rightCols(t.dim_out());
  return rows;
}

inline ComplexMatrix stack_rows(const std::vector<ComplexMatrix>& parts, Index cols) {
  Index total = 0;
  for (const auto& p : parts) total += p.rows();
  ComplexMatrix out(total, cols);
  Index at = 0;
  for (const auto& p : parts) {
    out.middleRows(at, p.rows()) = p;
    at += p.rows();
  }
  return out;
}

}  // namespace detail

/// Closure is the identity in finite dimensions.
inline const LinearRelation& closure(const LinearRelation& t) { return t; }

/// T* = J(T⊥) with J(x, y) = (y, -x).
inline LinearRelation adjoint(const LinearRelation& t, const Tolerances& tol = {}) {
  const ComplexMatrix c = complement(t.graph(), tol).basis();
  ComplexMatrix j(c.rows(), c.cols());
  j << c.bottomRows(t.dim_out()), -c.topRows(t.dim_in());
  return LinearRelation(t.dim_out(), t.dim_in(), Subspace::from_orthonormal(std::move(j)));
}

/// T + S = {(x, y + z) : (x, y) in T, (x, z) in S}.
inline LinearRelation add(const LinearRelation& t, const LinearRelation& s, const Tolerances& tol = {}) {
  detail::require_dims(s, t.dim_in(), t.dim_out(), "add");
  const Index n = t.dim_in();
  const Index m = t.dim_out();
  const Index total = n + 2 * m;
  const ComplexMatrix free = null_space(
      detail::stack_rows({detail::membership_rows(t, 0, n, total, tol), detail::membership_rows(s, 0, n + m, total, tol)},
                         total),
      tol);
  ComplexMatrix pairs(n + m, free.cols());
  pairs << free.topRows(n), free.middleRows(n, m) + free.bottomRows(m);
  return LinearRelation::from_graph(pairs, n, m, tol);
}

/// Componentwise sum: the subspace sum of the graphs.
inline LinearRelation cw_sum(const LinearRelation& t, const LinearRelation& s, const Tolerances& tol = {}) {
  detail::require_dims(s, t.dim_in(), t.dim_out(), "cw_sum");
  return LinearRelation(t.dim_in(), t.dim_out(), sum(t.graph(), s.graph(), tol));
}

/// Product ST = {(x, y) : (x, z) in T, (z, y) in S for some z}.
inline LinearRelation compose(const LinearRelation& s, const LinearRelation& t, const Tolerances& tol = {}) {
  if (t.dim_out() != s.dim_in()) raise(ErrorKind::DimensionMismatch, "compose: inner dimensions differ");
  const Index n = t.dim_in();
  const Index e = t.dim_out();
  const Index m = s.dim_out();
  const Index total = n + e + m;
  const ComplexMatrix free = null_space(
      detail::stack_rows({detail::membership_rows(t, 0, n, total, tol), detail::membership_rows(s, n, n + e, total, tol)},
                         total),
      tol);
  ComplexMatrix pairs(n + m, free.cols());
  pairs << free.topRows(n), free.bottomRows(m);
  return LinearRelation::from_graph(pairs, n, m, tol);
}

/// T|_U = T ∩ (U x K).
inline LinearRelation restrict(const LinearRelation& t, const Subspace& u, const Tolerances& tol = {}) {
  if (u.ambient_dim() != t.dim_in()) raise(ErrorKind::DimensionMismatch, "restrict: subspace lives elsewhere");
  return LinearRelation(t.dim_in(), t.dim_out(),
                        intersect(t.graph(), product(u, Subspace::full(t.dim_out())), tol));
}

/// T(U) = {y : (x, y) in T, x in U}.
inline Subspace image(const LinearRelation& t, const Subspace& u, const Tolerances& tol = {}) {
  return restrict(t, u, tol).ran(tol);
}

/// {(x, M y) : (x, y) in T}.
inline LinearRelation left_multiply(const ComplexMatrix& m, const LinearRelation& t, const Tolerances& tol = {}) {
  if (m.cols() != t.dim_out()) raise(ErrorKind::DimensionMismatch, "left_multiply: shape");
  ComplexMatrix pairs(t.dim_in() + m.rows(), t.graph().dim());
  pairs << t.x_part(), m * t.y_part();
  return LinearRelation::from_graph(pairs, t.dim_in(), m.rows(), tol);
}

/// {(Mx, y) : (x, y) in T} for invertible-on-coordinates changes of input
/// variables; used to move relations between ambient and coordinate spaces.
inline LinearRelation map_pairs(const ComplexMatrix& in_map, const ComplexMatrix& out_map, const LinearRelation& t,
                                const Tolerances& tol = {}) {
  if (in_map.cols() != t.dim_in() || out_map.cols() != t.dim_out()) raise(ErrorKind::DimensionMismatch, "map_pairs: shape");
  ComplexMatrix pairs(in_map.rows() + out_map.rows(), t.graph().dim());
  pairs << in_map * t.x_part(), out_map * t.y_part();
  return LinearRelation::from_graph(pairs, in_map.rows(), out_map.rows(), tol);
}

inline double graph_gap(const LinearRelation& t, const LinearRelation& s) {
  detail::require_dims(s, t.dim_in(), t.dim_out(), "graph_gap");
  return gap(t.graph(), s.graph());
}

inline bool equals(const LinearRelation& t, const LinearRelation& s, const Tolerances& tol = {}) {
  return graph_gap(t, s) < tol.eq_abs;
}

/// True when S ⊆ T.
inline bool includes(const LinearRelation& t, const LinearRelation& s, const Tolerances& tol = {}) {
  detail::require_dims(s, t.dim_in(), t.dim_out(), "includes");
  return contains(t.graph(), s.graph(), tol);
}

/// T = T0 ⊕̂ ({0} x mul T) with T0 single valued on dom T.
struct OperatorPartDecomposition {
  Subspace t0_domain;
  ComplexMatrix t0_matrix;  // dim_out x dim(t0_domain), in domain coordinates
  Subspace mul;

  /// T0 as an n x m matrix vanishing on dom(T)⊥.
  ComplexMatrix embedded() const { return t0_matrix * t0_domain.basis().adjoint(); }

  LinearRelation t0(const Tolerances& tol = {}) const {
    return LinearRelation::from_operator_and_mul(t0_domain, t0_matrix, Subspace::zero(mul.ambient_dim()), tol);
  }

  LinearRelation reassemble(const Tolerances& tol = {}) const {
    return LinearRelation::from_operator_and_mul(t0_domain, t0_matrix, mul, tol);
  }
};

inline OperatorPartDecomposition operator_part(const LinearRelation& t, const Tolerances& tol = {}) {
  OperatorPartDecomposition out;
  out.t0_domain = t.dom(tol);
  out.mul = t.mul(tol);
  const Subspace target = product(out.t0_domain, complement(out.mul, tol));
  const Subspace t0 = intersect(t.graph(), target, tol);
  const ComplexMatrix x = t0.basis().topRows(t.dim_in());
  if (t0.dim() != out.t0_domain.dim() || detail::thin_svd(x, tol).rank != t0.dim()) {
    raise(ErrorKind::InternalInconsistency, "operator part is not single valued on dom T");
  }
  // express each domain basis vector through the graph basis, then read off y
  const ComplexMatrix coeff = pseudo_apply_inverse(x, out.t0_domain.basis(), tol);
  out.t0_matrix = t0.basis().bottomRows(t.dim_out()) * coeff;
  return out;
}

}  // namespace linrel
