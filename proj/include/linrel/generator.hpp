#pragma once

#include <cstdint>
#include <utility>

#include "linrel/nonneg.hpp"
#include "linrel/random.hpp"

namespace linrel {

struct InstanceSpec {
  Index n = 2;       // ambient dimension
  Index k = 1;       // dim S
  Index d1 = 1;      // dim(S ∩ dom A)
  Index d2 = 1;      // dim(S⊥ ∩ dom A)
  std::uint64_t seed = 0;
  double spectrum_scale = 1.0;

  void check() const {
    if (n < 0 || k < 0 || k > n || d1 < 0 || d1 > k || d2 < 0 || d2 > n - k) {
      raise(ErrorKind::SpecInvalid, "instance spec needs 0 <= d1 <= k <= n and 0 <= d2 <= n - k");
    }
    if (!(spectrum_scale > 0.0) || !std::isfinite(spectrum_scale)) raise(ErrorKind::SpecInvalid, "spectrum_scale must be positive");
  }
};

struct Instance {
  NonnegSelfAdjointRelation A;
  Subspace S;
};

/// Random subspace of dimension `dim` inside the span of the orthonormal
/// columns of `within`.
inline Subspace random_subspace(Rng& rng, const ComplexMatrix& within, Index dim, const Tolerances& tol = {}) {
  const ComplexMatrix frame = orthonormal_columns(rng.gaussian(within.cols(), dim), tol);
  return Subspace::from_orthonormal(within * frame);
}

/// S first, then D1 ⊆ S and D2 ⊆ S⊥, so P_S(dom A) ⊆ dom A by construction.
inline Instance generate(const InstanceSpec& spec, const Tolerances& tol = {}) {
  spec.check();
  Rng rng(spec.seed);
  const Subspace s = random_subspace(rng, ComplexMatrix::Identity(spec.n, spec.n), spec.k, tol);
  const Subspace d1 = random_subspace(rng, s.basis(), spec.d1, tol);
  const Subspace d2 = random_subspace(rng, complement(s, tol).basis(), spec.d2, tol);
  ComplexMatrix dom_basis(spec.n, spec.d1 + spec.d2);
  dom_basis << d1.basis(), d2.basis();
  const Subspace dom = Subspace::from_orthonormal(dom_basis);

  const Index r = dom.dim();
  const ComplexMatrix u = orthonormal_columns(rng.gaussian(r, r), tol);
  RealVector lambda(r);
  for (Index i = 0; i < r; ++i) {
    // an exact zero now and then so kernels get exercised
    lambda(i) = rng.uniform() < 0.15 ? 0.0 : spec.spectrum_scale * rng.uniform();
  }
  const ComplexMatrix h = (r == u.cols()) ? ComplexMatrix(u * lambda.asDiagonal() * u.adjoint())
                                          : ComplexMatrix(ComplexMatrix::Zero(r, r));
  return {make_nonneg(dom, hermitian_part(h), tol), s};
}

/// Random relation C^n -> C^m: an operator on a random domain plus a random
/// multivalued part.
inline LinearRelation random_relation(Rng& rng, Index n, Index m, const Tolerances& tol = {}) {
  const Index dom_dim = rng.integer(0, n);
  const Index mul_dim = rng.integer(0, m);
  const ComplexMatrix dom = orthonormal_columns(rng.gaussian(n, dom_dim), tol);
  const ComplexMatrix mul = orthonormal_columns(rng.gaussian(m, mul_dim), tol);
  ComplexMatrix op = rng.gaussian(m, dom.cols());
  if (dom.cols() > 1 && rng.uniform() < 0.3) op.col(0).setZero();  // a kernel vector
  return LinearRelation::from_operator_and_mul(Subspace::from_orthonormal(dom), op, Subspace::from_orthonormal(mul), tol);
}

}  // namespace linrel
