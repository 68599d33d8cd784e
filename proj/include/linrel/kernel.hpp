#pragma once

// Dense complex linear algebra primitives. Every numerical rank decision in
// the library goes through rank_cutoff(), so all modules share one policy.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "linrel/errors.hpp"

namespace linrel {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Numerical thresholds shared by every operation.
///
/// rank_rel decides numerical rank (see rank_cutoff); eq_abs is the absolute
/// threshold used for subspace gaps, containment and PSD tests.
struct Tolerances {
  double rank_rel = 1e-10;
  double eq_abs = 1e-8;

  void check() const {
    if (!(rank_rel > 0.0 && rank_rel < 1.0) || !(eq_abs > 0.0 && eq_abs < 1.0)) {
      raise(ErrorKind::InvalidTolerance, "tolerances must lie in (0, 1)");
    }
  }
};

/// Singular values strictly above this value count towards rank.
inline double rank_cutoff(double sigma_max, const Tolerances& tol) {
  return tol.rank_rel * std::max(sigma_max, 1.0);
}

inline bool all_finite(const ComplexMatrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

/// Largest singular value; 0 for empty matrices.
inline double op_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

struct HermitianEig {
  RealVector values;     // ascending
  ComplexMatrix vectors; // unitary, column j belongs to values(j)
};

namespace detail {

inline void require_square(const ComplexMatrix& h, const char* what) {
  if (h.rows() != h.cols()) raise(ErrorKind::DimensionMismatch, std::string(what) + ": matrix is not square");
}

inline void require_hermitian(const ComplexMatrix& h, const Tolerances& tol, const char* what) {
  require_square(h, what);
  const double skew = (h - h.adjoint()).norm();
  if (skew > tol.eq_abs * (1.0 + h.norm())) {
    raise(ErrorKind::NotHermitian, std::string(what) + ": ||H - H*|| = " + std::to_string(skew));
  }
}

// Cyclic Jacobi for a Hermitian matrix. Each rotation is the real symmetric
// 2x2 Jacobi rotation preceded by the phase that makes a(p,q) real.
inline HermitianEig jacobi_hermitian(ComplexMatrix a) {
  const Index n = a.rows();
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double eps = std::numeric_limits<double>::epsilon();
  const double scale = a.norm();

  for (int sweep = 0; sweep < 64 && n > 1; ++sweep) {
    double off = 0.0;
    for (Index q = 1; q < n; ++q)
      for (Index p = 0; p < q; ++p) off += std::norm(a(p, q));
    if (off == 0.0 || std::sqrt(off) <= eps * eps * scale) break;

    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // after a few sweeps, entries below the diagonal's resolution are zeroed directly
        if (sweep > 3 && std::abs(app) + 100.0 * r == std::abs(app) &&
            std::abs(aqq) + 100.0 * r == std::abs(aqq)) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const Complex phase = a(p, q) / r;  // e^{i phi}
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex ph_conj = std::conj(phase);

        // A <- A U with U = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
        for (Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - s * ph_conj * akq;
          a(k, q) = s * akp + c * ph_conj * akq;
        }
        // A <- U* A
        for (Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * apk + c * phase * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = app - t * r;
        a(q, q) = aqq + t * r;
        for (Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - s * ph_conj * vkq;
          v(k, q) = s * vkp + c * ph_conj * vkq;
        }
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return a(i, i).real() < a(j, j).real(); });
  HermitianEig out{RealVector(n), ComplexMatrix(n, n)};
  for (Index j = 0; j < n; ++j) {
    out.values(j) = a(order[j], order[j]).real();
    out.vectors.col(j) = v.col(order[j]);
  }
  return out;
}

struct ThinSvd {
  ComplexMatrix u;
  RealVector sigma;
  ComplexMatrix v;
  Index rank = 0;
};

inline ThinSvd thin_svd(const ComplexMatrix& m, const Tolerances& tol) {
  ThinSvd out;
  if (m.size() == 0) {
    out.u = ComplexMatrix(m.rows(), 0);
    out.v = ComplexMatrix(m.cols(), 0);
    out.sigma = RealVector(0);
    return out;
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.u = svd.matrixU();
  out.v = svd.matrixV();
  out.sigma = svd.singularValues();
  const double cut = rank_cutoff(out.sigma(0), tol);
  while (out.rank < out.sigma.size() && out.sigma(out.rank) > cut) ++out.rank;
  return out;
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix: H = V diag(values) V*, values ascending.
inline HermitianEig hermitian_eig(const ComplexMatrix& h, const Tolerances& tol = {}) {
  detail::require_hermitian(h, tol, "hermitian_eig");
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  return detail::jacobi_hermitian(sym);
}

/// Orthonormal basis of the column span of m, one column per singular value
/// above rank_cutoff.
inline ComplexMatrix orthonormal_columns(const ComplexMatrix& m, const Tolerances& tol = {}) {
  const auto svd = detail::thin_svd(m, tol);
  return svd.u.leftCols(svd.rank);
}

/// Orthonormal basis of {x : m x = 0}.
inline ComplexMatrix null_space(const ComplexMatrix& m, const Tolerances& tol = {}) {
  const Index n = m.cols();
  if (m.rows() == 0 || n == 0) return ComplexMatrix::Identity(n, n);
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const RealVector& sigma = svd.singularValues();
  const double cut = rank_cutoff(sigma(0), tol);
  Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > cut) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

/// Moore-Penrose pseudo-inverse under the shared rank policy.
inline ComplexMatrix pseudo_inverse(const ComplexMatrix& m, const Tolerances& tol = {}) {
  const auto svd = detail::thin_svd(m, tol);
  ComplexMatrix out = ComplexMatrix::Zero(m.cols(), m.rows());
  for (Index j = 0; j < svd.rank; ++j) {
    out += svd.v.col(j) * (1.0 / svd.sigma(j)) * svd.u.col(j).adjoint();
  }
  return out;
}

/// Nonnegative square root of a Hermitian PSD matrix. Eigenvalues down to
/// -eq_abs * max(1, |lambda|_max) are treated as roundoff and clamped.
/// Eigenvalues the rank policy counts as zero are zeroed before the root is
/// taken, so rank(R) = rank(H); otherwise a 1e-16 eigenvalue would turn into
/// a 1e-8 singular value of R.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& h, const Tolerances& tol = {}) {
  const auto eig = hermitian_eig(h, tol);
  const Index n = h.rows();
  if (n == 0) return ComplexMatrix(0, 0);
  const double top = eig.values.cwiseAbs().maxCoeff();
  if (eig.values(0) < -tol.eq_abs * std::max(1.0, top)) {
    raise(ErrorKind::NotPSD, "psd_sqrt: eigenvalue " + std::to_string(eig.values(0)));
  }
  const double cut = rank_cutoff(top, tol);
  RealVector roots(n);
  for (Index i = 0; i < n; ++i) roots(i) = eig.values(i) > cut ? std::sqrt(eig.values(i)) : 0.0;
  ComplexMatrix r = eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
  return 0.5 * (r + r.adjoint());
}

/// Minimal-norm Y with R Y = B. Every column of B must lie in the column
/// span of R.
inline ComplexMatrix pseudo_apply_inverse(const ComplexMatrix& r, const ComplexMatrix& b,
                                          const Tolerances& tol = {}) {
  if (r.rows() != b.rows()) raise(ErrorKind::DimensionMismatch, "pseudo_apply_inverse: row counts differ");
  const ComplexMatrix q = orthonormal_columns(r, tol);
  const double leak = (b - q * (q.adjoint() * b)).norm();
  if (leak > tol.eq_abs * std::max(1.0, b.norm())) {
    raise(ErrorKind::Unsolvable, "pseudo_apply_inverse: right-hand side leaves ran(R) by " + std::to_string(leak));
  }
  return pseudo_inverse(r, tol) * b;
}

/// Hermitian part (M + M*)/2.
inline ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

/// Smallest eigenvalue of a Hermitian matrix; +inf for the empty matrix.
inline double min_eigenvalue(const ComplexMatrix& h, const Tolerances& tol = {}) {
  if (h.rows() == 0) return std::numeric_limits<double>::infinity();
  return hermitian_eig(h, tol).values(0);
}

}  // namespace linrel
