#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "linrel/kernel.hpp"
#include "linrel/random.hpp"

using namespace linrel;

namespace {

ComplexMatrix random_hermitian(Rng& rng, Index n) {
  const ComplexMatrix g = rng.gaussian(n, n);
  return g + g.adjoint();
}

}  // namespace

TEST(HermitianEig, IdentityStaysPut) {
  const auto eig = hermitian_eig(ComplexMatrix::Identity(2, 2));
  EXPECT_NEAR(eig.values(0), 1.0, 1e-15);
  EXPECT_NEAR(eig.values(1), 1.0, 1e-15);
  EXPECT_LT((eig.vectors - ComplexMatrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(HermitianEig, SwapMatrix) {
  ComplexMatrix h(2, 2);
  h << 0, 1, 1, 0;
  const auto eig = hermitian_eig(h);
  EXPECT_NEAR(eig.values(0), -1.0, 1e-14);
  EXPECT_NEAR(eig.values(1), 1.0, 1e-14);
}

TEST(HermitianEig, RandomSixBySixAgainstEigenSolver) {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const ComplexMatrix h = random_hermitian(rng, 6);
    const auto eig = hermitian_eig(h);
    const ComplexMatrix back = eig.vectors * eig.values.asDiagonal() * eig.vectors.adjoint();
    EXPECT_LT(op_norm(back - h), 1e-10);
    EXPECT_LT(op_norm(eig.vectors.adjoint() * eig.vectors - ComplexMatrix::Identity(6, 6)), 1e-12);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> oracle(h);
    EXPECT_LT((oracle.eigenvalues() - eig.values).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(HermitianEig, DegenerateAndTinyEntries) {
  ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  h(0, 1) = Complex(1e-20, 1e-20);
  h(1, 0) = std::conj(h(0, 1));
  h(2, 2) = h(3, 3) = 3.0;
  const auto eig = hermitian_eig(h);
  EXPECT_LT(op_norm(eig.vectors * eig.values.asDiagonal() * eig.vectors.adjoint() - h), 1e-15);
  EXPECT_TRUE(std::is_sorted(eig.values.data(), eig.values.data() + 4));
}

TEST(HermitianEig, RejectsNonHermitian) {
  ComplexMatrix h(2, 2);
  h << 0, 1, 0, 0;
  try {
    hermitian_eig(h);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
  }
  EXPECT_THROW(hermitian_eig(ComplexMatrix::Zero(2, 3)), Error);
}

TEST(HermitianEig, Deterministic) {
  Rng rng(3);
  const ComplexMatrix h = random_hermitian(rng, 7);
  const auto a = hermitian_eig(h);
  const auto b = hermitian_eig(h);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.vectors, b.vectors);
}

TEST(OrthonormalColumns, RankOneAndZero) {
  ComplexMatrix m(2, 2);
  m << 1, 2, 0, 0;
  const ComplexMatrix q = orthonormal_columns(m);
  ASSERT_EQ(q.cols(), 1);
  EXPECT_NEAR(std::abs(q(0, 0)), 1.0, 1e-15);
  EXPECT_EQ(orthonormal_columns(ComplexMatrix::Zero(3, 2)).cols(), 0);
  EXPECT_EQ(orthonormal_columns(ComplexMatrix(3, 0)).cols(), 0);
}

TEST(OrthonormalColumns, RankTwoProduct) {
  Rng rng(5);
  const ComplexMatrix left = rng.gaussian(5, 2);
  const ComplexMatrix m = left * rng.gaussian(2, 3);
  const ComplexMatrix q = orthonormal_columns(m);
  ASSERT_EQ(q.cols(), 2);
  // projector built independently from the left factor
  const ComplexMatrix p = left * (left.adjoint() * left).inverse() * left.adjoint();
  EXPECT_LT(op_norm(q * q.adjoint() - p), 1e-9);
  EXPECT_LT(op_norm(q.adjoint() * q - ComplexMatrix::Identity(2, 2)), 1e-12);
}

TEST(OrthonormalColumns, KeepsOrthonormalInput) {
  Rng rng(8);
  const ComplexMatrix q = orthonormal_columns(rng.gaussian(6, 3));
  const ComplexMatrix again = orthonormal_columns(q);
  EXPECT_LT(op_norm(q * q.adjoint() - again * again.adjoint()), 1e-12);
}

TEST(PsdSqrt, Examples) {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 4;
  d(1, 1) = 9;
  ComplexMatrix want = ComplexMatrix::Zero(2, 2);
  want(0, 0) = 2;
  want(1, 1) = 3;
  EXPECT_LT(op_norm(psd_sqrt(d) - want), 1e-14);
  EXPECT_LT(op_norm(psd_sqrt(ComplexMatrix::Identity(3, 3)) - ComplexMatrix::Identity(3, 3)), 1e-14);
  ComplexMatrix h(2, 2);
  h << 2, 1, 1, 1;
  const ComplexMatrix r = psd_sqrt(h);
  EXPECT_LT(op_norm(r * r - h), 1e-10);
  EXPECT_LT(op_norm(r - r.adjoint()), 1e-15);
  EXPECT_GE(min_eigenvalue(r), 0.0);
}

TEST(PsdSqrt, ClampsRoundoffRejectsNegative) {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = 1;
  h(1, 1) = -1e-12;
  EXPECT_NO_THROW(psd_sqrt(h));
  h(1, 1) = -1e-3;
  try {
    psd_sqrt(h);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPSD);
  }
}

TEST(PsdSqrt, SquaresBackOnRandomGram) {
  Rng rng(21);
  for (int rep = 0; rep < 20; ++rep) {
    const Index n = 1 + rep % 7;
    const ComplexMatrix g = rng.gaussian(n, n / 2 + 1);
    const ComplexMatrix h = g * g.adjoint();
    const ComplexMatrix r = psd_sqrt(h);
    EXPECT_LT(op_norm(r * r - h), 10 * 1e-8 * (1 + op_norm(h)));
    EXPECT_EQ(detail::thin_svd(r, {}).rank, detail::thin_svd(h, {}).rank);
  }
}

TEST(PseudoApplyInverse, Examples) {
  Rng rng(2);
  const ComplexMatrix b = rng.gaussian(3, 2);
  EXPECT_LT((pseudo_apply_inverse(ComplexMatrix::Identity(3, 3), b) - b).norm(), 1e-14);

  ComplexMatrix r = ComplexMatrix::Zero(2, 2);
  r(0, 0) = 2;
  ComplexMatrix e1 = ComplexMatrix::Zero(2, 1);
  e1(0, 0) = 1;
  const ComplexMatrix y = pseudo_apply_inverse(r, e1);
  EXPECT_NEAR(y(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(y(1, 0)), 0.0, 1e-15);

  ComplexMatrix h(2, 2);
  h << 2, 1, 1, 1;
  const ComplexMatrix root = psd_sqrt(h);
  ComplexMatrix col(2, 1);
  col << 1, 1;
  EXPECT_LT((root * pseudo_apply_inverse(root, col) - col).norm(), 1e-10);
}

TEST(PseudoApplyInverse, UnsolvableOutsideRange) {
  ComplexMatrix r = ComplexMatrix::Zero(2, 2);
  r(0, 0) = 2;
  ComplexMatrix e2 = ComplexMatrix::Zero(2, 1);
  e2(1, 0) = 1;
  try {
    pseudo_apply_inverse(r, e2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unsolvable);
  }
}

TEST(Tolerances, RangeChecked) {
  EXPECT_NO_THROW(Tolerances{}.check());
  EXPECT_THROW((Tolerances{0.0, 1e-8}.check()), Error);
  EXPECT_THROW((Tolerances{1e-10, 1.5}.check()), Error);
}
