#include <gtest/gtest.h>

#include "linrel/generator.hpp"
#include "linrel/schur.hpp"
#include "linrel/verify.hpp"

using namespace linrel;

namespace {

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Subspace e1() { return Subspace::span({ComplexVector::Unit(2, 0)}, 2); }
Subspace e2() { return Subspace::span({ComplexVector::Unit(2, 1)}, 2); }

NonnegSelfAdjointRelation from_matrix(const ComplexMatrix& m) { return validate(LinearRelation::from_matrix(m)); }

NonnegSelfAdjointRelation e3() {
  return validate(LinearRelation::from_operator_and_mul(e1(), ComplexMatrix(ComplexVector::Unit(2, 0)), e2()));
}

NonnegSelfAdjointRelation e4() { return validate(LinearRelation::pure_mul(2, Subspace::full(2))); }

bool is_matrix(const NonnegSelfAdjointRelation& a, const ComplexMatrix& m, double eps) {
  return a.mul().dim() == 0 && a.dom().dim() == a.dim() && (a.op_matrix() - m).cwiseAbs().maxCoeff() < eps;
}

}  // namespace

TEST(SchurComplement, Examples) {
  EXPECT_TRUE(is_matrix(schur_complement(from_matrix(ComplexMatrix::Identity(2, 2)), e1()).schur, mat2(0, 0, 0, 1), 1e-12));
  EXPECT_TRUE(is_matrix(schur_complement(from_matrix(mat2(2, 1, 1, 1)), e1()).schur, mat2(0, 0, 0, 0.5), 1e-12));
  const auto z = schur_complement(e4(), e1()).schur;
  EXPECT_TRUE(same(z.dom(), e1()));
  EXPECT_TRUE(same(z.mul(), e2()));
  EXPECT_LT(op_norm(z.op_matrix()), 1e-14);
}

TEST(SchurComplement, E3KeepsMulInSPerp) {
  const auto res = schur_complement(e3(), e1());
  // T = {0} x M2, T*T = {0} x M2 on S⊥
  EXPECT_TRUE(same(res.schur.dom(), e1()));
  EXPECT_TRUE(same(res.schur.mul(), e2()));
  EXPECT_LT(op_norm(res.schur.op_matrix()), 1e-14);
  EXPECT_LT(res.diagnostics.at("schur_lemma_gap"), 1e-10);
}

TEST(SchurComplement, Idempotent) {
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = generate(trial_spec(5, trial, 6));
    const auto once = schur_complement(inst.A, inst.S).schur;
    const auto twice = schur_complement(once, inst.S).schur;
    EXPECT_LT(graph_gap(once.relation(), twice.relation()), 1e-8) << trial;
  }
}

TEST(IsMember, Examples) {
  const auto e2m = from_matrix(mat2(2, 1, 1, 1));
  EXPECT_TRUE(is_member(e2m, e1(), from_matrix(ComplexMatrix::Zero(2, 2))));
  EXPECT_TRUE(is_member(e2m, e1(), from_matrix(mat2(0, 0, 0, 0.5))));
  EXPECT_FALSE(is_member(e2m, e1(), from_matrix(mat2(0, 0, 0, 0.6))));
  // range leaves S⊥
  EXPECT_FALSE(is_member(e2m, e1(), from_matrix(mat2(0.1, 0, 0, 0))));
  EXPECT_THROW(is_member(e2m, e1(), from_matrix(ComplexMatrix::Zero(3, 3))), Error);
}

TEST(Maximality, Examples) {
  const auto id = from_matrix(ComplexMatrix::Identity(2, 2));
  const auto r1 = maximality_probe(id, e1(), schur_complement(id, e1()), 1, 50);
  EXPECT_EQ(r1.violations, 0);
  EXPECT_EQ(r1.accepted + r1.rejected, 50);
  EXPECT_GT(r1.accepted, 25);

  const auto e2m = from_matrix(mat2(2, 1, 1, 1));
  const auto res = schur_complement(e2m, e1());
  const auto r2 = maximality_probe(e2m, e1(), res, 2, 100);
  EXPECT_EQ(r2.violations, 0);
  EXPECT_TRUE(is_member(e2m, e1(), scaled(res.schur, 1.0)));
  EXPECT_TRUE(leq(scaled(res.schur, 1.0), res.schur));
}

TEST(Maximality, GeneratedInstances) {
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = generate(trial_spec(6, trial, 6));
    const auto res = schur_complement(inst.A, inst.S);
    EXPECT_TRUE(is_member(inst.A, inst.S, res.schur));
    EXPECT_EQ(maximality_probe(inst.A, inst.S, res, trial, 20).violations, 0);
  }
}

TEST(Compression, Examples) {
  EXPECT_TRUE(is_matrix(compression(from_matrix(ComplexMatrix::Identity(2, 2)), e1()).compression, mat2(1, 0, 0, 0), 1e-12));
  EXPECT_TRUE(is_matrix(compression(from_matrix(mat2(2, 1, 1, 1)), e1()).compression, mat2(2, 1, 1, 0.5), 1e-12));
  EXPECT_LT(graph_gap(compression(e3(), e1()).compression.relation(), e3().relation()), 1e-10);
}

TEST(Compression, DominatedByA) {
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = generate(trial_spec(8, trial, 6));
    const auto res = compression(inst.A, inst.S);
    EXPECT_TRUE(leq(res.compression, inst.A));
    EXPECT_TRUE(same(res.compression.mul(), inst.A.mul()));
    EXPECT_LT(res.diagnostics.at("compression_lemma_gap"), 1e-8);
  }
}

TEST(Pekarev, Examples) {
  const auto id = pekarev(from_matrix(ComplexMatrix::Identity(2, 2)), e1());
  EXPECT_TRUE(same(id.L, e1()));
  EXPECT_TRUE(is_matrix(id.schur_p, mat2(0, 0, 0, 1), 1e-12));
  EXPECT_TRUE(is_matrix(pekarev(from_matrix(mat2(2, 1, 1, 1)), e1()).schur_p, mat2(0, 0, 0, 0.5), 1e-12));
  const auto p3 = pekarev(e3(), e1());
  EXPECT_TRUE(same(p3.L, e1()));
  EXPECT_LT(graph_gap(p3.compression_p.relation(), e3().relation()), 1e-10);
}

// The literal formula A^(1/2) P_{L⊥} A^(1/2)|dom A has domain dom A, while the
// maximum of M(A, S⊥) has domain S ⊕ N2. They differ exactly when
// M1 = S ∩ mul A is nonzero.
TEST(Pekarev, DiffersFromMatrixFormulaWhenM1Nonzero) {
  const auto p4 = pekarev(e4(), e1());
  const auto s4 = schur_complement(e4(), e1()).schur;
  EXPECT_EQ(p4.schur_p.dom().dim(), 0);
  EXPECT_EQ(s4.dom().dim(), 1);
  EXPECT_NEAR(graph_gap(p4.schur_p.relation(), s4.relation()), 1.0, 1e-12);

  int with_m1 = 0, without_m1 = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const auto inst = generate(trial_spec(7, trial, 6));
    const auto res = schur_analysis(inst.A, inst.S);
    const auto p = pekarev(inst.A, inst.S);
    EXPECT_LT(graph_gap(p.compression_p.relation(), res.compression.relation()), 1e-8);
    const double g = graph_gap(p.schur_p.relation(), res.schur.relation());
    if (res.rep.M1.dim() == 0) {
      ++without_m1;
      EXPECT_LT(g, 1e-8) << trial;
    } else {
      ++with_m1;
      EXPECT_GT(g, 0.5) << trial;
    }
  }
  EXPECT_GT(with_m1, 0);
  EXPECT_GT(without_m1, 0);
}

TEST(AdditiveDecomposition, Examples) {
  const auto id = additive_decomposition(from_matrix(ComplexMatrix::Identity(2, 2)), e1());
  EXPECT_TRUE(id.verified());
  EXPECT_TRUE(is_matrix(id.compression, mat2(1, 0, 0, 0), 1e-12));
  const auto d2 = additive_decomposition(from_matrix(mat2(2, 1, 1, 1)), e1());
  EXPECT_TRUE(d2.verified());
  const ComplexMatrix sum = d2.compression.op_matrix() + d2.schur.op_matrix();
  EXPECT_LT((sum - mat2(2, 1, 1, 1)).cwiseAbs().maxCoeff(), 1e-12);
  const auto d3 = additive_decomposition(e3(), e1());
  EXPECT_TRUE(d3.verified());
  EXPECT_LT(d3.sum_gap, 1e-10);
}

TEST(AdditiveDecomposition, GeneratedInstances) {
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = generate(trial_spec(9, trial, 6));
    const auto d = additive_decomposition(inst.A, inst.S);
    EXPECT_TRUE(d.verified()) << trial << " gap " << d.sum_gap;
  }
}

TEST(AndersonTrapp, Examples) {
  EXPECT_LT(op_norm(anderson_trapp(ComplexMatrix::Identity(2, 2), e1()) - mat2(0, 0, 0, 1)), 1e-14);
  EXPECT_LT(op_norm(anderson_trapp(mat2(2, 1, 1, 1), e1()) - mat2(0, 0, 0, 0.5)), 1e-12);
  EXPECT_LT(op_norm(anderson_trapp(mat2(4, 0, 0, 7), e1()) - mat2(0, 0, 0, 7)), 1e-12);
  try {
    anderson_trapp(mat2(1, 0, 0, -1), e1());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPSD);
  }
}

TEST(AndersonTrapp, MatchesMatrixFormulaOnBoundedCases) {
  Rng rng(50);
  for (int rep = 0; rep < 100; ++rep) {
    const Index n = rng.integer(1, 6);
    const ComplexMatrix g = rng.gaussian(n, rng.integer(1, n));
    const ComplexMatrix a = g * g.adjoint();
    const Subspace s = Subspace::span(rng.gaussian(n, rng.integer(0, n)));
    const auto res = schur_complement(from_matrix(a), s);
    ASSERT_EQ(res.schur.mul().dim(), 0);
    EXPECT_LT((res.schur.op_matrix() - anderson_trapp(a, s)).cwiseAbs().maxCoeff(), 1e-8);
  }
}
