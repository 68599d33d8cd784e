#include <gtest/gtest.h>

#include "linrel/generator.hpp"
#include "linrel/nonneg.hpp"

using namespace linrel;

namespace {

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Subspace span1(Index n, Index i) { return Subspace::span({ComplexVector::Unit(n, i)}, n); }

NonnegSelfAdjointRelation from_matrix(const ComplexMatrix& m) { return validate(LinearRelation::from_matrix(m)); }

NonnegSelfAdjointRelation full_mul(Index n) { return validate(LinearRelation::pure_mul(n, Subspace::full(n))); }

LinearRelation e3() {
  ComplexMatrix one(2, 1);
  one << 1, 0;
  return LinearRelation::from_operator_and_mul(span1(2, 0), one, span1(2, 1));
}

NonnegSelfAdjointRelation random_nonneg(Rng& rng, Index n) {
  const Subspace dom = Subspace::span(rng.gaussian(n, rng.integer(0, n)));
  const ComplexMatrix g = rng.gaussian(dom.dim(), dom.dim());
  return make_nonneg(dom, g * g.adjoint());
}

}  // namespace

TEST(Validate, Examples) {
  EXPECT_NO_THROW(from_matrix(ComplexMatrix::Identity(2, 2)));
  EXPECT_NO_THROW(full_mul(2));
  try {
    from_matrix(mat2(0, 1, 0, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotSelfAdjoint);
  }
  try {
    from_matrix(mat2(1, 0, 0, -2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotNonnegative);
    EXPECT_NE(std::string(e.what()).find("-2"), std::string::npos);
  }
  EXPECT_THROW(validate(LinearRelation::zero(2, 3)), Error);
}

TEST(Validate, CachesOperatorPart) {
  const auto a = validate(e3());
  EXPECT_LT(op_norm(a.op_matrix() - mat2(1, 0, 0, 0)), 1e-14);
  EXPECT_TRUE(same(a.mul(), complement(a.dom())));
}

TEST(Sqrt, Examples) {
  const auto d = sqrt(from_matrix(mat2(4, 0, 0, 9)));
  EXPECT_LT(op_norm(d.op_matrix() - mat2(2, 0, 0, 3)), 1e-14);
  EXPECT_TRUE(equals(sqrt(validate(e3())).relation(), e3()));
  EXPECT_TRUE(equals(sqrt(full_mul(2)).relation(), full_mul(2).relation()));
}

TEST(Sqrt, Properties) {
  Rng rng(30);
  for (int rep = 0; rep < 100; ++rep) {
    const auto a = random_nonneg(rng, rng.integer(1, 6));
    const auto r = sqrt(a);
    EXPECT_TRUE(same(r.mul(), a.mul()));
    EXPECT_TRUE(same(r.dom(), a.dom()));
    EXPECT_TRUE(same(r.relation().ker(), a.relation().ker()));
    EXPECT_LT(graph_gap(compose(r.relation(), r.relation()), a.relation()), 1e-8);
  }
}

TEST(Leq, Examples) {
  Rng rng(31);
  const auto a = random_nonneg(rng, 4);
  EXPECT_TRUE(leq(a, a));
  const auto id = from_matrix(ComplexMatrix::Identity(2, 2));
  EXPECT_TRUE(leq(id, full_mul(2)));
  EXPECT_FALSE(leq(full_mul(2), id));
  const auto e2 = from_matrix(mat2(2, 1, 1, 1));
  EXPECT_FALSE(leq(from_matrix(mat2(0, 0, 0, 0.6)), e2));
  EXPECT_TRUE(leq(from_matrix(mat2(0, 0, 0, 0.5)), e2));
  EXPECT_THROW(leq(id, full_mul(3)), Error);
}

TEST(Leq, PartialOrder) {
  Rng rng(32);
  for (int rep = 0; rep < 100; ++rep) {
    const auto a = random_nonneg(rng, rng.integer(1, 6));
    EXPECT_TRUE(leq(a, a));
    EXPECT_TRUE(leq(a, full_mul(a.dim())));
    // a chain by scaling: c1 a <= c2 a <= c3 a
    const double c1 = rng.uniform(0, 1), c2 = c1 + rng.uniform(0.01, 1), c3 = c2 + rng.uniform(0.01, 1);
    const auto x = scaled(a, c1), y = scaled(a, c2), z = scaled(a, c3);
    EXPECT_TRUE(leq(x, y) && leq(y, z) && leq(x, z));
    const auto b = random_nonneg(rng, a.dim());
    if (leq(a, b) && leq(b, a)) EXPECT_TRUE(equals(a.relation(), b.relation()));
  }
}

TEST(OrderContraction, Examples) {
  const auto id = from_matrix(ComplexMatrix::Identity(2, 2));
  EXPECT_LT(op_norm(order_contraction(id, id) - ComplexMatrix::Identity(2, 2)), 1e-14);
  EXPECT_LT(op_norm(order_contraction(from_matrix(ComplexMatrix::Zero(2, 2)), id)), 1e-14);
  const auto a = from_matrix(mat2(0, 0, 0, 0.5));
  const auto b = from_matrix(mat2(2, 1, 1, 1));
  const ComplexMatrix w = order_contraction(a, b);
  EXPECT_LT(op_norm(w * b.root_matrix() - a.root_matrix()), 1e-8);
  EXPECT_LE(op_norm(w), 1 + 1e-10);
  try {
    order_contraction(b, a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OrderViolated);
  }
}

TEST(OrderContraction, RandomPairs) {
  Rng rng(33);
  for (int rep = 0; rep < 100; ++rep) {
    const auto b = random_nonneg(rng, rng.integer(1, 6));
    const auto a = scaled(b, rng.uniform());
    const ComplexMatrix w = order_contraction(a, b);
    const ComplexMatrix& u = b.dom().basis();
    EXPECT_LT(op_norm((w * b.root_matrix() - a.root_matrix()) * u), 1e-8);
    EXPECT_LE(op_norm(w), 1 + 1e-8);
    // W vanishes off ran B0^(1/2)
    const Subspace off = intersect(b.dom(), complement(Subspace::span(b.root_matrix())));
    EXPECT_LT(op_norm(w * off.basis()), 1e-8);
  }
}

TEST(Gram, Examples) {
  const auto id = gram(LinearRelation::from_matrix(ComplexMatrix::Identity(2, 2)));
  EXPECT_LT(op_norm(id.op_matrix() - ComplexMatrix::Identity(2, 2)), 1e-14);
  const auto n = gram(LinearRelation::from_matrix(mat2(0, 1, 0, 0)));
  EXPECT_TRUE(equals(n.relation(), LinearRelation::from_matrix(mat2(0, 0, 0, 1))));
  const auto m = gram(LinearRelation::pure_mul(2, Subspace::full(2)));
  EXPECT_EQ(m.mul().dim(), 2);
}

TEST(Gram, IdentitiesOnRandomRelations) {
  Rng rng(34);
  for (int rep = 0; rep < 200; ++rep) {
    const auto t = random_relation(rng, rng.integer(1, 6), rng.integer(1, 6));
    const auto product = compose(adjoint(t), t);
    EXPECT_NO_THROW(validate(product));
    EXPECT_LT(gram_identities(t, product).worst(), 1e-8);
  }
}

TEST(Gram, MatchesMatrixProductForOperators) {
  Rng rng(35);
  for (int rep = 0; rep < 50; ++rep) {
    const ComplexMatrix m = rng.gaussian(rng.integer(1, 5), 3);
    EXPECT_LT(op_norm(gram(LinearRelation::from_matrix(m)).op_matrix() - m.adjoint() * m), 1e-10);
  }
}

TEST(Friedrichs, Examples) {
  const auto id = friedrichs(LinearRelation::from_matrix(ComplexMatrix::Identity(2, 2)));
  EXPECT_TRUE(equals(id.relation(), LinearRelation::from_matrix(ComplexMatrix::Identity(2, 2))));

  ComplexMatrix pair(4, 1);
  pair << 1, 0, 1, 0;
  EXPECT_TRUE(equals(friedrichs(LinearRelation::from_graph(pair, 2, 2)).relation(), e3()));

  pair << 1, 0, 0, 0;
  const auto z = friedrichs(LinearRelation::from_graph(pair, 2, 2));
  EXPECT_TRUE(same(z.dom(), span1(2, 0)));
  EXPECT_TRUE(same(z.mul(), span1(2, 1)));
  EXPECT_LT(op_norm(z.op_matrix()), 1e-14);
}

TEST(Friedrichs, Errors) {
  try {
    friedrichs(LinearRelation::from_matrix(mat2(0, 1, 0, 0)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotSymmetric);
  }
  ComplexMatrix pair(4, 1);
  pair << 1, 0, -1, 0;
  try {
    friedrichs(LinearRelation::from_graph(pair, 2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotNonnegative);
  }
}

TEST(Friedrichs, ExtendsSymmetricRestrictions) {
  Rng rng(36);
  for (int rep = 0; rep < 100; ++rep) {
    const auto a = random_nonneg(rng, rng.integer(1, 6));
    // restricting a selfadjoint relation gives a symmetric one
    const Subspace u = Subspace::span(rng.gaussian(a.dim(), rng.integer(0, a.dim())));
    const auto t = restrict(a.relation(), u);
    const auto f = friedrichs(t);
    EXPECT_TRUE(includes(f.relation(), t));
    EXPECT_TRUE(equals(f.relation(), adjoint(f.relation())));
    EXPECT_TRUE(same(f.mul(), adjoint(t).mul()));
    EXPECT_TRUE(includes(restrict(f.relation(), t.dom()), t));
  }
}
