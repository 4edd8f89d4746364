#include <gtest/gtest.h>

#include "ncorlicz/algebra.hpp"
#include "ncorlicz/random.hpp"
#include "ncorlicz/rearrangement.hpp"

using namespace ncorlicz;

namespace {

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(rows.size(), rows.begin()->size());
  int i = 0;
  for (auto& r : rows) {
    int j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST(Algebra, Validation) {
  EXPECT_THROW(TracedAlgebra({{0, 1.0}}), StructuralError);
  EXPECT_THROW(TracedAlgebra({{2, 0.0}}), StructuralError);
  EXPECT_THROW(AlgebraElement(TracedAlgebra::full(2), {Matrix::Zero(3, 3)}), StructuralError);
  auto a = AlgebraElement::identity(TracedAlgebra::full(2));
  auto b = AlgebraElement::identity(TracedAlgebra::full(3));
  EXPECT_THROW(a + b, StructuralError);
  EXPECT_THROW(trace(TracedAlgebra::full(3), a), StructuralError);
}

TEST(Algebra, Trace) {
  auto alg = TracedAlgebra::full(2);
  EXPECT_EQ(trace(AlgebraElement::identity(alg)).real(), 2.0);
  auto two = TracedAlgebra({{1, 0.5}, {1, 2.0}});
  EXPECT_EQ(trace(AlgebraElement::central(two, {4.0, 1.0})).real(), 4.0);
  auto rng = make_rng(1, "trace");
  for (const auto& shape : standard_algebras()) {
    auto x = random_element(rng, shape), y = random_element(rng, shape);
    EXPECT_LT(std::abs(trace(x * y) - trace(y * x)), 1e-12 * (1 + std::abs(trace(x * y))));
    EXPECT_GT(trace(x.adjoint() * x).real(), 0.0);
  }
}

TEST(Algebra, AbsoluteValue) {
  auto alg = TracedAlgebra::full(2);
  auto d = AlgebraElement::diagonal(alg, {-3.0, 2.0});
  EXPECT_LT((abs_value(d).block(0) - mat({{3, 0}, {0, 2}})).norm(), 1e-14);
  AlgebraElement nil(alg, {mat({{0, 1}, {0, 0}})});
  EXPECT_LT((abs_value(nil).block(0) - mat({{0, 0}, {0, 1}})).norm(), 1e-14);
  auto rng = make_rng(2, "abs");
  for (const auto& shape : standard_algebras()) {
    auto x = random_element(rng, shape);
    auto s1 = singular_values(x).step(), s2 = singular_values(x.adjoint()).step(), s3 = singular_values(abs_value(x)).step();
    ASSERT_EQ(s1.values.size(), s2.values.size());
    for (std::size_t i = 0; i < s1.values.size(); ++i) {
      EXPECT_NEAR(s1.values[i], s2.values[i], 1e-12 * s1.values[0]);
      EXPECT_NEAR(s1.values[i], s3.values[i], 1e-12 * s1.values[0]);
    }
    EXPECT_TRUE(is_positive(abs_value(x)));
    auto back = abs_value(x) * abs_value(x) - x.adjoint() * x;
    EXPECT_LT(back.max_block_norm(), 1e-11 * (1 + x.max_block_norm() * x.max_block_norm()));
  }
}

TEST(Algebra, FunctionalCalculus) {
  auto alg = TracedAlgebra::full(2);
  auto d = AlgebraElement::diagonal(alg, {1.0, 2.0});
  auto sq = apply_function(OrliczFunction::power(2), d);
  EXPECT_LT((sq.block(0) - mat({{1, 0}, {0, 4}})).norm(), 1e-13);
  try {
    apply_function(OrliczFunction::linear_until_cap(1.0), AlgebraElement::diagonal(alg, {0.5, 2.0}));
    FAIL();
  } catch (const NotMeasurableError& e) {
    EXPECT_EQ(e.eigenvalue(), 2.0);
    EXPECT_EQ(e.block(), 0u);
  }
  auto rng = make_rng(3, "calculus");
  auto id = OrliczFunction::power(1);
  for (const auto& shape : standard_algebras()) {
    auto x = random_element(rng, shape);
    EXPECT_LT((apply_function(id, x) - abs_value(x)).max_block_norm(), 1e-12 * (1 + x.max_block_norm()));
  }
}

TEST(Algebra, ProjectionNorm) {
  auto alg = TracedAlgebra::full(1);
  auto e = AlgebraElement::identity(alg);
  EXPECT_NEAR(projection_trace_norm(alg, e, OrliczFunction::exp_minus_one()), 1.4426950408889634, 1e-12);
  auto alg4 = TracedAlgebra::full(4);
  EXPECT_NEAR(projection_trace_norm(alg4, AlgebraElement::identity(alg4), OrliczFunction::power(2)), 2.0, 1e-12);
  EXPECT_NEAR(projection_trace_norm(alg, e, OrliczFunction::power(3)), 1.0, 1e-12);
  EXPECT_THROW(projection_trace_norm(alg4, 2.0 * AlgebraElement::identity(alg4), OrliczFunction::power(2)), DomainError);
  EXPECT_THROW(projection_trace_norm(alg4, AlgebraElement::zero(alg4), OrliczFunction::power(2)), DomainError);
}

TEST(Algebra, PositiveSqrt) {
  auto rng = make_rng(4, "sqrt");
  for (const auto& shape : standard_algebras()) {
    auto p = random_positive(rng, shape);
    auto r = positive_sqrt(p);
    EXPECT_LT((r * r - p).max_block_norm(), 1e-10 * (1 + p.max_block_norm()));
  }
  EXPECT_THROW(positive_sqrt(AlgebraElement::diagonal(TracedAlgebra::full(2), {1.0, -1.0})), DomainError);
}
