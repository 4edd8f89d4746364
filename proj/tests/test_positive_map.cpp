#include <gtest/gtest.h>

#include "ncorlicz/positive_map.hpp"

using namespace ncorlicz;

TEST(PositiveMap, AdjointIdentity) {
  auto rng = make_rng(30, "adjoint");
  auto src = TracedAlgebra({{2, 0.5}, {1, 2.0}}), dst = TracedAlgebra({{3, 1.5}, {2, 0.25}});
  auto T = PositiveMap::random_cp(rng, src, dst, 2);
  auto a = random_element(rng, src);
  auto b = random_element(rng, dst);
  EXPECT_LT(std::abs(trace(T(a) * b) - trace(a * T.adjoint_apply(b))), 1e-10 * (1 + std::abs(trace(T(a) * b))));
  auto tr = PositiveMap::transpose_map(3);
  auto c = random_element(rng, tr.source()), d = random_element(rng, tr.target());
  EXPECT_LT(std::abs(trace(tr(c) * d) - trace(c * tr.adjoint_apply(d))), 1e-10 * (1 + std::abs(trace(tr(c) * d))));
  EXPECT_THROW(PositiveMap(src, dst, {{0, 0, Matrix::Identity(2, 2), false}}), StructuralError);
}

TEST(PositiveMap, Constants) {
  auto p = PositiveMap::pinching(2);
  EXPECT_NEAR(p.trace_constant(), 1.0, 1e-14);
  EXPECT_NEAR(p.unit_norm(), 1.0, 1e-14);
  auto two = PositiveMap::scaled_identity(TracedAlgebra::full(3), 2.0);
  EXPECT_NEAR(two.trace_constant(), 2.0, 1e-14);
  EXPECT_NEAR(two.unit_norm(), 2.0, 1e-14);
}

TEST(PositiveMap, Contraction) {
  auto rng = make_rng(31, "contraction");
  auto phi = OrliczFunction::cosh_minus_one();
  auto p = interpolation_contraction_check(PositiveMap::pinching(2), phi, rng, 20);
  EXPECT_TRUE(p.pass());
  auto two = interpolation_contraction_check(PositiveMap::scaled_identity(TracedAlgebra::full(2), 2.0), phi, rng, 20);
  EXPECT_TRUE(two.pass());
  EXPECT_NEAR(two.worst_norm_slack, 0.0, 1e-8);
  auto ch = interpolation_contraction_check(PositiveMap::random_unital_channel(rng, 3, 4), OrliczFunction::power(3), rng, 20);
  EXPECT_TRUE(ch.pass());
  EXPECT_NEAR(ch.C, 1.0, 1e-12);
  auto tr = interpolation_contraction_check(PositiveMap::transpose_map(2), phi, rng, 10);
  EXPECT_TRUE(tr.pass());
}

TEST(PositiveMap, NotPositive) {
  auto rng = make_rng(33, "not-positive");
  auto m2 = TracedAlgebra::full(2);
  Matrix e = Matrix::Zero(2, 2);
  e(0, 1) = 1.0;
  PositiveMap T(m2, m2, {{0, 0, Matrix::Identity(2, 2), false, 1.0}, {0, 0, e, false, -3.0}}, false);
  auto r = interpolation_contraction_check(T, OrliczFunction::power(2), rng, 5);
  EXPECT_FALSE(r.positive_on_samples);
  EXPECT_FALSE(r.pass());
  EXPECT_EQ(r.samples, 0);
  EXPECT_THROW(PositiveMap(m2, m2, {{0, 0, e, false, -1.0}}, true), StructuralError);
}

TEST(PositiveMap, Purity) {
  auto rng = make_rng(32, "purity");
  auto m2 = TracedAlgebra::full(2), m3 = TracedAlgebra::full(3);
  Matrix v = random_unitary(rng, 3).leftCols(2);  // isometry C^2 -> C^3
  PositiveMap iso(m2, m3, {{0, 0, v, false}});
  EXPECT_TRUE(purity_check(iso).pure);
  EXPECT_TRUE(purity_check(PositiveMap::scaled_identity(m2, 1.0)).pure);
  // completely depolarizing map a -> tr(a) 1/2: Kraus operators E_ij / sqrt 2
  std::vector<KrausTerm> dep;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Matrix e = Matrix::Zero(2, 2);
      e(i, j) = std::sqrt(0.5);
      dep.push_back({0, 0, e, false});
    }
  auto r = purity_check(PositiveMap(m2, m2, dep));
  EXPECT_FALSE(r.pure);
  EXPECT_EQ(r.choi_rank, 4);
  for (double ev : r.choi_eigenvalues) EXPECT_NEAR(ev, 0.5, 1e-14);
  EXPECT_THROW(purity_check(PositiveMap::transpose_map(2)), DomainError);
}
