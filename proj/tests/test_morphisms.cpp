#include <gtest/gtest.h>

#include <cmath>

#include "ncorlicz/morphisms.hpp"

using namespace ncorlicz;

namespace {

std::vector<JordanMorphism> corpus(Rng& rng) {
  std::vector<JordanMorphism> out{JordanMorphism::transpose(2), JordanMorphism::doubling(2), JordanMorphism::kernel(2),
                                  JordanMorphism::padded(2, 1), JordanMorphism::identity(TracedAlgebra({{2, 1.0}, {1, 0.5}}))};
  out.push_back(JordanMorphism::doubling(2).rotated(rng));
  out.push_back(JordanMorphism::kernel(2).reweighted({2.5}));
  out.push_back(JordanMorphism(TracedAlgebra({{1, 1.0}, {2, 0.5}}), TracedAlgebra({{5, 0.3}}),
                               {{false, {{0, 1, Flavor::homomorphism}, {1, 1, Flavor::homomorphism}, {1, 1, Flavor::antihomomorphism}}, {}, 0}})
                    .rotated(rng));
  return out;
}

}  // namespace

TEST(Morphisms, Validation) {
  auto m2 = TracedAlgebra::full(2), m3 = TracedAlgebra::full(3);
  EXPECT_THROW(JordanMorphism(m2, m3, {{false, {{0, 1, Flavor::homomorphism}}, {}, 0}}), StructuralError);
  EXPECT_THROW(JordanMorphism(m2, m2, {{false, {{1, 1, Flavor::homomorphism}}, {}, 0}}), StructuralError);
  EXPECT_THROW(JordanMorphism(m2, m2, {}), StructuralError);
  Matrix bad = Matrix::Identity(2, 2) * 2.0;
  EXPECT_THROW(JordanMorphism(m2, m2, {{false, {{0, 1, Flavor::homomorphism}}, bad, 0}}), StructuralError);
  try {
    JordanMorphism(m2, TracedAlgebra({{2, 1.0}, {3, 1.0}}),
                   {{false, {{0, 1, Flavor::homomorphism}}, {}, 0}, {false, {{0, 1, Flavor::homomorphism}}, {}, 0}});
    FAIL();
  } catch (const StructuralError& e) {
    EXPECT_NE(std::string(e.what()).find("target block 1"), std::string::npos);
  }
}

TEST(Morphisms, Examples) {
  auto rng = make_rng(20, "morphism-examples");
  auto t = JordanMorphism::transpose(2);
  auto a = random_element(rng, t.source());
  EXPECT_EQ((t(a).block(0) - a.block(0).transpose()).norm(), 0.0);
  auto h = random_self_adjoint(rng, t.source());
  EXPECT_LT((t(h * h) - t(h) * t(h)).max_block_norm(), 1e-12 * (1 + h.max_block_norm() * h.max_block_norm()));
  auto d = JordanMorphism::doubling(2);
  EXPECT_EQ((d(AlgebraElement::identity(d.source())) - AlgebraElement::identity(d.target())).max_block_norm(), 0.0);
  auto p = JordanMorphism::padded(2, 1);
  auto one = p(AlgebraElement::identity(p.source()));
  EXPECT_TRUE(is_projection(one));
  EXPECT_NEAR(trace(one).real(), 2.0, 1e-15);
}

TEST(Morphisms, RadonNikodym) {
  EXPECT_EQ(radon_nikodym_values(JordanMorphism::transpose(2)), (std::vector<double>{1.0}));
  EXPECT_EQ(radon_nikodym_values(JordanMorphism::doubling(2)), (std::vector<double>{2.0}));
  EXPECT_EQ(radon_nikodym_values(JordanMorphism::kernel(2)), (std::vector<double>{1.0, 0.0}));
  auto rng = make_rng(21, "radon-nikodym");
  for (const auto& J : corpus(rng)) {
    const auto f = radon_nikodym(J);
    for (int i = 0; i < 5; ++i) {
      auto a = random_element(rng, J.source());
      EXPECT_LT(std::abs(trace(J(a)) - trace(f * a)), 1e-10 * (1 + std::abs(trace(J(a)))));
    }
    auto b = random_element(rng, J.source());
    auto a = random_element(rng, J.source());
    EXPECT_LT(jordan_axiom_violation(J, a, b), 1e-10);
  }
}

TEST(Morphisms, AbsoluteContinuity) {
  auto r = absolute_continuity_check(JordanMorphism::doubling(2));
  EXPECT_EQ(r.sup_fj, 2.0);
  EXPECT_EQ(r.delta[1].second, 0.05);
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.projections, 3);
  auto z = absolute_continuity_check(JordanMorphism::zero(TracedAlgebra::full(2), TracedAlgebra::full(2)));
  EXPECT_TRUE(z.pass());
  EXPECT_TRUE(is_inf(z.delta[0].second));
  auto t = absolute_continuity_check(JordanMorphism::transpose(3));
  EXPECT_EQ(t.delta[2].second, 0.5);
}

TEST(Morphisms, CompositionBound) {
  auto rng = make_rng(22, "composition");
  auto id = OrliczFunction::power(1), sq = OrliczFunction::power(2);
  auto t = composition_bound_check(JordanMorphism::transpose(2), id, sq, rng, 30);
  EXPECT_NEAR(t.bound, 1.0, 1e-9);
  EXPECT_TRUE(t.pass());
  EXPECT_LT(t.max_ratio, 1.0);
  auto d = composition_bound_check(JordanMorphism::doubling(2), id, sq, rng, 30);
  EXPECT_NEAR(d.bound, 2.0, 1e-9);
  EXPECT_TRUE(d.pass());
  EXPECT_LT(d.max_ratio, std::sqrt(2.0));
  EXPECT_GT(d.max_ratio, 1.0);
  auto z = composition_bound_check(JordanMorphism::zero(TracedAlgebra::full(2), TracedAlgebra::full(2)), id, sq, rng, 10);
  EXPECT_EQ(z.bound, 1.0);
  EXPECT_EQ(z.max_ratio, 0.0);
  // ||J(a)||_2 = sqrt(2) ||a||_2 for the doubling map
  auto a = random_self_adjoint(rng, TracedAlgebra::full(2));
  auto J = JordanMorphism::doubling(2);
  EXPECT_NEAR(luxemburg_norm(singular_values(J(a)), sq), std::sqrt(2.0) * luxemburg_norm(singular_values(a), sq), 1e-8);
}

TEST(Morphisms, ModularChain) {
  auto rng = make_rng(23, "chain");
  auto id = OrliczFunction::power(1), sq = OrliczFunction::power(2);
  for (const auto& J : corpus(rng)) {
    for (auto [psi, phi2] : {std::pair{id, sq}, std::pair{sq, id}, std::pair{OrliczFunction::cosh_minus_one(), id}}) {
      auto a = random_self_adjoint(rng, J.source());
      const double n = luxemburg_norm(singular_values(a), compose_orlicz(psi, phi2));
      a = (0.9 / n) * a;
      auto r = modular_chain_check(J, psi, phi2, a);
      EXPECT_TRUE(r.hypothesis_ok);
      EXPECT_TRUE(r.pass()) << r.max_gap << " " << r.e1 << " " << r.dual_norm * r.inner_norm;
    }
  }
  auto J = JordanMorphism::doubling(2);
  auto a = 0.3 * random_self_adjoint(rng, J.source());
  a = (0.5 / luxemburg_norm(singular_values(a), sq)) * a;
  auto r = modular_chain_check(J, id, sq, a);
  EXPECT_NEAR(r.e4, 2 * trace(apply_function(sq, a)).real(), 1e-12);
  auto cap = OrliczFunction::linear_until_cap(1.0);
  auto big = AlgebraElement::diagonal(TracedAlgebra::full(2), {0.5, 0.0});
  auto out = modular_chain_check(JordanMorphism::identity(TracedAlgebra::full(2)), OrliczFunction::power(2, 0.01), cap, big);
  EXPECT_TRUE(out.hypothesis_ok);
}

TEST(Morphisms, TauT) {
  auto rng = make_rng(24, "tau-t");
  auto tt = build_tau_T(JordanMorphism::transpose(2));
  auto a = random_element(rng, TracedAlgebra::full(2));
  EXPECT_LT(std::abs(tt(a) - trace(a)), 1e-14);
  auto dd = build_tau_T(JordanMorphism::doubling(2));
  EXPECT_LT(std::abs(dd(a) - 2.0 * trace(a)), 1e-13);
  auto J = JordanMorphism::kernel(2);
  auto kt = build_tau_T(J);
  auto p = AlgebraElement::central(J.source(), {0.0, 1.0}) * random_positive(rng, J.source());
  EXPECT_EQ(trace(J(p)).real(), 0.0);
  EXPECT_GT(kt(p).real(), 0.0);
  for (const auto& M : corpus(rng)) EXPECT_TRUE(tau_T_check(M, rng, 20).pass());
}
