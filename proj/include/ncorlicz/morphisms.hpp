#pragma once

// Normal Jordan *-morphisms between multimatrix algebras, built block by
// block: target block k receives copies of source blocks (each copy either a_j
// or its transpose), a zero pad, and a unitary rotation. Also the
// Radon-Nikodym derivative f_J, the composition-operator bound and tau_T.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncorlicz/algebra.hpp"
#include "ncorlicz/norms.hpp"
#include "ncorlicz/orlicz.hpp"
#include "ncorlicz/random.hpp"
#include "ncorlicz/rearrangement.hpp"

namespace ncorlicz {

enum class Flavor { homomorphism, antihomomorphism };

inline const char* to_string(Flavor f) { return f == Flavor::homomorphism ? "homo" : "anti"; }

struct Assignment {
  std::size_t src = 0;
  int copies = 1;
  Flavor flavor = Flavor::homomorphism;
};

struct TargetBlock {
  bool zero = false;
  std::vector<Assignment> assignments;
  Matrix unitary;  // empty means identity
  int pad = 0;

  static TargetBlock zero_block() {
    TargetBlock b;
    b.zero = true;
    return b;
  }
};

class JordanMorphism {
 public:
  JordanMorphism(TracedAlgebra source, TracedAlgebra target, std::vector<TargetBlock> blocks)
      : source_(std::move(source)), target_(std::move(target)), blocks_(std::move(blocks)) {
    if (blocks_.size() != target_.num_blocks())
      throw StructuralError("morphism lists " + std::to_string(blocks_.size()) + " target blocks, target has " +
                            std::to_string(target_.num_blocks()));
    referenced_.assign(source_.num_blocks(), false);
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      const auto& b = blocks_[k];
      const std::string where = "target block " + std::to_string(k);
      if (b.zero) continue;
      if (b.assignments.empty()) throw StructuralError(where + ": no assignments");
      if (b.pad < 0) throw StructuralError(where + ": negative pad");
      int dim = b.pad;
      for (const auto& as : b.assignments) {
        if (as.src >= source_.num_blocks()) throw StructuralError(where + ": source block out of range");
        if (as.copies < 1) throw StructuralError(where + ": copies must be >= 1");
        dim += as.copies * source_.block(as.src).dim;
        referenced_[as.src] = true;
      }
      const int m = target_.block(k).dim;
      if (dim != m)
        throw StructuralError(where + ": copies and pad fill " + std::to_string(dim) + " of " + std::to_string(m) +
                              " rows");
      if (b.unitary.size() > 0) {
        if (b.unitary.rows() != m || b.unitary.cols() != m) throw StructuralError(where + ": unitary has wrong shape");
        if ((b.unitary.adjoint() * b.unitary - Matrix::Identity(m, m)).norm() > 1e-10)
          throw StructuralError(where + ": matrix is not unitary");
      }
    }
  }

  const TracedAlgebra& source() const { return source_; }
  const TracedAlgebra& target() const { return target_; }
  const std::vector<TargetBlock>& blocks() const { return blocks_; }
  bool referenced(std::size_t j) const { return referenced_.at(j); }

  AlgebraElement operator()(const AlgebraElement& a) const {
    if (!(a.algebra() == source_)) throw StructuralError("element does not belong to the morphism source");
    std::vector<Matrix> out;
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      const int m = target_.block(k).dim;
      Matrix block = Matrix::Zero(m, m);
      const auto& b = blocks_[k];
      if (!b.zero) {
        int at = 0;
        for (const auto& as : b.assignments) {
          const Matrix& src = a.block(as.src);
          const int n = static_cast<int>(src.rows());
          for (int c = 0; c < as.copies; ++c) {
            if (as.flavor == Flavor::homomorphism)
              block.block(at, at, n, n) = src;
            else
              block.block(at, at, n, n) = src.transpose();
            at += n;
          }
        }
        if (b.unitary.size() > 0) block = b.unitary * block * b.unitary.adjoint();
      }
      out.push_back(std::move(block));
    }
    return {target_, std::move(out)};
  }

  /// Central projection onto the source blocks no assignment refers to.
  AlgebraElement kernel_projection() const {
    std::vector<double> v;
    for (std::size_t j = 0; j < source_.num_blocks(); ++j) v.push_back(referenced_[j] ? 0.0 : 1.0);
    return AlgebraElement::central(source_, v);
  }

  // Constructors for the standard corpus.

  static JordanMorphism identity(const TracedAlgebra& alg) {
    std::vector<TargetBlock> b;
    for (std::size_t j = 0; j < alg.num_blocks(); ++j) b.push_back({false, {{j, 1, Flavor::homomorphism}}, {}, 0});
    return {alg, alg, b};
  }

  /// a -> a^T on M_n.
  static JordanMorphism transpose(int n, double weight = 1.0) {
    auto alg = TracedAlgebra::full(n, weight);
    return {alg, alg, {{false, {{0, 1, Flavor::antihomomorphism}}, {}, 0}}};
  }

  /// a -> a (+) a^T from M_n into M_n (+) M_n.
  static JordanMorphism doubling(int n) {
    return {TracedAlgebra::full(n),
            TracedAlgebra({{n, 1.0}, {n, 1.0}}),
            {{false, {{0, 1, Flavor::homomorphism}}, {}, 0}, {false, {{0, 1, Flavor::antihomomorphism}}, {}, 0}}};
  }

  /// M_n (+) M_n -> M_n keeping the first block; the second is the kernel.
  static JordanMorphism kernel(int n) {
    return {TracedAlgebra({{n, 1.0}, {n, 1.0}}), TracedAlgebra::full(n), {{false, {{0, 1, Flavor::homomorphism}}, {}, 0}}};
  }

  /// Non-unital embedding M_n -> M_{n + pad}.
  static JordanMorphism padded(int n, int pad) {
    return {TracedAlgebra::full(n), TracedAlgebra::full(n + pad), {{false, {{0, 1, Flavor::homomorphism}}, {}, pad}}};
  }

  static JordanMorphism zero(const TracedAlgebra& source, const TracedAlgebra& target) {
    return {source, target, std::vector<TargetBlock>(target.num_blocks(), TargetBlock::zero_block())};
  }

  /// Same block structure with every target block rotated by a random unitary.
  JordanMorphism rotated(Rng& rng) const {
    auto b = blocks_;
    for (std::size_t k = 0; k < b.size(); ++k)
      if (!b[k].zero) b[k].unitary = random_unitary(rng, target_.block(k).dim);
    return {source_, target_, b};
  }

  /// Same morphism with different target weights.
  JordanMorphism reweighted(const std::vector<double>& weights) const {
    if (weights.size() != target_.num_blocks()) throw StructuralError("one weight per target block expected");
    std::vector<BlockSpec> t = target_.blocks();
    for (std::size_t k = 0; k < t.size(); ++k) t[k].weight = weights[k];
    return {source_, TracedAlgebra(t), blocks_};
  }

 private:
  TracedAlgebra source_;
  TracedAlgebra target_;
  std::vector<TargetBlock> blocks_;
  std::vector<bool> referenced_;
};

inline AlgebraElement apply_jordan(const JordanMorphism& J, const AlgebraElement& a) { return J(a); }

/// Largest violation of the Jordan axioms on the given pair (a, b):
/// J(a o b) = J(a) o J(b), J(a*) = J(a)*, J(1) a projection, |J(h)| = J(|h|)
/// for the self-adjoint part h of a.
inline double jordan_axiom_violation(const JordanMorphism& J, const AlgebraElement& a, const AlgebraElement& b) {
  auto sym = [](const AlgebraElement& x, const AlgebraElement& y) { return 0.5 * (x * y + y * x); };
  const double scale = std::max(1.0, a.max_block_norm() * b.max_block_norm());
  double v = (J(sym(a, b)) - sym(J(a), J(b))).max_block_norm() / scale;
  v = std::max(v, (J(a.adjoint()) - J(a).adjoint()).max_block_norm() / std::max(1.0, a.max_block_norm()));
  const auto one = J(AlgebraElement::identity(J.source()));
  v = std::max(v, (one * one - one).max_block_norm() + (one.adjoint() - one).max_block_norm());
  const auto h = 0.5 * (a + a.adjoint());
  v = std::max(v, (abs_value(J(h)) - J(abs_value(h))).max_block_norm() / std::max(1.0, h.max_block_norm()));
  return v;
}

/// f_J = sum_j lambda_j z_j, lambda_j = tau_2(J(p_j)) / tau_1(p_j) with p_j
/// the (1,1) matrix unit of source block j.
inline AlgebraElement radon_nikodym(const JordanMorphism& J) {
  const auto& src = J.source();
  std::vector<double> lambda;
  for (std::size_t j = 0; j < src.num_blocks(); ++j) {
    std::vector<Matrix> b;
    for (std::size_t i = 0; i < src.num_blocks(); ++i) b.push_back(Matrix::Zero(src.block(i).dim, src.block(i).dim));
    b[j](0, 0) = 1.0;
    const AlgebraElement p(src, std::move(b));
    lambda.push_back(trace(J(p)).real() / src.block(j).weight);
  }
  return AlgebraElement::central(src, lambda);
}

/// Per-block values lambda_j of f_J.
inline std::vector<double> radon_nikodym_values(const JordanMorphism& J) {
  const auto f = radon_nikodym(J);
  std::vector<double> v;
  for (const auto& b : f.blocks()) v.push_back(b(0, 0).real());
  return v;
}

struct AbsoluteContinuityReport {
  double sup_fj = 0.0;  // ||f_J||_inf
  std::vector<std::pair<double, double>> delta;  // (epsilon, delta(epsilon)); delta = inf when f_J = 0
  int projections = 0;
  int violations = 0;
  bool pass() const { return violations == 0; }
};

/// delta(eps) = eps / ||f_J||_inf, verified on every diagonal projection:
/// tau_1(e) < delta implies tau_2(J(e)) < eps.
inline AbsoluteContinuityReport absolute_continuity_check(const JordanMorphism& J,
                                                          const std::vector<double>& epsilons = {1e-3, 0.1, 0.5, 1.0, 3.0}) {
  AbsoluteContinuityReport r;
  const auto lambda = radon_nikodym_values(J);
  r.sup_fj = lambda.empty() ? 0.0 : *std::max_element(lambda.begin(), lambda.end());
  for (double eps : epsilons) r.delta.emplace_back(eps, r.sup_fj > 0.0 ? eps / r.sup_fj : kInf);
  const auto& src = J.source();
  const int dim = src.total_dim();
  if (dim > 16) throw DomainError("projection lattice too large to enumerate");
  for (unsigned mask = 1; mask < (1u << dim); ++mask) {
    std::vector<double> diag(dim);
    for (int i = 0; i < dim; ++i) diag[i] = (mask >> i) & 1u ? 1.0 : 0.0;
    const auto e = AlgebraElement::diagonal(src, diag);
    const double t1 = trace(e).real(), t2 = trace(J(e)).real();
    ++r.projections;
    for (const auto& [eps, delta] : r.delta)
      if (t1 < delta && !(t2 < eps * (1.0 + 1e-12))) ++r.violations;
  }
  return r;
}

/// max{1, ||f_J||^0_{psi*}}, the Amemiya norm of mu(f_J) for the conjugate of psi.
inline double composition_bound(const JordanMorphism& J, const OrliczFunction& psi) {
  const auto f = radon_nikodym(J);
  return std::max(1.0, kothe_dual_norm(singular_values(f), psi));
}

struct CompositionReport {
  double bound = 1.0;       // B
  double max_ratio = 0.0;   // max ||J(a)||_{phi2} over samples with ||a||_{phi1} < 1
  double max_nonsa_ratio = 0.0;  // same for non-self-adjoint samples, recorded only
  int samples = 0;
  int violations = 0;
  std::vector<double> fj;
  bool pass() const { return violations == 0; }
};

/// Draws self-adjoint a, rescales to ||a||_{phi1} < 1 and checks
/// ||J(a)||_{phi2} <= B. Non-self-adjoint samples are measured but not judged.
inline CompositionReport composition_bound_check(const JordanMorphism& J, const OrliczFunction& psi,
                                                 const OrliczFunction& phi2, Rng& rng, int samples, double slack = 1e-7) {
  const auto phi1 = compose_orlicz(psi, phi2);
  CompositionReport r;
  r.fj = radon_nikodym_values(J);
  r.bound = composition_bound(J, psi);
  for (int i = 0; i < samples; ++i) {
    for (bool self_adjoint : {true, false}) {
      auto a = self_adjoint ? random_self_adjoint(rng, J.source()) : random_element(rng, J.source());
      const double n1 = luxemburg_norm(singular_values(a), phi1);
      if (n1 == 0.0) continue;
      a = (uniform(rng, 0.05, 0.999) / n1) * a;
      const double ratio = luxemburg_norm(singular_values(J(a)), phi2);
      if (self_adjoint) {
        ++r.samples;
        r.max_ratio = std::max(r.max_ratio, ratio);
        if (ratio > r.bound + slack) ++r.violations;
      } else {
        r.max_nonsa_ratio = std::max(r.max_nonsa_ratio, ratio);
      }
    }
  }
  return r;
}

struct ModularChainReport {
  bool hypothesis_ok = true;  // false when phi2 is infinite on a spectrum involved
  std::string hypothesis_note;
  double e1 = 0.0;  // tau_2(phi2(|J(a)|))
  double e2 = 0.0;  // tau_2(phi2(J(|a|)))
  double e3 = 0.0;  // tau_2(J(phi2(|a|)))
  double e4 = 0.0;  // tau_1(f^{1/2} phi2(|a|) f^{1/2})
  double max_gap = 0.0;
  double dual_norm = 0.0;    // ||f_J||^0_{psi*}
  double inner_norm = 0.0;   // ||phi2(|a|)||_psi
  double outer_norm = 0.0;   // ||a||_{phi1}
  bool equalities = false;
  bool bound = false;
  bool pass() const { return !hypothesis_ok || (equalities && bound); }
};

inline ModularChainReport modular_chain_check(const JordanMorphism& J, const OrliczFunction& psi,
                                              const OrliczFunction& phi2, const AlgebraElement& a, double tol = 1e-9) {
  ModularChainReport r;
  if (!a.is_self_adjoint(1e-12)) throw DomainError("modular chain needs a self-adjoint element");
  const auto phi1 = compose_orlicz(psi, phi2);
  r.outer_norm = luxemburg_norm(singular_values(a), phi1);
  if (!(r.outer_norm < 1.0)) throw DomainError("modular chain needs ||a||_phi1 < 1");
  AlgebraElement pa;
  try {
    r.e1 = trace(apply_function(phi2, J(a))).real();
    r.e2 = trace(apply_function(phi2, J(abs_value(a)))).real();
    pa = apply_function(phi2, a);
  } catch (const NotMeasurableError& e) {
    r.hypothesis_ok = false;
    r.hypothesis_note = e.what();
    return r;
  }
  r.e3 = trace(J(pa)).real();
  const auto f = radon_nikodym(J);
  const auto root = positive_sqrt(f);
  r.e4 = trace(root * pa * root).real();
  const double vals[] = {r.e1, r.e2, r.e3, r.e4};
  for (double x : vals)
    for (double y : vals) r.max_gap = std::max(r.max_gap, std::abs(x - y) / std::max(1.0, std::max(x, y)));
  r.equalities = r.max_gap <= tol;
  r.dual_norm = kothe_dual_norm(singular_values(f), psi);
  r.inner_norm = luxemburg_norm(singular_values(pa), psi);
  const double lhs = r.e1;
  r.bound = lhs <= r.dual_norm * r.inner_norm * (1 + 1e-8) + 1e-12 &&
            r.inner_norm <= r.outer_norm * (1 + 1e-8) + 1e-12;
  return r;
}

/// tau_T(a) = tau_1(e a) + tau_2(J((1 - e) a)) with e the kernel projection.
class TauT {
 public:
  explicit TauT(JordanMorphism J) : J_(std::move(J)), e_(J_.kernel_projection()) {}
  Complex operator()(const AlgebraElement& a) const {
    const auto one = AlgebraElement::identity(J_.source());
    return trace(e_ * a) + trace(J_((one - e_) * a));
  }
  const AlgebraElement& kernel() const { return e_; }

 private:
  JordanMorphism J_;
  AlgebraElement e_;
};

inline TauT build_tau_T(const JordanMorphism& J) { return TauT(J); }

struct TauTReport {
  double trace_gap = 0.0;        // max |tau_T(a*a) - tau_T(aa*)| relative
  double min_positive = kInf;    // min tau_T(p) / ||p|| over nonzero positives
  double domination_gap = 0.0;   // max tau_2(J(p)) - tau_T(p), should be <= 0
  int samples = 0;
  bool pass(double tol = 1e-10) const { return trace_gap <= tol && min_positive > 0.0 && domination_gap <= tol; }
};

inline TauTReport tau_T_check(const JordanMorphism& J, Rng& rng, int samples) {
  const auto tt = build_tau_T(J);
  TauTReport r;
  for (int i = 0; i < samples; ++i) {
    const auto a = random_element(rng, J.source());
    const auto x = tt(a.adjoint() * a), y = tt(a * a.adjoint());
    r.trace_gap = std::max(r.trace_gap, std::abs(x - y) / std::max(1.0, std::abs(x)));
    // positives supported on a random single block exercise faithfulness
    // on the kernel too
    auto p = random_positive(rng, J.source());
    if (i % 2 == 1) {
      const std::size_t j = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(J.source().num_blocks()) - 1));
      std::vector<double> z(J.source().num_blocks(), 0.0);
      z[j] = 1.0;
      p = AlgebraElement::central(J.source(), z) * p;
    }
    const double tp = tt(p).real();
    r.min_positive = std::min(r.min_positive, tp / std::max(1e-300, p.max_block_norm()));
    r.domination_gap = std::max(r.domination_gap, (trace(J(p)).real() - tp) / std::max(1.0, tp));
    ++r.samples;
  }
  return r;
}

}  // namespace ncorlicz
