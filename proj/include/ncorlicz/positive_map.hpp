#pragma once

// Positive maps between multimatrix algebras in Kraus form. A term
// (src, dst, K, transpose, c) contributes c K a_src K* (or c K a_src^T K*) to
// block dst. Maps without transpose terms and with c >= 0 are completely
// positive; a negative c allows maps that fail positivity, which the checks
// report as a hypothesis violation.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ncorlicz/algebra.hpp"
#include "ncorlicz/norms.hpp"
#include "ncorlicz/random.hpp"
#include "ncorlicz/rearrangement.hpp"

namespace ncorlicz {

struct KrausTerm {
  std::size_t src = 0;
  std::size_t dst = 0;
  Matrix op;  // dim(dst) x dim(src)
  bool transpose = false;
  double coefficient = 1.0;
};

class PositiveMap {
 public:
  PositiveMap(TracedAlgebra source, TracedAlgebra target, std::vector<KrausTerm> terms, bool cp = true)
      : source_(std::move(source)), target_(std::move(target)), terms_(std::move(terms)), cp_(cp) {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const auto& t = terms_[i];
      const std::string where = "Kraus term " + std::to_string(i);
      if (t.src >= source_.num_blocks() || t.dst >= target_.num_blocks())
        throw StructuralError(where + ": block index out of range");
      if (t.op.rows() != target_.block(t.dst).dim || t.op.cols() != source_.block(t.src).dim)
        throw StructuralError(where + ": operator has the wrong shape");
      if (cp_ && t.transpose) throw StructuralError(where + ": transpose term in a map declared completely positive");
      if (cp_ && t.coefficient < 0.0)
        throw StructuralError(where + ": negative coefficient in a map declared completely positive");
    }
  }

  const TracedAlgebra& source() const { return source_; }
  const TracedAlgebra& target() const { return target_; }
  const std::vector<KrausTerm>& terms() const { return terms_; }
  bool cp() const { return cp_; }

  AlgebraElement operator()(const AlgebraElement& a) const {
    if (!(a.algebra() == source_)) throw StructuralError("element does not belong to the map source");
    std::vector<Matrix> out;
    for (const auto& b : target_.blocks()) out.push_back(Matrix::Zero(b.dim, b.dim));
    for (const auto& t : terms_) {
      const Matrix& x = a.block(t.src);
      if (t.transpose)
        out[t.dst] += t.coefficient * (t.op * x.transpose() * t.op.adjoint());
      else
        out[t.dst] += t.coefficient * (t.op * x * t.op.adjoint());
    }
    return {target_, std::move(out)};
  }

  /// Trace adjoint: tau_2(T(a) b) = tau_1(a T_dag(b)).
  AlgebraElement adjoint_apply(const AlgebraElement& b) const {
    if (!(b.algebra() == target_)) throw StructuralError("element does not belong to the map target");
    std::vector<Matrix> out;
    for (const auto& s : source_.blocks()) out.push_back(Matrix::Zero(s.dim, s.dim));
    for (const auto& t : terms_) {
      const double ratio = target_.block(t.dst).weight / source_.block(t.src).weight;
      Matrix m = t.op.adjoint() * b.block(t.dst) * t.op;
      if (t.transpose) m = m.transpose().eval();
      out[t.src] += (ratio * t.coefficient) * m;
    }
    return {source_, std::move(out)};
  }

  /// Smallest C with tau_2 o T <= C tau_1 on positives.
  double trace_constant() const { return operator_norm(adjoint_apply(AlgebraElement::identity(target_))); }
  /// ||T(1)||_inf.
  double unit_norm() const { return operator_norm((*this)(AlgebraElement::identity(source_))); }

  // Constructors for the standard corpus.

  /// Conditional expectation of M_n onto its diagonal.
  static PositiveMap pinching(int n) {
    auto alg = TracedAlgebra::full(n);
    std::vector<KrausTerm> t;
    for (int i = 0; i < n; ++i) {
      Matrix e = Matrix::Zero(n, n);
      e(i, i) = 1.0;
      t.push_back({0, 0, e, false});
    }
    return {alg, alg, t, true};
  }

  static PositiveMap scaled_identity(const TracedAlgebra& alg, double c) {
    std::vector<KrausTerm> t;
    for (std::size_t j = 0; j < alg.num_blocks(); ++j) {
      const int n = alg.block(j).dim;
      t.push_back({j, j, std::sqrt(c) * Matrix::Identity(n, n), false});
    }
    return {alg, alg, t, true};
  }

  /// a -> a^T: positive, not completely positive.
  static PositiveMap transpose_map(int n) {
    auto alg = TracedAlgebra::full(n);
    return {alg, alg, {{0, 0, Matrix::Identity(n, n), true}}, false};
  }

  /// Random mixture of unitary conjugations: unital and trace preserving.
  static PositiveMap random_unital_channel(Rng& rng, int n, int terms) {
    auto alg = TracedAlgebra::full(n);
    std::vector<double> p;
    double total = 0.0;
    for (int i = 0; i < terms; ++i) total += p.emplace_back(uniform(rng, 0.1, 1.0));
    std::vector<KrausTerm> t;
    for (int i = 0; i < terms; ++i) t.push_back({0, 0, std::sqrt(p[i] / total) * random_unitary(rng, n), false});
    return {alg, alg, t, true};
  }

  /// Random Kraus operators between arbitrary algebras (every block pair).
  static PositiveMap random_cp(Rng& rng, const TracedAlgebra& source, const TracedAlgebra& target, int per_pair) {
    std::vector<KrausTerm> t;
    for (std::size_t k = 0; k < target.num_blocks(); ++k)
      for (std::size_t j = 0; j < source.num_blocks(); ++j)
        for (int i = 0; i < per_pair; ++i)
          t.push_back({j, k, 0.5 * random_matrix(rng, target.block(k).dim, source.block(j).dim), false});
    return {source, target, t, true};
  }

 private:
  TracedAlgebra source_;
  TracedAlgebra target_;
  std::vector<KrausTerm> terms_;
  bool cp_;
};

/// Choi matrix sum_{ij} E_ij (x) T(E_ij) of a single-block map.
inline Matrix choi_matrix(const PositiveMap& T) {
  if (T.source().num_blocks() != 1 || T.target().num_blocks() != 1)
    throw DomainError("Choi matrix needs single-block source and target");
  const int n = T.source().block(0).dim, m = T.target().block(0).dim;
  Matrix c = Matrix::Zero(n * m, n * m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix e = Matrix::Zero(n, n);
      e(i, j) = 1.0;
      const auto img = T(AlgebraElement(T.source(), {e}));
      c.block(i * m, j * m, m, m) = img.block(0);
    }
  return c;
}

struct PurityReport {
  int choi_rank = 0;
  std::vector<double> choi_eigenvalues;  // descending
  bool pure = false;
};

/// Pure iff the Choi matrix has rank one.
inline PurityReport purity_check(const PositiveMap& T) {
  if (!T.cp()) throw DomainError("purity is defined for completely positive maps");
  const Matrix c = choi_matrix(T);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (c + c.adjoint()));
  if (es.info() != Eigen::Success) throw NumericError("Choi eigensolver did not converge");
  PurityReport r;
  const auto& ev = es.eigenvalues();
  const double top = ev.size() ? std::max(std::abs(ev.maxCoeff()), std::abs(ev.minCoeff())) : 0.0;
  for (Eigen::Index i = ev.size() - 1; i >= 0; --i) {
    r.choi_eigenvalues.push_back(ev(i));
    if (ev(i) > default_tolerances().choi_rank * top) ++r.choi_rank;
  }
  r.pure = r.choi_rank == 1;
  return r;
}

struct ContractionReport {
  double C = 0.0;
  double N = 0.0;
  double constant = 0.0;  // max(C, N)
  bool positive_on_samples = true;
  int samples = 0;
  int submajorization_failures = 0;
  int norm_failures = 0;
  double worst_norm_slack = kInf;  // min of constant ||a|| - ||T(a)||
  bool pass() const { return positive_on_samples && submajorization_failures == 0 && norm_failures == 0; }
};

/// mu(T(a)) / max(C, N) is submajorized by mu(a), hence
/// ||T(a)||_phi <= max(C, N) ||a||_phi.
inline ContractionReport interpolation_contraction_check(const PositiveMap& T, const OrliczFunction& phi, Rng& rng,
                                                         int samples, double tol = 1e-9) {
  ContractionReport r;
  r.C = T.trace_constant();
  r.N = T.unit_norm();
  r.constant = std::max(r.C, r.N);
  for (int i = 0; i < 4; ++i)
    if (!is_positive(T(random_positive(rng, T.source())), 1e-9)) r.positive_on_samples = false;
  if (!r.positive_on_samples) return r;
  for (int i = 0; i < samples; ++i) {
    const auto a = random_element(rng, T.source());
    const auto ta = T(a);
    const auto mu_a = singular_values(a);
    StepForm scaled = singular_values(ta).step();
    for (double& v : scaled.values) v /= r.constant;
    if (!submajorizes(mu_a, RearrangementFunction(scaled), tol)) ++r.submajorization_failures;
    const double na = luxemburg_norm(mu_a, phi), nt = luxemburg_norm(singular_values(ta), phi);
    const double slack = r.constant * na - nt;
    r.worst_norm_slack = std::min(r.worst_norm_slack, slack);
    if (slack < -tol * std::max(1.0, nt)) ++r.norm_failures;
    ++r.samples;
  }
  return r;
}

}  // namespace ncorlicz
