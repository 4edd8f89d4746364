#pragma once

// Finite-dimensional semifinite von Neumann algebras: direct sums of full
// matrix blocks M_{n_k} carrying the trace tau(a) = sum_k c_k Tr(a_k).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ncorlicz/errors.hpp"
#include "ncorlicz/numeric.hpp"
#include "ncorlicz/orlicz.hpp"

namespace ncorlicz {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

struct BlockSpec {
  int dim = 1;
  double weight = 1.0;

  friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
};

class TracedAlgebra {
 public:
  TracedAlgebra() = default;

  explicit TracedAlgebra(std::vector<BlockSpec> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw StructuralError("algebra needs at least one block");
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      if (blocks_[k].dim < 1)
        throw StructuralError("block " + std::to_string(k) + " has dimension < 1");
      if (!(blocks_[k].weight > 0.0) || !std::isfinite(blocks_[k].weight))
        throw StructuralError("block " + std::to_string(k) + " has a non-positive weight");
    }
  }

  /// M_n with trace weight c.
  static TracedAlgebra full(int n, double weight = 1.0) { return TracedAlgebra({{n, weight}}); }

  /// Commutative algebra: one 1x1 block per weight.
  static TracedAlgebra commutative(const std::vector<double>& weights) {
    std::vector<BlockSpec> b;
    b.reserve(weights.size());
    for (double w : weights) b.push_back({1, w});
    return TracedAlgebra(std::move(b));
  }

  std::size_t num_blocks() const { return blocks_.size(); }
  const BlockSpec& block(std::size_t k) const { return blocks_.at(k); }
  const std::vector<BlockSpec>& blocks() const { return blocks_; }

  /// tau(1) = sum_k c_k n_k.
  double total_trace() const {
    double s = 0.0;
    for (const auto& b : blocks_) s += b.weight * b.dim;
    return s;
  }

  /// Sum of block dimensions (size of the block-diagonal representation).
  int total_dim() const {
    int s = 0;
    for (const auto& b : blocks_) s += b.dim;
    return s;
  }

  bool is_commutative() const {
    return std::all_of(blocks_.begin(), blocks_.end(), [](const BlockSpec& b) { return b.dim == 1; });
  }

  friend bool operator==(const TracedAlgebra&, const TracedAlgebra&) = default;

 private:
  std::vector<BlockSpec> blocks_;
};

/// Block-diagonal element of a TracedAlgebra.
class AlgebraElement {
 public:
  AlgebraElement() = default;

  AlgebraElement(TracedAlgebra algebra, std::vector<Matrix> blocks)
      : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
    if (blocks_.size() != algebra_.num_blocks())
      throw StructuralError("element has " + std::to_string(blocks_.size()) + " blocks, algebra has " +
                            std::to_string(algebra_.num_blocks()));
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      const int n = algebra_.block(k).dim;
      if (blocks_[k].rows() != n || blocks_[k].cols() != n)
        throw StructuralError("block " + std::to_string(k) + " is not " + std::to_string(n) + "x" +
                              std::to_string(n));
    }
  }

  static AlgebraElement zero(const TracedAlgebra& alg) {
    std::vector<Matrix> b;
    for (const auto& s : alg.blocks()) b.push_back(Matrix::Zero(s.dim, s.dim));
    return {alg, std::move(b)};
  }

  static AlgebraElement identity(const TracedAlgebra& alg) {
    std::vector<Matrix> b;
    for (const auto& s : alg.blocks()) b.push_back(Matrix::Identity(s.dim, s.dim));
    return {alg, std::move(b)};
  }

  /// Diagonal element; `diag` lists the diagonal of every block in order.
  static AlgebraElement diagonal(const TracedAlgebra& alg, const std::vector<double>& diag) {
    if (static_cast<int>(diag.size()) != alg.total_dim())
      throw StructuralError("diagonal has the wrong length for this algebra");
    std::vector<Matrix> b;
    std::size_t pos = 0;
    for (const auto& s : alg.blocks()) {
      Matrix m = Matrix::Zero(s.dim, s.dim);
      for (int i = 0; i < s.dim; ++i) m(i, i) = diag[pos++];
      b.push_back(std::move(m));
    }
    return {alg, std::move(b)};
  }

  /// Central element sum_k values[k] * 1_k.
  static AlgebraElement central(const TracedAlgebra& alg, const std::vector<double>& values) {
    if (values.size() != alg.num_blocks()) throw StructuralError("one value per block expected");
    std::vector<Matrix> b;
    for (std::size_t k = 0; k < values.size(); ++k) {
      const int n = alg.block(k).dim;
      b.push_back(values[k] * Matrix::Identity(n, n));
    }
    return {alg, std::move(b)};
  }

  const TracedAlgebra& algebra() const { return algebra_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  const Matrix& block(std::size_t k) const { return blocks_.at(k); }
  const std::vector<Matrix>& blocks() const { return blocks_; }

  AlgebraElement adjoint() const {
    return map([](const Matrix& m) -> Matrix { return m.adjoint(); });
  }
  AlgebraElement transpose() const {
    return map([](const Matrix& m) -> Matrix { return m.transpose(); });
  }

  template <typename F>
  AlgebraElement map(F&& f) const {
    std::vector<Matrix> b;
    b.reserve(blocks_.size());
    for (const auto& m : blocks_) b.push_back(f(m));
    return {algebra_, std::move(b)};
  }

  /// max over blocks of the Frobenius norm.
  double max_block_norm() const {
    double n = 0.0;
    for (const auto& m : blocks_) n = std::max(n, m.norm());
    return n;
  }

  bool is_self_adjoint(double tol = 1e-10) const {
    for (const auto& m : blocks_)
      if ((m - m.adjoint()).norm() > tol * std::max(1.0, m.norm())) return false;
    return true;
  }

  friend AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y) {
    return zip(x, y, [](const Matrix& a, const Matrix& b) -> Matrix { return a + b; });
  }
  friend AlgebraElement operator-(const AlgebraElement& x, const AlgebraElement& y) {
    return zip(x, y, [](const Matrix& a, const Matrix& b) -> Matrix { return a - b; });
  }
  friend AlgebraElement operator*(const AlgebraElement& x, const AlgebraElement& y) {
    return zip(x, y, [](const Matrix& a, const Matrix& b) -> Matrix { return a * b; });
  }
  friend AlgebraElement operator*(Complex s, const AlgebraElement& x) {
    return x.map([s](const Matrix& m) -> Matrix { return s * m; });
  }
  friend AlgebraElement operator*(double s, const AlgebraElement& x) { return Complex(s, 0.0) * x; }

 private:
  template <typename F>
  static AlgebraElement zip(const AlgebraElement& x, const AlgebraElement& y, F&& f) {
    if (!(x.algebra_ == y.algebra_)) throw StructuralError("elements belong to different algebras");
    std::vector<Matrix> b;
    b.reserve(x.blocks_.size());
    for (std::size_t k = 0; k < x.blocks_.size(); ++k) b.push_back(f(x.blocks_[k], y.blocks_[k]));
    return {x.algebra_, std::move(b)};
  }

  TracedAlgebra algebra_;
  std::vector<Matrix> blocks_;
};

/// tau(a) = sum_k c_k Tr(a_k).
inline Complex trace(const AlgebraElement& a) {
  Complex s = 0.0;
  for (std::size_t k = 0; k < a.num_blocks(); ++k) s += a.algebra().block(k).weight * a.block(k).trace();
  return s;
}

inline Complex trace(const TracedAlgebra& alg, const AlgebraElement& a) {
  if (!(alg == a.algebra())) throw StructuralError("element does not belong to this algebra");
  return trace(a);
}

/// Per-block Hermitian eigendecomposition (ascending eigenvalues).
struct BlockSpectrum {
  std::vector<RealVector> values;
  std::vector<Matrix> vectors;
};

namespace detail {

inline void clamp_small_negatives(RealVector& v, double scale, double rel) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) < 0.0 && v(i) >= -rel * scale) v(i) = 0.0;
}

}  // namespace detail

/// Eigendecomposition of the Hermitian part (h + h*)/2 of every block.
inline BlockSpectrum hermitian_spectrum(const AlgebraElement& h) {
  BlockSpectrum out;
  for (std::size_t k = 0; k < h.num_blocks(); ++k) {
    const Matrix sym = 0.5 * (h.block(k) + h.block(k).adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    if (es.info() != Eigen::Success)
      throw NumericError("Hermitian eigensolver did not converge in block " + std::to_string(k));
    out.values.push_back(es.eigenvalues());
    out.vectors.push_back(es.eigenvectors());
  }
  return out;
}

/// Spectral data of |a| per block: singular values (descending) and the
/// right singular vectors, which diagonalise a*a. Computed with a Jacobi SVD,
/// which keeps small singular values accurate.
inline BlockSpectrum abs_spectrum(const AlgebraElement& a) {
  BlockSpectrum out;
  for (std::size_t k = 0; k < a.num_blocks(); ++k) {
    Eigen::JacobiSVD<Matrix> svd(a.block(k), Eigen::ComputeFullV);
    RealVector v = svd.singularValues();
    if (!v.allFinite()) throw NumericError("singular value decomposition failed in block " + std::to_string(k));
    out.values.push_back(std::move(v));
    out.vectors.push_back(svd.matrixV());
  }
  return out;
}

inline Matrix reassemble(const Matrix& vectors, const RealVector& values) {
  return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
}

/// Functional calculus f(h) for the Hermitian part of h.
template <typename F>
AlgebraElement apply_hermitian(F&& f, const AlgebraElement& h) {
  const auto spec = hermitian_spectrum(h);
  std::vector<Matrix> b;
  for (std::size_t k = 0; k < h.num_blocks(); ++k) {
    RealVector v = spec.values[k];
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = f(v(i));
    b.push_back(reassemble(spec.vectors[k], v));
  }
  return {h.algebra(), std::move(b)};
}

/// |a| = (a*a)^{1/2}.
inline AlgebraElement abs_value(const AlgebraElement& a) {
  const auto spec = abs_spectrum(a);
  std::vector<Matrix> b;
  for (std::size_t k = 0; k < a.num_blocks(); ++k) {
    const RealVector& v = spec.values[k];
    b.push_back(reassemble(spec.vectors[k], v));
  }
  return {a.algebra(), std::move(b)};
}

/// phi(scale * |a|) through the spectral decomposition of |a|. Throws
/// NotMeasurableError when phi is infinite at some scaled singular value.
inline AlgebraElement apply_function(const OrliczFunction& phi, const AlgebraElement& a, double scale = 1.0) {
  if (!(scale > 0.0)) throw DomainError("functional calculus scale must be positive");
  const auto spec = abs_spectrum(a);
  std::vector<Matrix> b;
  for (std::size_t k = 0; k < a.num_blocks(); ++k) {
    RealVector v = spec.values[k];
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double s = v(i);
      v(i) = phi(scale * s);
      if (is_inf(v(i))) throw NotMeasurableError(s, k);
    }
    b.push_back(reassemble(spec.vectors[k], v));
  }
  return {a.algebra(), std::move(b)};
}

/// Square root of a positive element; eigenvalues in [-eps * ||a||, 0) are
/// treated as round-off and clamped to 0.
inline AlgebraElement positive_sqrt(const AlgebraElement& a) {
  const auto spec = hermitian_spectrum(a);
  const double clamp = default_tolerances().eigen_clamp;
  std::vector<Matrix> b;
  for (std::size_t k = 0; k < a.num_blocks(); ++k) {
    RealVector v = spec.values[k];
    detail::clamp_small_negatives(v, std::max(1.0, a.block(k).norm()), clamp);
    if (v.size() > 0 && v.minCoeff() < 0.0)
      throw DomainError("square root of a non-positive element (block " + std::to_string(k) + ")");
    b.push_back(reassemble(spec.vectors[k], v.cwiseSqrt()));
  }
  return {a.algebra(), std::move(b)};
}

/// Largest singular value over all blocks (operator norm).
inline double operator_norm(const AlgebraElement& a) {
  double n = 0.0;
  for (const auto& m : a.blocks()) {
    Eigen::JacobiSVD<Matrix> svd(m);
    if (svd.singularValues().size() > 0) n = std::max(n, svd.singularValues()(0));
  }
  return n;
}

inline bool is_projection(const AlgebraElement& e, double tol = default_tolerances().projection) {
  for (const auto& m : e.blocks()) {
    if ((m * m - m).norm() > tol) return false;
    if ((m.adjoint() - m).norm() > tol) return false;
  }
  return true;
}

/// a >= 0 up to `tol` relative to the block norm.
inline bool is_positive(const AlgebraElement& a, double tol = 1e-10) {
  if (!a.is_self_adjoint(tol)) return false;
  const auto spec = hermitian_spectrum(a);
  for (std::size_t k = 0; k < spec.values.size(); ++k)
    if (spec.values[k].size() > 0 && spec.values[k].minCoeff() < -tol * std::max(1.0, a.block(k).norm()))
      return false;
  return true;
}

/// Luxemburg norm of a projection, 1 / phi^{-1}(1 / tau(e)).
inline double projection_trace_norm(const TracedAlgebra& alg, const AlgebraElement& e, const OrliczFunction& phi) {
  if (!(alg == e.algebra())) throw StructuralError("projection does not belong to this algebra");
  if (!is_projection(e)) throw DomainError("element is not a projection");
  const double te = trace(e).real();
  if (!(te > 0.5 * default_tolerances().projection)) throw DomainError("projection has zero trace");
  return 1.0 / formal_inverse(phi, 1.0 / te);
}

}  // namespace ncorlicz
