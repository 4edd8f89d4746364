#pragma once

// Seeded generators for test corpora. Every named check draws from its own
// engine, seeded from (seed, name) through FNV-1a, so adding a check never
// shifts the samples of another one.

#include <Eigen/QR>

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "ncorlicz/algebra.hpp"

namespace ncorlicz {

using Rng = std::mt19937_64;

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline Rng make_rng(std::uint64_t seed, std::string_view name = {}) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(fnv1a(name)), static_cast<std::uint32_t>(fnv1a(name) >> 32)};
  return Rng(seq);
}

// std::normal_distribution is implementation-defined; a Box-Muller draw on
// top of the engine keeps corpora identical across standard libraries.
inline double uniform01(Rng& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

inline int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline double gaussian(Rng& rng) {
  const double u1 = uniform01(rng), u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

inline Matrix random_matrix(Rng& rng, int rows, int cols, bool real = false) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(gaussian(rng), real ? 0.0 : gaussian(rng));
  return m;
}

inline Matrix random_unitary(Rng& rng, int n) {
  const Matrix g = random_matrix(rng, n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (int i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

/// Gaussian element; each block scaled by a random factor in [0.2, 3].
inline AlgebraElement random_element(Rng& rng, const TracedAlgebra& alg) {
  std::vector<Matrix> b;
  for (const auto& spec : alg.blocks()) b.push_back(uniform(rng, 0.2, 3.0) * random_matrix(rng, spec.dim, spec.dim));
  return {alg, std::move(b)};
}

inline AlgebraElement random_self_adjoint(Rng& rng, const TracedAlgebra& alg) {
  const auto a = random_element(rng, alg);
  return 0.5 * (a + a.adjoint());
}

inline AlgebraElement random_positive(Rng& rng, const TracedAlgebra& alg) {
  const auto a = random_element(rng, alg);
  return a.adjoint() * a;
}

/// Algebras used across the corpora: full blocks, commutative ones and
/// mixed multimatrix shapes with uneven weights.
inline std::vector<TracedAlgebra> standard_algebras() {
  return {
      TracedAlgebra::full(2),
      TracedAlgebra::full(3, 0.5),
      TracedAlgebra::commutative({1.0, 0.5, 2.0, 0.25}),
      TracedAlgebra({{2, 1.0}, {1, 0.3}}),
      TracedAlgebra({{1, 2.0}, {3, 0.7}, {2, 1.5}}),
      TracedAlgebra::full(4, 0.25),
  };
}

}  // namespace ncorlicz
