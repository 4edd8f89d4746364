#pragma once

// Integration of nonnegative functions over (0, T], T possibly infinite, with
// divergence detection. Each finite piece goes through Boost's adaptive
// Gauss-Kronrod rule; the ends are split into dyadic pieces so that integrable
// singularities at 0 and slowly decaying tails at infinity are summed as series
// whose ratio decides convergence.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ncorlicz/errors.hpp"
#include "ncorlicz/numeric.hpp"

namespace ncorlicz {

struct QuadratureOptions {
  double abs_tol = default_tolerances().quad_abs;
  double rel_tol = default_tolerances().quad_rel;
  double cap = default_tolerances().divergence_cap;
};

struct QuadratureResult {
  double value = 0.0;  // +inf when divergent
  double error = 0.0;  // accumulated Gauss-Kronrod error estimate
  int pieces = 0;
  bool diverged() const { return is_inf(value); }
};

namespace detail {

inline constexpr int kMaxDyadicLevels = 1000;
inline constexpr double kNegligible = 1e-17;
inline constexpr double kRatioLimit = 0.999;

struct Accumulator {
  double sum = 0.0;
  double error = 0.0;
  int pieces = 0;
};

/// Gauss-Kronrod on [a, b], mapped onto [0, 1] so that the error estimate
/// stays relative to the piece; returns +inf on non-finite values.
template <typename F>
double gk_piece(F& f, double a, double b, Accumulator& acc) {
  double err = 0.0;
  double v = 0.0;
  const double len = b - a;
  auto g = [&](double s) { return static_cast<double>(f(a + s * len)) * len; };
  try {
    v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, 0.0, 1.0, 12, 1e-12, &err);
  } catch (const std::exception&) {
    return kInf;
  }
  ++acc.pieces;
  if (!std::isfinite(v) || std::isnan(err)) return kInf;
  acc.error += std::abs(err);
  return v;
}

/// Sums pieces produced by `piece(k)` for k = 0, 1, ... treating the result as
/// a series; geometric extrapolation closes the tail, ratio >= kRatioLimit
/// or a partial sum above `cap` means divergence. Before stopping early on
/// negligible pieces, `deep(k)` estimates f * width far beyond level k, so an
/// integrand that only blows up very close to the singular end is not missed.
template <typename Piece, typename Deep>
double sum_dyadic(Piece&& piece, Deep&& deep, int levels, double cap) {
  double sum = 0.0;
  double prev = -1.0;
  double last = -1.0;
  int negligible_run = 0;
  for (int k = 0; k < levels; ++k) {
    const double p = piece(k);
    if (!std::isfinite(p)) return kInf;
    sum += p;
    if (sum > cap) return kInf;
    prev = last;
    last = p;
    if (p <= kNegligible * sum) {
      if (++negligible_run >= 3 && k >= 4) {
        bool settled = true;
        for (int j = k + 25; j < levels && settled; j += 25) {
          const double d = deep(j);
          if (!std::isfinite(d)) return kInf;
          settled = d <= kNegligible * sum;
        }
        if (settled) return sum;
        negligible_run = 0;
      }
    } else {
      negligible_run = 0;
    }
  }
  if (last <= 0.0) return sum;
  if (prev <= 0.0) return kInf;
  const double r = last / prev;
  if (r >= kRatioLimit) return kInf;
  const double total = sum + last * r / (1.0 - r);
  return total > cap ? kInf : total;
}

}  // namespace detail

/// Integral of a nonnegative f over (lo, hi] where f may be singular at lo.
/// Dyadic pieces [lo + h 2^{-k-1}, lo + h 2^{-k}] approach lo.
template <typename F>
QuadratureResult integrate_left_singular(F f, double lo, double hi, const QuadratureOptions& opt = {}) {
  detail::Accumulator acc;
  const double h = hi - lo;
  QuadratureResult r;
  if (!(h > 0.0)) return r;
  const int levels = std::min(detail::kMaxDyadicLevels, static_cast<int>(std::log2(h / 1e-300)) - 1);
  r.value = detail::sum_dyadic(
      [&](int k) {
        const double right = lo + std::ldexp(h, -k);
        const double left = lo + std::ldexp(h, -k - 1);
        return detail::gk_piece(f, left, right, acc);
      },
      [&](int k) {
        const double x = lo + std::ldexp(h, -k);
        return static_cast<double>(f(x)) * (x - lo);
      },
      levels, opt.cap);
  r.error = acc.error;
  r.pieces = acc.pieces;
  return r;
}

/// Integral of a nonnegative f over [lo, inf) using pieces of doubling length.
template <typename F>
QuadratureResult integrate_to_infinity(F f, double lo, const QuadratureOptions& opt = {}) {
  detail::Accumulator acc;
  QuadratureResult r;
  r.value = detail::sum_dyadic(
      [&](int k) {
        const double left = lo + (std::ldexp(1.0, k) - 1.0);
        const double right = lo + (std::ldexp(1.0, k + 1) - 1.0);
        return detail::gk_piece(f, left, right, acc);
      },
      [&](int k) {
        const double x = lo + std::ldexp(1.0, k);
        return static_cast<double>(f(x)) * x;
      },
      detail::kMaxDyadicLevels, opt.cap);
  r.error = acc.error;
  r.pieces = acc.pieces;
  return r;
}

/// Integral of a nonnegative f over (0, end], split at `breakpoints`
/// (interior points where f may jump). Only the first segment may carry a
/// singularity at 0; the last segment is unbounded when end is infinite.
/// Throws NumericError when the accumulated error estimate misses the
/// tolerance on a finite result.
template <typename F>
QuadratureResult integrate_half_line(F f, std::vector<double> breakpoints, double end,
                                     const QuadratureOptions& opt = {}) {
  std::sort(breakpoints.begin(), breakpoints.end());
  std::vector<double> pts{0.0};
  for (double b : breakpoints)
    if (b > pts.back() && b < end && std::isfinite(b)) pts.push_back(b);
  if (std::isfinite(end)) pts.push_back(end);

  QuadratureResult total;
  auto add = [&](const QuadratureResult& part) {
    total.value += part.value;
    total.error += part.error;
    total.pieces += part.pieces;
  };
  if (pts.size() == 1) {
    // (0, inf) with no interior breakpoint
    add(integrate_left_singular(f, 0.0, 1.0, opt));
    if (!total.diverged()) add(integrate_to_infinity(f, 1.0, opt));
  } else {
    add(integrate_left_singular(f, pts[0], pts[1], opt));
    for (std::size_t i = 1; i + 1 < pts.size() && !total.diverged(); ++i) {
      detail::Accumulator acc;
      add({detail::gk_piece(f, pts[i], pts[i + 1], acc), acc.error, acc.pieces});
    }
    if (!std::isfinite(end) && !total.diverged()) add(integrate_to_infinity(f, pts.back(), opt));
  }
  if (total.value > opt.cap) total.value = kInf;
  if (!total.diverged() && total.error > std::max(opt.abs_tol, opt.rel_tol * total.value))
    throw NumericError("quadrature error estimate " + std::to_string(total.error) +
                       " exceeds tolerance for integral " + std::to_string(total.value));
  return total;
}

}  // namespace ncorlicz
