#pragma once

// Extended-real helpers and the one-dimensional searches shared by every
// module: monotone bisection, bracket growth and golden-section minimisation.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>

namespace ncorlicz {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Tolerances shared across modules; reports echo these values.
struct Tolerances {
  double bisection = 1e-10;      // relative, formal inverse and thresholds
  double threshold = 1e-12;      // threshold detection on custom functions
  double conjugate = 1e-8;       // numeric Legendre transform
  double quad_abs = 1e-10;       // adaptive quadrature, absolute
  double quad_rel = 1e-8;        // adaptive quadrature, relative
  double divergence_cap = 1e12;  // quadrature results above this are reported as infinity
  double modular_slack = 1e-9;   // absolute slack at the "modular <= 1" boundary
  double projection = 1e-10;     // ||e^2 - e||, ||e* - e||
  double eigen_clamp = 1e-12;    // relative clamp of slightly negative eigenvalues
  double submajorization = 1e-10;
  double choi_rank = 1e-10;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

inline bool is_inf(double x) { return std::isinf(x) && x > 0; }

/// Product weight * value in a modular integral, with 0 * inf = 0.
inline double modular_product(double value, double weight) {
  if (weight == 0.0 || value == 0.0) return 0.0;
  return value * weight;
}

/// Largest x in [lo, hi] with pred(x) true, assuming pred is true on a prefix
/// of the interval. Stops when hi - lo <= rel_tol * max(|hi|, tiny).
template <typename Pred>
double bisect_last_true(Pred&& pred, double lo, double hi, double rel_tol, int max_iter = 400) {
  for (int i = 0; i < max_iter; ++i) {
    if (hi - lo <= rel_tol * std::max(std::abs(hi), std::numeric_limits<double>::min())) break;
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

/// Smallest x in [lo, hi] with pred(x) true, assuming pred is true on a suffix.
template <typename Pred>
double bisect_first_true(Pred&& pred, double lo, double hi, double rel_tol, int max_iter = 400) {
  for (int i = 0; i < max_iter; ++i) {
    if (hi - lo <= rel_tol * std::max(std::abs(hi), std::numeric_limits<double>::min())) break;
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

struct MinimumResult {
  double argmin = 0.0;
  double value = kInf;
  int evaluations = 0;
};

/// Golden-section search for the minimum of a unimodal function on [lo, hi].
/// Infinite values are allowed; the best finite value seen is returned.
template <typename F>
MinimumResult golden_section_min(F&& f, double lo, double hi, double rel_tol, int max_iter = 300) {
  constexpr double kInvPhi = 0.6180339887498948482;
  MinimumResult best;
  auto eval = [&](double x) {
    const double v = f(x);
    ++best.evaluations;
    if (v < best.value) {
      best.value = v;
      best.argmin = x;
    }
    return v;
  };
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = eval(x1);
  double f2 = eval(x2);
  for (int i = 0; i < max_iter; ++i) {
    if (hi - lo <= rel_tol * std::max(std::abs(lo) + std::abs(hi), std::numeric_limits<double>::min()))
      break;
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = eval(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = eval(x2);
    }
  }
  eval(0.5 * (lo + hi));
  return best;
}

}  // namespace ncorlicz
