#pragma once

// Decreasing rearrangements on (0, inf): generalized singular values of
// algebra elements as step functions, analytic catalog forms, head integrals,
// submajorization and the rearrangement with respect to a weighted measure.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ncorlicz/algebra.hpp"
#include "ncorlicz/errors.hpp"
#include "ncorlicz/numeric.hpp"
#include "ncorlicz/quadrature.hpp"

namespace ncorlicz {

/// v_1 on [0, t_1), v_2 on [t_1, t_2), ..., 0 beyond t_m.
struct StepForm {
  std::vector<double> durations;
  std::vector<double> values;

  double support() const { return std::accumulate(durations.begin(), durations.end(), 0.0); }
  std::vector<double> breakpoints() const {
    std::vector<double> t;
    double acc = 0.0;
    for (double d : durations) t.push_back(acc += d);
    return t;
  }
  bool operator==(const StepForm&) const = default;
};

/// Sorts pieces by value (descending), merges equal values, drops zero pieces.
inline StepForm canonicalize(const StepForm& s) {
  if (s.durations.size() != s.values.size())
    throw StructuralError("step form: durations and values differ in length");
  std::vector<std::pair<double, double>> pieces;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const double d = s.durations[i], v = s.values[i];
    if (!(d >= 0.0) || !std::isfinite(d)) throw DomainError("step form: duration must be finite and >= 0");
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("step form: value must be finite and >= 0");
    if (d > 0.0 && v > 0.0) pieces.emplace_back(v, d);
  }
  std::stable_sort(pieces.begin(), pieces.end(), [](auto& x, auto& y) { return x.first > y.first; });
  StepForm out;
  for (auto& [v, d] : pieces) {
    if (!out.values.empty() && out.values.back() == v) {
      out.durations.back() += d;
    } else {
      out.values.push_back(v);
      out.durations.push_back(d);
    }
  }
  return out;
}

/// Analytic decreasing function, finite for t > 0, zero from `support` on.
struct ParametricForm {
  std::string kind;
  std::map<std::string, double> params;
  std::function<double(double)> eval;  // called only for 0 < t < support
  double support = kInf;
  double value_at_zero = kInf;  // limit at 0+
  std::function<double(double)> primitive;  // optional closed form of the integral over [0, t], t <= support
};

namespace catalog {

inline ParametricForm exp_decay() {
  return {"exp_decay", {}, [](double t) { return std::exp(-t); }, kInf, 1.0,
          [](double t) { return -std::expm1(-t); }};
}

/// log(S / t) on (0, S).
inline ParametricForm log_reciprocal(double support = 1.0) {
  if (!(support > 0.0 && std::isfinite(support))) throw ConfigError("log_reciprocal: support must be finite and > 0");
  return {"log_reciprocal", {{"support", support}}, [support](double t) { return std::log(support / t); },
          support, kInf, [support](double t) { return t == 0.0 ? 0.0 : t * (std::log(support / t) + 1.0); }};
}

/// t^{-p} on (0, S).
inline ParametricForm power_decay(double exponent, double support = kInf) {
  if (!(exponent > 0.0)) throw ConfigError("power_decay: exponent must be > 0");
  if (!(support > 0.0)) throw ConfigError("power_decay: support must be > 0");
  return {"power_decay", {{"exponent", exponent}, {"support", support}},
          [exponent](double t) { return std::pow(t, -exponent); }, support, kInf,
          [exponent](double t) { return exponent < 1.0 ? std::pow(t, 1.0 - exponent) / (1.0 - exponent) : kInf; }};
}

/// 1/t on (0, S).
inline ParametricForm reciprocal(double support = 1.0) {
  if (!(support > 0.0 && std::isfinite(support))) throw ConfigError("reciprocal: support must be finite and > 0");
  return {"reciprocal", {{"support", support}}, [](double t) { return 1.0 / t; }, support, kInf,
          [](double t) { return t == 0.0 ? 0.0 : kInf; }};
}

/// c on [0, S).
inline ParametricForm constant(double value, double support = kInf) {
  if (!(value >= 0.0 && std::isfinite(value))) throw ConfigError("constant: value must be finite and >= 0");
  return {"constant", {{"value", value}, {"support", support}}, [value](double) { return value; }, support, value,
          [value](double t) { return value * t; }};
}

}  // namespace catalog

class RearrangementFunction {
 public:
  RearrangementFunction() : form_(StepForm{}) {}
  RearrangementFunction(StepForm s) : form_(canonicalize(s)) {}
  RearrangementFunction(ParametricForm p) : form_(std::move(p)) {}

  bool is_step() const { return std::holds_alternative<StepForm>(form_); }
  const StepForm& step() const { return std::get<StepForm>(form_); }
  const ParametricForm& parametric() const { return std::get<ParametricForm>(form_); }

  double support() const { return is_step() ? step().support() : parametric().support; }
  bool is_zero() const { return is_step() && step().values.empty(); }

  /// Right-continuous value; at t = 0 the limit from the right.
  double operator()(double t) const {
    if (t < 0.0 || std::isnan(t)) throw DomainError("rearrangement evaluated at negative t");
    if (is_step()) {
      const auto& s = step();
      double acc = 0.0;
      for (std::size_t i = 0; i < s.values.size(); ++i) {
        acc += s.durations[i];
        if (t < acc) return s.values[i];
      }
      return 0.0;
    }
    const auto& p = parametric();
    if (t >= p.support) return 0.0;
    if (t == 0.0) return p.value_at_zero;
    return p.eval(t);
  }

  /// Points where the function may jump (interior to (0, inf)).
  std::vector<double> breakpoints() const {
    if (is_step()) return step().breakpoints();
    if (std::isfinite(parametric().support)) return {parametric().support};
    return {};
  }

 private:
  std::variant<StepForm, ParametricForm> form_;
};

inline double evaluate(const RearrangementFunction& mu, double t) { return mu(t); }

/// mu_t(a): every singular value of block k lasts c_k.
inline RearrangementFunction singular_values(const AlgebraElement& a) {
  const auto spec = abs_spectrum(a);
  StepForm s;
  for (std::size_t k = 0; k < a.num_blocks(); ++k) {
    const double c = a.algebra().block(k).weight;
    for (Eigen::Index i = 0; i < spec.values[k].size(); ++i) {
      s.values.push_back(spec.values[k](i));
      s.durations.push_back(c);
    }
  }
  return RearrangementFunction(s);
}

inline RearrangementFunction singular_values(const TracedAlgebra& alg, const AlgebraElement& a) {
  if (!(alg == a.algebra())) throw StructuralError("element does not belong to the given algebra");
  return singular_values(a);
}

/// Mass of a step weight over [lo, hi).
inline double head_mass_step(const StepForm& w, double lo, double hi) {
  double acc = 0.0, total = 0.0;
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    const double a = acc, b = acc + w.durations[i];
    acc = b;
    const double l = std::max(a, lo), r = std::min(b, hi);
    if (r > l) total += w.values[i] * (r - l);
  }
  return total;
}

inline double head_integral(const RearrangementFunction& mu, double alpha, const QuadratureOptions& opt = {});

/// Integral of g(mu_t) * w(t) over (0, inf) where g is nondecreasing on
/// [0, inf], g(0) >= 0 and w a weight (identically 1 when absent). Exact for
/// step mu against step or absent weights.
template <typename G>
double integrate_composed(const RearrangementFunction& mu, G&& g, const RearrangementFunction* w = nullptr,
                          const QuadratureOptions& opt = {}) {
  const double g0 = g(0.0);
  if (mu.is_step() && (!w || w->is_step())) {
    const auto& s = mu.step();
    const auto t = s.breakpoints();
    double total = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      double mass = s.durations[i];
      if (w) mass = head_mass_step(w->step(), prev, t[i]);
      total += modular_product(g(s.values[i]), mass);
      prev = t[i];
    }
    if (g0 > 0.0) {
      const double rest = w ? head_mass_step(w->step(), prev, kInf) : kInf;
      total += modular_product(g0, rest);
    }
    return total;
  }
  if (mu.is_step() && w && !w->is_step()) {
    // step mu against an analytic weight: masses of w over each level piece
    const auto& s = mu.step();
    const auto t = s.breakpoints();
    double total = 0.0;
    double prev = 0.0;
    auto wmass = [&](double lo, double hi) {
      if (hi <= lo) return 0.0;
      return head_integral(*w, hi, opt) - head_integral(*w, lo, opt);
    };
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      const double gv = g(s.values[i]);
      const double m = wmass(prev, t[i]);
      if (is_inf(gv) && m > 0.0) return kInf;
      total += modular_product(gv, m);
      prev = t[i];
    }
    if (g0 > 0.0) total += modular_product(g0, wmass(prev, kInf));
    return total;
  }
  // analytic mu: quadrature of g(mu) * w
  if (g0 > 0.0 && !w) return kInf;
  std::vector<double> bps = mu.breakpoints();
  double end = kInf;
  if (w) {
    auto wb = w->breakpoints();
    bps.insert(bps.end(), wb.begin(), wb.end());
    end = w->support();
  } else {
    end = mu.support();
  }
  auto integrand = [&](double x) {
    const double v = g(mu(x));
    const double wt = w ? (*w)(x) : 1.0;
    return modular_product(v, wt);
  };
  // an infinite value on a set of positive measure is caught by the sampled
  // check before quadrature, since Gauss-Kronrod never visits the endpoints
  for (double frac : {0.5, 0.25, 0.125}) {
    const double x = std::isfinite(end) ? end * frac : frac;
    if (is_inf(integrand(x))) return kInf;
  }
  return integrate_half_line(integrand, bps, end, opt).value;
}

/// Integral of mu over [0, alpha].
inline double head_integral(const RearrangementFunction& mu, double alpha, const QuadratureOptions& opt) {
  if (!(alpha >= 0.0)) throw DomainError("head integral needs alpha >= 0");
  if (alpha == 0.0) return 0.0;
  if (mu.is_step()) return head_mass_step(mu.step(), 0.0, alpha);
  const auto& p = mu.parametric();
  const double end = std::min(alpha, p.support);
  if (p.primitive) return p.primitive(end);
  auto bps = mu.breakpoints();
  return integrate_half_line([&](double t) { return mu(t); }, bps, end, opt).value;
}

/// y submajorized by x: every head integral of y is at most that of x.
inline bool submajorizes(const RearrangementFunction& x, const RearrangementFunction& y,
                         double tol = default_tolerances().submajorization) {
  std::vector<double> grid;
  if (x.is_step() && y.is_step()) {
    grid = x.breakpoints();
    auto yb = y.breakpoints();
    grid.insert(grid.end(), yb.begin(), yb.end());
    grid.push_back(kInf);
  } else {
    double hi = std::max(std::isfinite(x.support()) ? x.support() : 1.0, std::isfinite(y.support()) ? y.support() : 1.0);
    for (int i = -40; i <= 40; ++i) grid.push_back(hi * std::pow(2.0, i / 4.0));
    for (double b : x.breakpoints()) grid.push_back(b);
    for (double b : y.breakpoints()) grid.push_back(b);
  }
  for (double a : grid) {
    const double hx = head_integral(x, a);
    const double hy = head_integral(y, a);
    if (is_inf(hx)) continue;
    if (hy > hx + tol * std::max(1.0, hx)) return false;
  }
  return true;
}

/// The measure w(t) dt on (0, inf) with finite positive mass.
class WeightedContext {
 public:
  explicit WeightedContext(RearrangementFunction w) : w_(std::move(w)) {
    mass_ = head_integral(w_, kInf);
    if (!(mass_ > 0.0) || !std::isfinite(mass_))
      throw DomainError("weight must have finite positive mass");
    t_x_ = w_.support();
  }

  const RearrangementFunction& weight() const { return w_; }
  double mass() const { return mass_; }
  /// inf{t : w(t) = 0}
  double t_x() const { return t_x_; }

  /// F_x(t) = integral of w over [0, t].
  double F(double t) const {
    if (!(t >= 0.0)) throw DomainError("F_x needs t >= 0");
    if (t >= t_x_) return mass_;
    return head_integral(w_, t);
  }

  /// Inverse of F on [0, mass): smallest t with F(t) >= s.
  double F_inverse(double s) const {
    if (!(s >= 0.0)) throw DomainError("F_x inverse needs s >= 0");
    if (s >= mass_) return t_x_;
    if (s == 0.0) return 0.0;
    if (w_.is_step()) {
      const auto& st = w_.step();
      double acc_t = 0.0, acc_m = 0.0;
      for (std::size_t i = 0; i < st.values.size(); ++i) {
        const double m = st.values[i] * st.durations[i];
        if (acc_m + m >= s) return acc_t + (s - acc_m) / st.values[i];
        acc_m += m;
        acc_t += st.durations[i];
      }
      return t_x_;
    }
    double hi = 1.0;
    while (F(hi) < s && hi < 1e300) hi *= 2.0;
    return bisect_first_true([&](double t) { return F(t) >= s; }, 0.0, hi, 1e-14);
  }

 private:
  RearrangementFunction w_;
  double mass_ = 0.0;
  double t_x_ = kInf;
};

/// Decreasing rearrangement of |h| with respect to nu = w dt, at s:
/// inf{y : nu(|h| > y) <= s}. `h` is an arbitrary step function given piece
/// by piece in its original order (no sorting); exact for step weights.
inline double weighted_rearrangement(const StepForm& h, const WeightedContext& ctx, double s) {
  if (!(s >= 0.0)) throw DomainError("weighted rearrangement needs s >= 0");
  if (h.durations.size() != h.values.size()) throw StructuralError("step function: length mismatch");
  std::vector<std::pair<double, double>> level;  // (|value|, nu-mass)
  double t = 0.0;
  for (std::size_t i = 0; i < h.values.size(); ++i) {
    const double lo = t, hi = t + h.durations[i];
    t = hi;
    const double v = std::abs(h.values[i]);
    if (v == 0.0 || hi <= lo) continue;
    level.emplace_back(v, ctx.F(hi) - ctx.F(lo));
  }
  std::stable_sort(level.begin(), level.end(), [](auto& x, auto& y) { return x.first > y.first; });
  double cumulative = 0.0;
  for (std::size_t i = 0; i < level.size(); ++i) {
    cumulative += level[i].second;
    // all pieces sharing this value enter the distribution function together
    if (i + 1 < level.size() && level[i + 1].first == level[i].first) continue;
    if (cumulative > s) return level[i].first;
  }
  return 0.0;
}

/// Same for a decreasing h: h(F^{-1}(s)) below the total mass, 0 above.
/// Analytic h is accepted only in this decreasing form.
inline double weighted_rearrangement(const RearrangementFunction& h, const WeightedContext& ctx, double s) {
  if (!(s >= 0.0)) throw DomainError("weighted rearrangement needs s >= 0");
  if (h.is_step()) return weighted_rearrangement(h.step(), ctx, s);
  if (s >= ctx.mass()) return 0.0;
  return h(ctx.F_inverse(s));
}

struct FackKosakiReport {
  double product_violation = 0.0;      // max of mu_{t+s}(fg) - mu_t(f) mu_s(g)
  double adjoint_violation = 0.0;      // max |mu_t(f*f) - mu_t(ff*)|
  double homogeneity_violation = 0.0;  // max |mu_t(alpha f) - |alpha| mu_t(f)|
  int samples = 0;
  bool pass(double tol = 1e-10) const {
    return product_violation <= tol && adjoint_violation <= tol && homogeneity_violation <= tol;
  }
};

/// Checks the three rearrangement inequalities on the grid of breakpoints of
/// mu(f), mu(g) and their midpoints.
inline FackKosakiReport fack_kosaki_checks(const AlgebraElement& f, const AlgebraElement& g,
                                           Complex alpha = Complex(-2.0, 0.0)) {
  const auto mf = singular_values(f), mg = singular_values(g), mfg = singular_values(f * g);
  const auto ffs = singular_values(f.adjoint() * f), fsf = singular_values(f * f.adjoint());
  const auto maf = singular_values(alpha * f);
  std::vector<double> grid{0.0};
  for (const auto* m : {&mf, &mg})
    for (double b : m->breakpoints()) grid.push_back(b);
  std::sort(grid.begin(), grid.end());
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i + 1 < n; ++i) grid.push_back(0.5 * (grid[i] + grid[i + 1]));
  grid.push_back(grid[n - 1] + 1.0);
  FackKosakiReport r;
  const double scale = std::max(1.0, mf(0.0) * mg(0.0));
  for (double t : grid) {
    for (double s : grid) {
      // t + s may round below a breakpoint it equals exactly; step right of it
      const double ts = (t + s) * (1.0 + 1e-12);
      r.product_violation = std::max(r.product_violation, (mfg(ts) - mf(t) * mg(s)) / scale);
      ++r.samples;
    }
    r.adjoint_violation = std::max(r.adjoint_violation, std::abs(ffs(t) - fsf(t)) / std::max(1.0, ffs(0.0)));
    r.homogeneity_violation =
        std::max(r.homogeneity_violation, std::abs(maf(t) - std::abs(alpha) * mf(t)) / std::max(1.0, maf(0.0)));
  }
  return r;
}

}  // namespace ncorlicz
