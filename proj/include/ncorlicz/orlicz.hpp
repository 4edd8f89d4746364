#pragma once

// Orlicz functions: convex gauges phi : [0, inf) -> [0, inf] with phi(0) = 0,
// their thresholds a_phi / b_phi, complementary (Legendre) functions, formal
// inverses, compositions and a Delta_2 probe.

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncorlicz/errors.hpp"
#include "ncorlicz/numeric.hpp"

namespace ncorlicz {

enum class OrliczKind {
  power,             // coef * u^p
  power_over_p,      // u^p / p
  cosh_minus_one,
  exp_minus_one,
  t_log1p,           // u * log(1 + u)
  zero_then_linear,  // slope * max(0, u - a)
  linear_until_cap,  // slope * u on [0, b], inf beyond
  compose,           // psi(phi2(u))
  conjugate,         // Legendre transform of a base function
  custom,
};

enum class Delta2Flag { yes, no, unknown };

inline const char* to_string(OrliczKind k) {
  switch (k) {
    case OrliczKind::power: return "power";
    case OrliczKind::power_over_p: return "power_over_p";
    case OrliczKind::cosh_minus_one: return "cosh_minus_one";
    case OrliczKind::exp_minus_one: return "exp_minus_one";
    case OrliczKind::t_log1p: return "t_log1p";
    case OrliczKind::zero_then_linear: return "zero_then_linear";
    case OrliczKind::linear_until_cap: return "linear_until_cap";
    case OrliczKind::compose: return "compose";
    case OrliczKind::conjugate: return "conjugate";
    case OrliczKind::custom: return "custom";
  }
  return "?";
}

class OrliczFunction;
OrliczFunction conjugate(const OrliczFunction& phi);

/// Immutable handle to an Orlicz function. Copies share the same state.
class OrliczFunction {
 public:
  using Map = std::function<double(double)>;

  /// phi(u) = coef * u^p, p >= 1.
  static OrliczFunction power(double p, double coef = 1.0);
  /// phi(u) = u^p / p, p >= 1.
  static OrliczFunction power_over_p(double p);
  static OrliczFunction cosh_minus_one();
  static OrliczFunction exp_minus_one();
  static OrliczFunction t_log1p();
  /// phi(u) = slope * max(0, u - a); a_phi = a.
  static OrliczFunction zero_then_linear(double a, double slope = 1.0);
  /// phi(u) = slope * u for u <= b, infinite beyond; slope 0 gives the
  /// indicator gauge of [0, b].
  static OrliczFunction linear_until_cap(double b, double slope = 1.0);
  /// Code-level gauge; thresholds are detected numerically.
  static OrliczFunction custom(std::string name, Map f, Delta2Flag delta2 = Delta2Flag::unknown);

  /// phi(u); throws DomainError for negative or NaN u.
  double operator()(double u) const;

  OrliczKind kind() const { return impl_->kind; }
  const std::string& name() const { return impl_->name; }
  /// a_phi = inf{u > 0 : phi(u) > 0}.
  double a() const { return impl_->a; }
  /// b_phi = sup{u > 0 : phi(u) < inf}; may be infinite.
  double b() const { return impl_->b; }
  /// Left limit phi(b_phi) when b_phi is finite.
  double value_at_b() const { return impl_->value_at_b; }
  Delta2Flag delta2() const { return impl_->delta2; }
  bool has_closed_conjugate() const { return impl_->closed_conjugate; }
  bool has_closed_inverse() const { return static_cast<bool>(impl_->inverse); }

  /// Named numeric parameters (p, coef, a, b, slope) for serialization.
  const std::map<std::string, double>& params() const { return impl_->params; }
  double param(const std::string& key) const { return impl_->params.at(key); }
  /// Components: {psi, phi2} for compose, {base} for conjugate.
  const std::vector<OrliczFunction>& children() const { return impl_->children; }

  /// Closed-form formal inverse when available.
  std::optional<double> closed_inverse(double t) const {
    if (!impl_->inverse) return std::nullopt;
    return impl_->inverse(t);
  }

 private:
  struct Impl {
    OrliczKind kind = OrliczKind::custom;
    std::string name;
    Map f;  // raw evaluation for 0 <= u < b (and u == b)
    double a = 0.0;
    double b = kInf;
    double value_at_b = kInf;
    Delta2Flag delta2 = Delta2Flag::unknown;
    bool closed_conjugate = false;
    Map inverse;
    std::map<std::string, double> params;
    std::vector<OrliczFunction> children;
  };

  explicit OrliczFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  friend OrliczFunction compose_orlicz(const OrliczFunction& psi, const OrliczFunction& phi2);
  friend OrliczFunction conjugate(const OrliczFunction& phi);
  friend OrliczFunction make_conjugate_numeric(const OrliczFunction& base, Map closed);

  std::shared_ptr<const Impl> impl_;
};

namespace detail {

struct Thresholds {
  double a = 0.0;
  double b = kInf;
  double value_at_b = kInf;
};

/// Doubling/bisection detection of a_phi and b_phi from evaluations alone.
/// a below 1e-6 is snapped to 0 since floating-point evaluation cannot
/// distinguish it from underflow of a smooth gauge near the origin.
inline Thresholds detect_thresholds(const OrliczFunction::Map& f, double tol) {
  Thresholds th;
  const double u_max = 1e15;

  // b: first doubling point where f is infinite.
  double lo_b = 0.0;
  double hi_b = kInf;
  for (double u = 1e-6; u <= u_max; u *= 2.0) {
    if (is_inf(f(u))) {
      hi_b = u;
      break;
    }
    lo_b = u;
  }
  if (!is_inf(hi_b)) {
    th.b = bisect_last_true([&](double u) { return !is_inf(f(u)); }, lo_b, hi_b, tol);
    th.value_at_b = f(th.b);
  }

  // a: last point where f vanishes.
  const double top = is_inf(th.b) ? u_max : th.b;
  double hi_a = 0.0;
  for (double u = 1e-6; u <= top; u *= 2.0) {
    if (f(u) > 0.0) {
      hi_a = u;
      break;
    }
  }
  if (hi_a == 0.0) {
    th.a = th.b;
  } else if (hi_a <= 1e-6) {
    th.a = 0.0;
  } else {
    th.a = bisect_last_true([&](double u) { return f(u) <= 0.0; }, hi_a / 2.0, hi_a, tol);
    if (th.a < 1e-6) th.a = 0.0;
  }
  if (!std::isfinite(th.a) || th.a > th.b)
    throw InvalidOrliczError("threshold detection found a_phi > b_phi");
  if (th.b == 0.0) throw InvalidOrliczError("function is infinite on all of (0, inf)");
  return th;
}

/// sup_{v in [0, b]} (u v - phi(v)) by bracketing plus golden section; the
/// objective is concave so the search is unimodal.
inline double legendre_transform(const OrliczFunction& phi, double u, double rel_tol) {
  if (u == 0.0) return 0.0;
  auto gain = [&](double v) {
    const double pv = phi(v);
    return is_inf(pv) ? -kInf : u * v - pv;
  };
  double best = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  if (std::isfinite(phi.b())) {
    hi = phi.b();
    best = std::max(best, gain(hi));
  } else {
    const double cap = std::ldexp(1.0, 200);
    double prev_v = 0.0;
    double prev_g = 0.0;
    double v = std::max(1.0, phi.a());
    double before_prev = 0.0;
    bool bracketed = false;
    while (v <= cap) {
      const double g = gain(v);
      if (g < prev_g) {
        lo = before_prev;
        hi = v;
        bracketed = true;
        break;
      }
      before_prev = prev_v;
      prev_v = v;
      prev_g = g;
      v *= 2.0;
    }
    if (!bracketed) {
      // still non-decreasing at the cap: divergent if strictly increasing there
      const double g_cap = prev_g;
      const double g_half = gain(prev_v / 2.0);
      if (g_cap > g_half + 1e-12 * (1.0 + std::abs(g_cap))) return kInf;
      return std::max(best, g_cap);
    }
  }
  const auto res = golden_section_min([&](double v) { return -gain(v); }, lo, hi, rel_tol * 1e-4);
  best = std::max(best, -res.value);
  return best;
}

}  // namespace detail

inline double OrliczFunction::operator()(double u) const {
  if (!(u >= 0.0)) throw DomainError("Orlicz function evaluated at a negative argument");
  if (u > impl_->b) return kInf;
  if (u == impl_->b) return impl_->value_at_b;
  return impl_->f(u);
}

inline OrliczFunction OrliczFunction::power(double p, double coef) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidOrliczError("power gauge needs p >= 1");
  if (!(coef > 0.0) || !std::isfinite(coef)) throw InvalidOrliczError("power gauge needs coef > 0");
  auto impl = std::make_shared<Impl>();
  impl->kind = OrliczKind::power;
  impl->name = "power";
  impl->f = [p, coef](double u) { return coef * std::pow(u, p); };
  impl->inverse = [p, coef](double t) { return std::pow(t / coef, 1.0 / p); };
  impl->delta2 = Delta2Flag::yes;
  impl->closed_conjugate = true;
  impl->params = {{"p", p}, {"coef", coef}};
  return OrliczFunction(impl);
}

inline OrliczFunction OrliczFunction::power_over_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidOrliczError("power_over_p gauge needs p >= 1");
  auto impl = std::make_shared<Impl>();
  impl->kind = OrliczKind::power_over_p;
  impl->name = "power_over_p";
  impl->f = [p](double u) { return std::pow(u, p) / p; };
  impl->inverse = [p](double t) { return std::pow(p * t, 1.0 / p); };
  impl->delta2 = Delta2Flag::yes;
  impl->closed_conjugate = true;
  impl->params = {{"p", p}};
  return OrliczFunction(impl);
}

inline OrliczFunction OrliczFunction::cosh_minus_one() {
  auto impl = std::make_shared<Impl>();
  impl->kind = OrliczKind::cosh_minus_one;
  impl->name = "cosh_minus_one";
  // 2 sinh^2(u/2) avoids cancellation near 0
  impl->f = [](double u) {
    const double s = std::sinh(0.5 * u);
    return 2.0 * s * s;
  };
  impl->inverse = [](double t) { return 2.0 * std::asinh(std::sqrt(0.5 * t)); };
  impl->delta2 = Delta2Flag::no;
  impl->closed_conjugate = true;
  return OrliczFunction(impl);
}

inline OrliczFunction OrliczFunction::exp_minus_one() {
  auto impl = std::make_shared<Impl>();
  impl->kind = OrliczKind::exp_minus_one;
  impl->name = "exp_minus_one";
  impl->f = [](double u) { return std::expm1(u); };
  impl->inverse = [](double t) { return std::log1p(t); };
  impl->delta2 = Delta2Flag::no;
  impl->closed_conjugate = true;
  return OrliczFunction(impl);
}

inline OrliczFunction OrliczFunction::t_log1p() {
  auto impl = std::make_shared<Impl>();
  impl->kind = OrliczKind::t_log1p;
  impl->name = "t_log1p";
  impl->f = [](double u) { return u * std::log1p(u); };
  impl->delta2 = Delta2Flag::yes;
  return OrliczFunction(impl);
}

inline OrliczFunction OrliczFunction::zero_then_linear(double a, double slope) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidOrliczError("zero_then_linear needs a >= 0");
  if (!(slope > 0.0) || !std::isfinite(slope))
    throw InvalidOrliczError("zero_then_linear needs slope > 0");
  auto impl = std::make_shared<Impl>();
  impl->kind = OrliczKind::zero_then_linear;
  impl->name = "zero_then_linear";
  impl->f = [a, slope](double u) { return u <= a ? 0.0 : slope * (u - a); };
  impl->inverse = [a, slope](double t) { return a + t / slope; };
  impl->a = a;
  impl->delta2 = a > 0.0 ? Delta2Flag::no : Delta2Flag::yes;
  impl->closed_conjugate = true;
  impl->params = {{"a", a}, {"slope", slope}};
  return OrliczFunction(impl);
}

inline OrliczFunction OrliczFunction::linear_until_cap(double b, double slope) {
  if (!(b > 0.0) || !std::isfinite(b)) throw InvalidOrliczError("linear_until_cap needs 0 < b < inf");
  if (!(slope >= 0.0) || !std::isfinite(slope))
    throw InvalidOrliczError("linear_until_cap needs slope >= 0");
  auto impl = std::make_shared<Impl>();
  impl->kind = OrliczKind::linear_until_cap;
  impl->name = "linear_until_cap";
  impl->f = [slope](double u) { return slope * u; };
  if (slope > 0.0) {
    impl->inverse = [b, slope](double t) { return std::min(t / slope, b); };
  } else {
    impl->inverse = [b](double) { return b; };
  }
  impl->a = slope > 0.0 ? 0.0 : b;
  impl->b = b;
  impl->value_at_b = slope * b;
  impl->delta2 = Delta2Flag::no;
  impl->closed_conjugate = true;
  impl->params = {{"b", b}, {"slope", slope}};
  return OrliczFunction(impl);
}

inline OrliczFunction OrliczFunction::custom(std::string name, Map f, Delta2Flag delta2) {
  if (!f) throw InvalidOrliczError("custom gauge needs an evaluation map");
  auto impl = std::make_shared<Impl>();
  impl->kind = OrliczKind::custom;
  impl->name = std::move(name);
  if (f(0.0) != 0.0) throw InvalidOrliczError("custom gauge must vanish at 0");
  const auto th = detail::detect_thresholds(f, default_tolerances().threshold);
  impl->a = th.a;
  impl->b = th.b;
  impl->value_at_b = th.value_at_b;
  impl->f = std::move(f);
  impl->delta2 = delta2;
  return OrliczFunction(impl);
}

/// phi(u) with a domain check; infinity beyond b_phi.
inline double eval(const OrliczFunction& phi, double u) { return phi(u); }

/// Legendre transform phi* evaluated numerically; `closed` overrides when set.
inline OrliczFunction make_conjugate_numeric(const OrliczFunction& base, OrliczFunction::Map closed) {
  auto impl = std::make_shared<OrliczFunction::Impl>();
  impl->kind = OrliczKind::conjugate;
  impl->name = "conjugate(" + base.name() + ")";
  impl->children = {base};
  impl->closed_conjugate = static_cast<bool>(closed);
  if (closed) {
    impl->f = std::move(closed);
  } else {
    const double tol = default_tolerances().conjugate;
    impl->f = [base, tol](double u) { return detail::legendre_transform(base, u, tol); };
  }
  // a_{phi*} is the right derivative of phi at 0, b_{phi*} its asymptotic slope.
  switch (base.kind()) {
    case OrliczKind::cosh_minus_one:
    case OrliczKind::t_log1p:
      impl->a = 0.0;
      impl->b = kInf;
      break;
    case OrliczKind::exp_minus_one:
      impl->a = 1.0;
      impl->b = kInf;
      break;
    default: {
      const auto th = detail::detect_thresholds(impl->f, default_tolerances().threshold);
      impl->a = th.a;
      impl->b = th.b;
      impl->value_at_b = th.value_at_b;
    }
  }
  // u log u growth is Delta_2; exp's conjugate vanishes on [0, 1] so it is not
  if (base.kind() == OrliczKind::cosh_minus_one) impl->delta2 = Delta2Flag::yes;
  if (base.kind() == OrliczKind::exp_minus_one) impl->delta2 = Delta2Flag::no;
  return OrliczFunction(impl);
}

/// Complementary function phi*(u) = sup_{v > 0}(u v - phi(v)). Closed-form
/// pairs map to builtin kinds; everything else is a numeric Legendre transform.
inline OrliczFunction conjugate(const OrliczFunction& phi) {
  switch (phi.kind()) {
    case OrliczKind::power: {
      const double p = phi.param("p");
      const double c = phi.param("coef");
      if (p == 1.0) return OrliczFunction::linear_until_cap(c, 0.0);
      const double q = p / (p - 1.0);
      const double coef = (1.0 - 1.0 / p) * std::pow(p * c, -1.0 / (p - 1.0));
      return OrliczFunction::power(q, coef);
    }
    case OrliczKind::power_over_p: {
      const double p = phi.param("p");
      if (p == 1.0) return OrliczFunction::linear_until_cap(1.0, 0.0);
      return OrliczFunction::power_over_p(p / (p - 1.0));
    }
    case OrliczKind::zero_then_linear:
      return OrliczFunction::linear_until_cap(phi.param("slope"), phi.param("a"));
    case OrliczKind::linear_until_cap: {
      const double slope = phi.param("slope");
      return OrliczFunction::zero_then_linear(slope, phi.param("b"));
    }
    case OrliczKind::cosh_minus_one:
      return make_conjugate_numeric(phi, [](double u) {
        return u * std::asinh(u) - std::sqrt(1.0 + u * u) + 1.0;
      });
    case OrliczKind::exp_minus_one:
      return make_conjugate_numeric(phi, [](double u) {
        return u <= 1.0 ? 0.0 : u * std::log(u) - u + 1.0;
      });
    default:
      return make_conjugate_numeric(phi, nullptr);
  }
}

/// phi^{-1}(t) = sup{s : phi(s) <= t}; equals b_phi for t >= phi(b_phi).
inline double formal_inverse(const OrliczFunction& phi, double t) {
  if (!(t >= 0.0)) throw DomainError("formal inverse evaluated at a negative argument");
  if (std::isfinite(phi.b()) && t >= phi.value_at_b()) return phi.b();
  if (auto closed = phi.closed_inverse(t)) return *closed;
  double lo = phi.a();
  if (t == 0.0) return lo;
  double hi = std::max(1.0, 2.0 * lo);
  while (phi(hi) <= t) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) return kInf;
  }
  return bisect_last_true([&](double s) { return phi(s) <= t; }, lo, hi,
                          default_tolerances().bisection * 1e-2);
}

/// phi1 = psi o phi2 with thresholds a_{phi1} = phi2^{-1}(a_psi) and
/// b_{phi1} = phi2^{-1}(b_psi) (or b_{phi2} when b_psi is infinite).
inline OrliczFunction compose_orlicz(const OrliczFunction& psi, const OrliczFunction& phi2) {
  auto impl = std::make_shared<OrliczFunction::Impl>();
  impl->kind = OrliczKind::compose;
  impl->name = "compose(" + psi.name() + "," + phi2.name() + ")";
  impl->children = {psi, phi2};
  impl->f = [psi, phi2](double u) {
    const double inner = phi2(u);
    return is_inf(inner) ? kInf : psi(inner);
  };
  impl->a = psi.a() > 0.0 ? formal_inverse(phi2, psi.a()) : phi2.a();
  if (std::isfinite(psi.b())) {
    impl->b = std::min(formal_inverse(phi2, psi.b()), phi2.b());
  } else {
    impl->b = phi2.b();
  }
  if (std::isfinite(impl->b)) {
    const double inner = std::min(phi2(impl->b), psi.b());
    impl->value_at_b = psi(inner);
  }
  if (!(impl->b > 0.0)) throw InvalidOrliczError("composition is infinite on all of (0, inf)");
  if (!std::isfinite(impl->a) || impl->a > impl->b)
    throw InvalidOrliczError("composition vanishes identically on (0, inf)");
  if (impl->a < phi2.a() || impl->b > phi2.b())
    throw InvalidOrliczError("composition thresholds violate a1 >= a2, b1 <= b2");
  impl->inverse = [psi, phi2](double t) { return formal_inverse(phi2, formal_inverse(psi, t)); };
  if (psi.delta2() == Delta2Flag::yes && phi2.delta2() == Delta2Flag::yes) {
    impl->delta2 = Delta2Flag::yes;
  } else if (std::isfinite(impl->b)) {
    impl->delta2 = Delta2Flag::no;
  }
  return OrliczFunction(impl);
}

struct Delta2Probe {
  bool satisfied = false;      // false also when the probe hit phi(2u) = inf
  bool authoritative = false;  // true when a builtin flag decided
  double constant = kInf;      // K-hat = max phi(2u)/phi(u) on the grid
  int samples = 0;
};

/// Samples phi(2u)/phi(u) on a logarithmic grid of `grid_decades` decades
/// centred on 1 (20 points per decade).
inline Delta2Probe delta2_probe(const OrliczFunction& phi, int grid_decades) {
  if (grid_decades < 1) throw DomainError("delta2 probe needs at least one decade");
  Delta2Probe out;
  out.constant = 0.0;
  bool failed = false;
  const int n = 20 * grid_decades;
  for (int i = 0; i <= n; ++i) {
    const double x = -0.5 * grid_decades + static_cast<double>(i) / 20.0;
    const double u = std::pow(10.0, x);
    const double pu = phi(u);
    const double p2u = phi(2.0 * u);
    if (!is_inf(pu) && is_inf(p2u)) failed = true;
    if (pu > 0.0 && !is_inf(pu)) {
      ++out.samples;
      out.constant = std::max(out.constant, p2u / pu);
    }
  }
  if (failed) out.constant = kInf;
  if (phi.delta2() != Delta2Flag::unknown) {
    out.authoritative = true;
    out.satisfied = phi.delta2() == Delta2Flag::yes;
  } else {
    out.satisfied = !failed && std::isfinite(out.constant);
  }
  return out;
}

}  // namespace ncorlicz
