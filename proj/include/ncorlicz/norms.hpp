#pragma once

// Modulars and norms on rearrangements: Luxemburg-Nakano, Amemiya, the trace
// form computed by functional calculus, weighted variants, the Koethe pairing,
// the quasi-trace tau_x and Pistone-Sempi membership.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ncorlicz/algebra.hpp"
#include "ncorlicz/errors.hpp"
#include "ncorlicz/numeric.hpp"
#include "ncorlicz/orlicz.hpp"
#include "ncorlicz/rearrangement.hpp"

namespace ncorlicz {

/// One probe of a norm search.
struct ModularReport {
  double scale = 0.0;  // lambda (Luxemburg) or k (Amemiya)
  double modular = 0.0;
  bool converged = false;
  int evaluations = 0;
};

/// Integral of phi(inv_scale * mu_t) w(t) dt, w = 1 without a context.
inline double modular(const RearrangementFunction& mu, const OrliczFunction& phi, double inv_scale,
                      const WeightedContext* ctx = nullptr) {
  if (!(inv_scale > 0.0)) throw DomainError("modular needs a positive inverse scale");
  auto g = [&](double v) { return phi(v * inv_scale); };
  return integrate_composed(mu, g, ctx ? &ctx->weight() : nullptr);
}

namespace detail {

/// inf{lambda > 0 : m(lambda) <= 1} for a nonincreasing modular map m.
/// Probes are recorded and checked for monotonicity.
template <typename M>
ModularReport luxemburg_search(M&& m, double seed, double tol) {
  if (!(tol > 0.0 && tol <= 1e-3)) throw DomainError("norm tolerance must lie in (0, 1e-3]");
  const double slack = default_tolerances().modular_slack;
  std::map<double, double> probes;
  auto value = [&](double lambda) {
    auto it = probes.find(lambda);
    if (it != probes.end()) return it->second;
    const double v = m(lambda);
    probes.emplace(lambda, v);
    return v;
  };
  auto ok = [&](double lambda) { return value(lambda) <= 1.0 + slack; };
  if (!(seed > 0.0) || !std::isfinite(seed)) seed = 1.0;
  double hi = seed;
  int doublings = 0;
  while (!ok(hi)) {
    if (++doublings > 200) throw UnboundedNormError("modular stays above 1 for every probed scale");
    hi *= 2.0;
  }
  double lo = hi;
  int halvings = 0;
  while (ok(lo)) {
    if (++halvings > 1100) return {0.0, value(lo), true, static_cast<int>(probes.size())};
    lo *= 0.5;
  }
  hi = bisect_first_true(ok, lo, std::min(hi, 2.0 * lo), tol * 0.5);
  // the modular must not increase with lambda
  double prev = kInf;
  for (const auto& [lambda, v] : probes) {
    if (v > prev * (1.0 + 1e-9) + 1e-12)
      throw NumericError("modular increased with the scale near lambda = " + std::to_string(lambda));
    prev = v;
  }
  return {hi, value(hi), true, static_cast<int>(probes.size())};
}

}  // namespace detail

/// Full Luxemburg search record.
inline ModularReport luxemburg_report(const RearrangementFunction& mu, const OrliczFunction& phi,
                                      const WeightedContext* ctx = nullptr, double tol = 1e-10) {
  if (mu.is_zero()) return {0.0, 0.0, true, 0};
  const double m0 = mu(0.0);
  return detail::luxemburg_search([&](double lambda) { return modular(mu, phi, 1.0 / lambda, ctx); },
                                  std::isfinite(m0) ? m0 : 1.0, tol);
}

/// ||mu||_phi = inf{lambda > 0 : modular(mu / lambda) <= 1}.
inline double luxemburg_norm(const RearrangementFunction& mu, const OrliczFunction& phi,
                             const WeightedContext* ctx = nullptr, double tol = 1e-10) {
  return luxemburg_report(mu, phi, ctx, tol).scale;
}

/// The same norm computed in the algebra, lambda -> tau(phi(|a| / lambda)).
/// With `cross_check` the result is compared with the rearrangement path.
inline double kunze_norm(const AlgebraElement& a, const OrliczFunction& phi, double tol = 1e-10,
                         bool cross_check = true) {
  const double top = operator_norm(a);
  if (top == 0.0) return 0.0;
  auto m = [&](double lambda) {
    try {
      return trace(apply_function(phi, a, 1.0 / lambda)).real();
    } catch (const NotMeasurableError&) {
      return kInf;
    }
  };
  const double value = detail::luxemburg_search(m, top, tol).scale;
  if (cross_check) {
    const double other = luxemburg_norm(singular_values(a), phi, nullptr, tol);
    if (std::abs(value - other) > 4.0 * tol * std::max(value, other) + 1e-300)
      throw NumericError("trace and rearrangement norms disagree: " + std::to_string(value) + " vs " +
                         std::to_string(other));
  }
  return value;
}

inline double kunze_norm(const TracedAlgebra& alg, const AlgebraElement& a, const OrliczFunction& phi,
                         double tol = 1e-10, bool cross_check = true) {
  if (!(alg == a.algebra())) throw StructuralError("element does not belong to the given algebra");
  return kunze_norm(a, phi, tol, cross_check);
}

struct AmemiyaResult {
  double value = 0.0;
  double k = 0.0;         // minimising k (the cap when `limit`)
  bool limit = false;     // infimum approached as k -> infinity
  int evaluations = 0;
};

inline constexpr double kAmemiyaCap = 1e9;

/// inf_{k > 0} (1 + modular(k mu)) / k by golden-section search in log k.
inline AmemiyaResult amemiya_report(const RearrangementFunction& mu, const OrliczFunction& phi,
                                    const WeightedContext* ctx = nullptr, double tol = 1e-10) {
  AmemiyaResult out;
  if (mu.is_zero()) return out;
  auto objective = [&](double x) {
    ++out.evaluations;
    const double k = std::exp(x);
    const double m = modular(mu, phi, k, ctx);
    return is_inf(m) ? kInf : (1.0 + m) / k;
  };
  const double m0 = mu(0.0);
  double x = (std::isfinite(m0) && m0 > 0.0) ? -std::log(m0) : 0.0;
  const double x_cap = std::log(kAmemiyaCap);
  x = std::min(x, x_cap);
  double fx = objective(x);
  for (int i = 0; is_inf(fx); ++i) {
    if (i > 1400) throw UnboundedNormError("Amemiya objective is infinite for every probed k");
    x -= std::log(2.0);
    fx = objective(x);
  }
  const double step = std::log(2.0);
  // walk right while decreasing
  double right = x, f_right = fx;
  bool limit = false;
  while (true) {
    const double nx = std::min(right + step, x_cap);
    if (nx <= right) {
      limit = true;
      break;
    }
    const double nf = objective(nx);
    if (!(nf < f_right)) {
      right = nx;
      break;
    }
    right = nx;
    f_right = nf;
    if (right >= x_cap) {
      limit = true;
      break;
    }
  }
  if (limit) {
    out.value = f_right;
    out.k = std::exp(right);
    out.limit = true;
    return out;
  }
  // walk left while decreasing
  double left = x, f_left = fx;
  for (int i = 0; i < 2000; ++i) {
    const double nx = left - step;
    const double nf = objective(nx);
    left = nx;
    if (!(nf < f_left)) break;
    f_left = nf;
  }
  const auto best = golden_section_min(objective, left, right, 1e-12);
  out.value = std::min({best.value, fx, f_right, f_left});
  out.k = std::exp(best.argmin);
  (void)tol;
  return out;
}

inline double amemiya_norm(const RearrangementFunction& mu, const OrliczFunction& phi,
                           const WeightedContext* ctx = nullptr, double tol = 1e-10) {
  return amemiya_report(mu, phi, ctx, tol).value;
}

/// Koethe-dual norm of f: the Amemiya norm for the complementary function.
inline double kothe_dual_norm(const RearrangementFunction& mu, const OrliczFunction& phi,
                              const WeightedContext* ctx = nullptr, double tol = 1e-10) {
  return amemiya_norm(mu, conjugate(phi), ctx, tol);
}

struct HolderReport {
  double pairing = 0.0;     // |tau(fg)|
  double dual_norm = 0.0;   // ||f||^0_phi
  double norm_g = 0.0;      // ||g||_phi
  double bound = 0.0;       // dual_norm * norm_g
  double sampled_sup = 0.0; // max tau(|f g'|) over probes normalised to ||g'||_phi = 1
  double slack = 0.0;       // bound - pairing
  bool pass = false;
};

/// |tau(fg)| <= ||f||^0_phi ||g||_phi, plus a sampled lower estimate of the
/// sup form of the dual norm, which must not exceed the Amemiya value.
inline HolderReport holder_check(const AlgebraElement& f, const AlgebraElement& g, const OrliczFunction& phi,
                                 const std::vector<AlgebraElement>& probes = {}, double tol = 1e-8) {
  HolderReport r;
  r.pairing = std::abs(trace(f * g));
  r.dual_norm = kothe_dual_norm(singular_values(f), phi);
  r.norm_g = luxemburg_norm(singular_values(g), phi);
  r.bound = r.dual_norm * r.norm_g;
  r.slack = r.bound - r.pairing;
  bool ok = r.pairing <= r.bound + tol * std::max(1.0, r.bound);
  for (const auto& p : probes) {
    const double n = luxemburg_norm(singular_values(p), phi);
    if (n == 0.0) continue;
    const double v = trace(abs_value(f * p)).real() / n;
    r.sampled_sup = std::max(r.sampled_sup, v);
  }
  ok = ok && r.sampled_sup <= r.dual_norm + tol * std::max(1.0, r.dual_norm);
  r.pass = ok;
  return r;
}

/// tau_x(f) = integral of mu_t(f) mu_t(x) dt.
inline double tau_x(const RearrangementFunction& mu_f, const WeightedContext& ctx) {
  return integrate_composed(mu_f, [](double v) { return v; }, &ctx.weight());
}

inline double tau_x(const AlgebraElement& f, const WeightedContext& ctx) { return tau_x(singular_values(f), ctx); }

/// Integral of exp(s mu_t(g)) mu_t(x) dt; +inf when divergent.
inline double laplace_probe(const RearrangementFunction& mu_g, const WeightedContext& ctx, double s) {
  return integrate_composed(mu_g, [s](double v) { return std::exp(s * v); }, &ctx.weight());
}

inline std::vector<double> default_probe_schedule() {
  std::vector<double> s;
  for (int i = 0; i <= 40; ++i) s.push_back(std::ldexp(1.0, -i));
  return s;
}

struct MembershipReport {
  bool member = false;
  double witness = 0.0;  // s with both probes finite, 0 when none
};

/// 0 lies in the interior of the domain of the Laplace transform: some s in
/// the schedule has both probes at +s and -s finite.
inline MembershipReport quant_membership_report(const RearrangementFunction& mu_g, const WeightedContext& ctx,
                                                const std::vector<double>& schedule = default_probe_schedule()) {
  for (double s : schedule) {
    if (!(s > 0.0)) throw DomainError("probe schedule must be positive");
    if (std::isfinite(laplace_probe(mu_g, ctx, s)) && std::isfinite(laplace_probe(mu_g, ctx, -s)))
      return {true, s};
  }
  return {};
}

inline bool quant_membership(const RearrangementFunction& mu_g, const WeightedContext& ctx,
                             const std::vector<double>& schedule = default_probe_schedule()) {
  return quant_membership_report(mu_g, ctx, schedule).member;
}

struct PistoneSempiReport {
  bool via_laplace = false;
  bool via_norm = false;
  double laplace_witness = 0.0;  // s
  double norm_witness = 0.0;     // lambda with a finite cosh modular
  bool agree() const { return via_laplace == via_norm; }
};

/// Laplace membership against finiteness of the weighted cosh - 1 modular
/// for some lambda = 2^k, k = 0..60.
inline PistoneSempiReport pistone_sempi_equivalence(const RearrangementFunction& mu_g, const WeightedContext& ctx) {
  PistoneSempiReport r;
  const auto m = quant_membership_report(mu_g, ctx);
  r.via_laplace = m.member;
  r.laplace_witness = m.witness;
  const auto ch = OrliczFunction::cosh_minus_one();
  for (int k = 0; k <= 60; ++k) {
    const double lambda = std::ldexp(1.0, k);
    if (std::isfinite(modular(mu_g, ch, 1.0 / lambda, &ctx))) {
      r.via_norm = true;
      r.norm_witness = lambda;
      break;
    }
  }
  return r;
}

struct MomentReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass = false;
};

/// Deliberately broken right-hand sides for mutation testing. Dropping the
/// factor 2n leaves a true inequality (von Neumann's trace inequality), so it
/// is not detectable; dropping the power on mu(y) is.
enum class MomentMutant { none, drop_factor, drop_exponent };

/// tau(x y^n) <= 2n integral of mu(y)^n mu(x) for positive x with tau(x) = 1.
inline MomentReport moment_bound_check(const AlgebraElement& x, const AlgebraElement& y, int n, double tol = 1e-9,
                                       MomentMutant mutant = MomentMutant::none) {
  if (n < 1) throw DomainError("moment order must be >= 1");
  if (!is_positive(x) || !is_positive(y)) throw DomainError("moment check needs positive x and y");
  if (std::abs(trace(x).real() - 1.0) > 1e-9) throw DomainError("moment check needs tau(x) = 1");
  AlgebraElement yn = AlgebraElement::identity(y.algebra());
  for (int i = 0; i < n; ++i) yn = yn * y;
  MomentReport r;
  r.lhs = trace(x * yn).real();
  const auto mx = singular_values(x), my = singular_values(y);
  // mu(y)^n is the step function of the n-th powers
  StepForm pw = my.step();
  if (mutant != MomentMutant::drop_exponent)
    for (double& v : pw.values) v = std::pow(v, n);
  WeightedContext ctx(mx);
  r.rhs = (mutant == MomentMutant::drop_factor ? 1.0 : 2.0 * n) * tau_x(RearrangementFunction(pw), ctx);
  r.slack = r.rhs - r.lhs;
  r.pass = r.lhs <= r.rhs + tol * std::max(1.0, r.rhs);
  return r;
}

}  // namespace ncorlicz
