#pragma once

// The named-check suite behind `ncorlicz verify` and the acceptance binary.
// Every check draws its corpus from its own stream make_rng(seed, name), so
// records do not depend on which other checks run or in which order.
//
// A check reduces each comparison to a slack in its own normalised units
// (allowed deviation minus observed deviation, or the relative margin of an
// inequality plus its tolerance); the check passes iff no slack is negative.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ncorlicz/algebra.hpp"
#include "ncorlicz/io.hpp"
#include "ncorlicz/morphisms.hpp"
#include "ncorlicz/norms.hpp"
#include "ncorlicz/orlicz.hpp"
#include "ncorlicz/positive_map.hpp"
#include "ncorlicz/random.hpp"
#include "ncorlicz/rearrangement.hpp"

namespace ncorlicz::verify {

using io::json;

struct SuiteOptions {
  std::uint64_t seed = 0;
  int samples = 0;            // > 0 replaces every default sample count
  std::optional<double> tol;  // replaces every per-check tolerance
  std::set<std::string> mutants;
  std::set<std::string> only;  // empty means all checks

  int count(int fallback) const { return samples > 0 ? samples : fallback; }
  bool mutant(const std::string& m) const { return mutants.count(m) > 0; }
};

/// Known mutants, each aimed at one check.
inline const std::vector<std::pair<std::string, std::string>>& known_mutants() {
  static const std::vector<std::pair<std::string, std::string>> m{
      {"moment-drop-exponent", "moment_chain: mu(y) instead of mu(y)^n on the right-hand side"},
      {"moment-drop-factor", "moment_chain: drop the factor 2n (still a true inequality; the check keeps passing)"},
      {"composition-unit-bound", "composition_bound: replace max{1, ||f_J||} by 1"},
  };
  return m;
}

struct CheckRecord {
  std::string name;
  std::string anchor;
  int samples = 0;
  double tolerance = 0.0;
  double worst_slack = kInf;
  bool pass = true;
  json detail = json::object();

  void observe(double slack) {
    if (std::isnan(slack)) slack = -kInf;
    worst_slack = std::min(worst_slack, slack);
    if (slack < 0.0) pass = false;
  }
  /// Boolean outcome: slack 0 when it holds, -1 when it does not.
  void require(bool ok) { observe(ok ? 0.0 : -1.0); }
};

inline json to_json(const CheckRecord& r) {
  return {{"name", r.name},          {"anchor", r.anchor},
          {"samples", r.samples},    {"tolerance", io::number(r.tolerance)},
          {"worst_slack", io::number(r.worst_slack)}, {"pass", r.pass},
          {"detail", r.detail}};
}

namespace detail {

inline CheckRecord start(const std::string& name, const std::string& anchor, const SuiteOptions& o, double tol) {
  CheckRecord r;
  r.name = name;
  r.anchor = anchor;
  r.tolerance = o.tol.value_or(tol);
  return r;
}

inline double rel(double x, double y) { return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300}); }

/// Relative margin of lhs <= rhs; +inf when rhs is +inf.
inline double margin(double lhs, double rhs) {
  if (is_inf(rhs)) return kInf;
  return (rhs - lhs) / std::max(1.0, std::abs(rhs));
}

/// a rescaled to operator norm `target`.
inline AlgebraElement with_norm(const AlgebraElement& a, double target) {
  const double n = operator_norm(a);
  return n == 0.0 ? a : (target / n) * a;
}

/// Largest relative pointwise gap between two decreasing functions, sampled
/// at 0, at the midpoints of the merged breakpoint grid and past the end.
inline double step_gap(const RearrangementFunction& x, const RearrangementFunction& y) {
  std::vector<double> g = x.breakpoints();
  const auto yb = y.breakpoints();
  g.insert(g.end(), yb.begin(), yb.end());
  g.push_back(0.0);
  std::sort(g.begin(), g.end());
  std::vector<double> pts{0.0};
  for (std::size_t i = 0; i + 1 < g.size(); ++i)
    if (g[i + 1] > g[i]) pts.push_back(0.5 * (g[i] + g[i + 1]));
  pts.push_back(g.back() + 1.0);
  double worst = 0.0;
  for (double t : pts) worst = std::max(worst, std::abs(x(t) - y(t)) / std::max(1.0, std::abs(x(t))));
  return worst;
}

inline StepForm random_decreasing_step(Rng& rng, int max_pieces, double dmin, double dmax, double vmin, double vmax) {
  const int k = uniform_int(rng, 1, max_pieces);
  StepForm s;
  for (int i = 0; i < k; ++i) {
    s.durations.push_back(uniform(rng, dmin, dmax));
    s.values.push_back(uniform(rng, vmin, vmax));
  }
  std::sort(s.values.rbegin(), s.values.rend());
  return s;
}

inline std::vector<JordanMorphism> morphism_corpus(Rng& rng) {
  std::vector<JordanMorphism> out{
      JordanMorphism::transpose(2),
      JordanMorphism::transpose(3, 0.5),
      JordanMorphism::doubling(2),
      JordanMorphism::doubling(3),
      JordanMorphism::kernel(2),
      JordanMorphism::padded(2, 1),
      JordanMorphism::padded(3, 2),
      JordanMorphism::identity(TracedAlgebra({{2, 1.0}, {1, 0.3}})),
      JordanMorphism::zero(TracedAlgebra::full(2), TracedAlgebra::full(3)),
  };
  out.push_back(JordanMorphism::doubling(2).rotated(rng));
  out.push_back(JordanMorphism::padded(2, 1).rotated(rng));
  out.push_back(JordanMorphism::doubling(2).reweighted({0.5, 2.0}));
  out.push_back(JordanMorphism(TracedAlgebra({{1, 1.0}, {2, 0.5}}), TracedAlgebra({{5, 0.3}, {2, 1.2}}),
                               {{false,
                                 {{0, 1, Flavor::homomorphism},
                                  {1, 1, Flavor::homomorphism},
                                  {1, 1, Flavor::antihomomorphism}},
                                 {},
                                 0},
                                {false, {{0, 1, Flavor::homomorphism}}, {}, 1}})
                    .rotated(rng));
  return out;
}

/// (psi, phi2) pairs for the composition operator.
inline std::vector<std::pair<OrliczFunction, OrliczFunction>> composition_pairs() {
  return {
      {OrliczFunction::power(1), OrliczFunction::power(2)},
      {OrliczFunction::power(2), OrliczFunction::power(1)},
      {OrliczFunction::power(2), OrliczFunction::power(2)},
      {OrliczFunction::cosh_minus_one(), OrliczFunction::power(1)},
      {OrliczFunction::linear_until_cap(2.0), OrliczFunction::power(2)},
  };
}

inline std::vector<PositiveMap> positive_map_corpus(Rng& rng) {
  return {
      PositiveMap::pinching(3),
      PositiveMap::random_unital_channel(rng, 3, 3),
      PositiveMap::random_cp(rng, TracedAlgebra::full(2), TracedAlgebra({{2, 1.0}, {1, 0.3}}), 1),
      PositiveMap::random_cp(rng, TracedAlgebra({{1, 2.0}, {3, 0.7}, {2, 1.5}}), TracedAlgebra::full(3, 0.5), 2),
      PositiveMap::scaled_identity(TracedAlgebra({{2, 1.0}, {1, 0.3}}), 0.6),
      PositiveMap::transpose_map(2),
  };
}

}  // namespace detail

// criteria-level checks ---------------------------------------------------

inline CheckRecord check_norm_equivalence(const SuiteOptions& o) {
  auto r = detail::start("norm_equivalence", "Luxemburg norm of mu(a) equals the trace-defined Luxemburg norm", o, 1e-7);
  auto rng = make_rng(o.seed, r.name);
  const auto algs = standard_algebras();
  const std::vector<OrliczFunction> gauges{OrliczFunction::power(1), OrliczFunction::power(2), OrliczFunction::power(3),
                                           OrliczFunction::cosh_minus_one(), OrliczFunction::linear_until_cap(1.5)};
  double worst = 0.0;
  for (int i = 0, n = o.count(200); i < n; ++i) {
    const auto a = uniform(rng, 0.1, 2.0) * random_element(rng, algs[i % algs.size()]);
    const auto mu = singular_values(a);
    for (const auto& phi : gauges) {
      const double k = kunze_norm(a, phi, 1e-10, false);
      const double l = luxemburg_norm(mu, phi);
      worst = std::max(worst, detail::rel(k, l));
      r.observe(r.tolerance - detail::rel(k, l));
    }
    ++r.samples;
  }
  r.detail = {{"gauges", gauges.size()}, {"algebras", algs.size()}, {"max_relative_gap", worst}};
  return r;
}

inline CheckRecord check_rearrangement_exchange(const SuiteOptions& o) {
  auto r = detail::start("rearrangement_exchange", "phi(mu_t(a)) = mu_t(phi(|a|))", o, 1e-10);
  auto rng = make_rng(o.seed, r.name);
  const auto algs = standard_algebras();
  const std::vector<OrliczFunction> gauges{
      OrliczFunction::power(2), OrliczFunction::cosh_minus_one(), OrliczFunction::zero_then_linear(0.5),
      OrliczFunction::linear_until_cap(4.0),
      compose_orlicz(OrliczFunction::power(2), OrliczFunction::zero_then_linear(0.3))};
  for (int i = 0, n = o.count(200); i < n; ++i) {
    // spectrum kept below the cap b = 4
    const auto a = detail::with_norm(random_element(rng, algs[i % algs.size()]), uniform(rng, 0.2, 3.5));
    const auto mu = singular_values(a);
    for (const auto& phi : gauges) {
      StepForm lhs = mu.step();
      for (double& v : lhs.values) v = phi(v);
      const auto rhs = singular_values(apply_function(phi, a));
      r.observe(r.tolerance - detail::step_gap(RearrangementFunction(lhs), rhs));
    }
    ++r.samples;
  }
  r.detail = {{"gauges", gauges.size()}};
  return r;
}

inline CheckRecord check_holder_pairing(const SuiteOptions& o) {
  auto r = detail::start("holder_pairing", "|tau(fg)| <= ||f||^0_phi ||g||_phi (Koethe dual pairing)", o, 1e-8);
  auto rng = make_rng(o.seed, r.name);
  const auto algs = standard_algebras();
  const std::vector<OrliczFunction> gauges{OrliczFunction::power(2), OrliczFunction::power(3),
                                           OrliczFunction::cosh_minus_one()};
  const double oracle_tol = 1e-7;
  double worst_oracle = 0.0;
  int violations = 0;
  for (int i = 0, n = o.count(500); i < n; ++i) {
    const auto& alg = algs[i % algs.size()];
    const auto f = random_element(rng, alg), g = random_element(rng, alg);
    const std::vector<AlgebraElement> probes{random_element(rng, alg), f.adjoint()};
    for (std::size_t k = 0; k < gauges.size(); ++k) {
      const auto h = holder_check(f, g, gauges[k], probes, r.tolerance);
      if (!h.pass) ++violations;
      r.observe(detail::margin(h.pairing, h.bound) + r.tolerance);
      r.observe(detail::margin(h.sampled_sup, h.dual_norm) + r.tolerance);
      if (k == 0) {
        // power(2): both norms are trace 2-norms (phi* = u^2/4)
        const double f2 = std::sqrt(trace(f.adjoint() * f).real()), g2 = std::sqrt(trace(g.adjoint() * g).real());
        const double gap = std::max(detail::rel(h.dual_norm, f2), detail::rel(h.norm_g, g2));
        worst_oracle = std::max(worst_oracle, gap);
        r.observe(o.tol.value_or(oracle_tol) - gap);
      }
    }
    ++r.samples;
  }
  r.detail = {{"gauges", gauges.size()},
              {"violations", violations},
              {"cauchy_schwarz_max_gap", worst_oracle},
              {"cauchy_schwarz_tolerance", o.tol.value_or(oracle_tol)}};
  return r;
}

inline CheckRecord check_weighted_norm_axioms(const SuiteOptions& o) {
  auto r = detail::start("weighted_norm_axioms", "weighted Luxemburg norm: triangle inequality and homogeneity", o, 1e-8);
  auto rng = make_rng(o.seed, r.name);
  const auto algs = standard_algebras();
  const std::vector<WeightedContext> weights{
      WeightedContext(RearrangementFunction(StepForm{{0.5, 1.5, 2.0}, {2.0, 1.0, 0.5}})),
      WeightedContext(RearrangementFunction(catalog::exp_decay())),
      WeightedContext(RearrangementFunction(StepForm{{1.0, 3.0}, {1.5, 0.25}})),
  };
  const std::vector<OrliczFunction> gauges{OrliczFunction::cosh_minus_one(), OrliczFunction::power(2)};
  int triangle = 0, homogeneity = 0;
  for (int i = 0, n = o.count(300); i < n; ++i) {
    const auto& ctx = weights[i % weights.size()];
    const auto& phi = gauges[(i / weights.size()) % gauges.size()];
    const auto& alg = algs[i % algs.size()];
    const auto a = random_element(rng, alg), b = random_element(rng, alg);
    const Complex alpha(gaussian(rng), gaussian(rng));
    auto norm = [&](const AlgebraElement& x) { return luxemburg_norm(singular_values(x), phi, &ctx); };
    const double na = norm(a), nb = norm(b), nab = norm(a + b), nalpha = norm(alpha * a);
    const double t = detail::margin(nab, na + nb) + r.tolerance;
    const double h = r.tolerance - detail::rel(nalpha, std::abs(alpha) * na);
    triangle += t < 0.0;
    homogeneity += h < 0.0;
    r.observe(t);
    r.observe(h);
    ++r.samples;
  }
  r.detail = {{"weights", weights.size()}, {"triangle_violations", triangle}, {"homogeneity_violations", homogeneity}};
  return r;
}

inline CheckRecord check_weighted_rearrangement_identity(const SuiteOptions& o) {
  auto r = detail::start("weighted_rearrangement_identity", "h(t) = weighted rearrangement of h at F_x(t) for decreasing h",
                         o, 1e-10);
  auto rng = make_rng(o.seed, r.name);
  int points = 0;
  for (int i = 0, n = o.count(100); i < n; ++i) {
    const RearrangementFunction h(detail::random_decreasing_step(rng, 6, 0.1, 2.0, 0.1, 5.0));
    const WeightedContext ctx(RearrangementFunction(detail::random_decreasing_step(rng, 4, 0.2, 2.5, 0.1, 3.0)));
    std::vector<double> g = h.breakpoints();
    for (double b : ctx.weight().breakpoints()) g.push_back(b);
    g.push_back(0.0);
    std::sort(g.begin(), g.end());
    for (std::size_t k = 0; k + 1 < g.size(); ++k) {
      const double t = 0.5 * (g[k] + g[k + 1]);
      if (!(g[k + 1] > g[k]) || t >= ctx.t_x()) continue;
      const double lhs = weighted_rearrangement(h, ctx, ctx.F(t));
      r.observe(r.tolerance - std::abs(lhs - h(t)) / std::max(1.0, h(t)));
      ++points;
    }
    ++r.samples;
  }
  r.detail = {{"points", points}};
  return r;
}

inline CheckRecord check_pistone_sempi(const SuiteOptions& o) {
  auto r = detail::start("pistone_sempi", "Laplace-transform membership coincides with the weighted cosh-1 Orlicz space",
                         o, 1e-8);
  struct Case {
    std::string name;
    RearrangementFunction mu;
    bool expected;
  };
  const std::vector<Case> mus{
      {"step", RearrangementFunction(StepForm{{1.0, 2.0}, {3.0, 1.0}}), true},
      {"constant", RearrangementFunction(catalog::constant(1.5, 2.0)), true},
      {"log_reciprocal", RearrangementFunction(catalog::log_reciprocal(1.0)), true},
      {"power_decay", RearrangementFunction(catalog::power_decay(0.5, 1.0)), false},
      {"reciprocal", RearrangementFunction(catalog::reciprocal(1.0)), false},
  };
  const std::vector<std::pair<std::string, WeightedContext>> ws{
      {"exp_decay", WeightedContext(RearrangementFunction(catalog::exp_decay()))},
      {"step", WeightedContext(RearrangementFunction(StepForm{{0.5, 2.0}, {2.0, 0.5}}))},
  };
  json cases = json::array();
  for (const auto& m : mus)
    for (const auto& [wname, ctx] : ws) {
      const auto p = pistone_sempi_equivalence(m.mu, ctx);
      r.require(p.agree() && p.via_laplace == m.expected);
      cases.push_back({{"mu_g", m.name}, {"weight", wname}, {"via_laplace", p.via_laplace}, {"via_norm", p.via_norm}});
      ++r.samples;
    }
  // closed-form certificates for log(1/t) on (0, 1) at s = 1/2:
  // exp_decay weight: int_0^1 t^{-1/2} e^{-t} dt + int_1^inf e^{-t} dt = sqrt(pi) erf(1) + e^{-1};
  // step weight (2 on [0, .5), .5 on [.5, 2.5)): 4 sqrt(.5) + (1 - sqrt(.5)) + .75.
  const double c_exp = std::sqrt(M_PI) * std::erf(1.0) + std::exp(-1.0);
  const double c_step = 4.0 * std::sqrt(0.5) + (1.0 - std::sqrt(0.5)) + 0.75;
  const double p_exp = laplace_probe(mus[2].mu, ws[0].second, 0.5);
  const double p_step = laplace_probe(mus[2].mu, ws[1].second, 0.5);
  r.observe(r.tolerance - detail::rel(p_exp, c_exp));
  r.observe(r.tolerance - detail::rel(p_step, c_step));
  // exp(s/t) >= (s/t)^2 / 2 is not integrable at 0 for any s > 0
  const double tiny = std::ldexp(1.0, -40);
  r.require(is_inf(laplace_probe(mus[4].mu, ws[0].second, tiny)) && is_inf(laplace_probe(mus[4].mu, ws[1].second, tiny)));
  r.detail = {{"cases", cases},
              {"certificate_exp_decay", {{"probe", p_exp}, {"closed_form", c_exp}}},
              {"certificate_step", {{"probe", p_step}, {"closed_form", c_step}}}};
  return r;
}

inline CheckRecord check_tau_x_quasi_trace(const SuiteOptions& o) {
  auto r = detail::start("tau_x_quasi_trace",
                         "tau_x is subadditive, homogeneous, tracial, faithful and normal on increasing sequences", o,
                         1e-10);
  auto rng = make_rng(o.seed, r.name);
  const auto algs = standard_algebras();
  double unit_gap = 0.0;
  for (int i = 0, n = o.count(200); i < n; ++i) {
    const auto& alg = algs[i % algs.size()];
    const auto x = random_positive(rng, alg);
    const WeightedContext ctx(singular_values(x));
    auto tx = [&](const AlgebraElement& f) { return tau_x(f, ctx); };
    const double tol = r.tolerance;

    const auto f = random_positive(rng, alg), g = random_positive(rng, alg);
    r.observe(detail::margin(tx(f + g), tx(f) + tx(g)) + tol);

    const double alpha = uniform(rng, 0.01, 10.0);
    r.observe(tol - detail::rel(tx(alpha * f), alpha * tx(f)));

    const auto a = random_element(rng, alg);
    r.observe(tol - detail::rel(tx(a.adjoint() * a), tx(a * a.adjoint())));

    // rank-one positive in a random block
    std::vector<Matrix> blocks;
    const std::size_t j = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(alg.num_blocks()) - 1));
    for (std::size_t k = 0; k < alg.num_blocks(); ++k) {
      const int d = alg.block(k).dim;
      if (k == j) {
        const Matrix v = random_matrix(rng, d, 1);
        blocks.push_back(v * v.adjoint());
      } else {
        blocks.push_back(Matrix::Zero(d, d));
      }
    }
    const AlgebraElement p(alg, std::move(blocks));
    r.observe(tx(p) > 0.0 ? std::min(tol, tx(p) / operator_norm(p)) : -1.0);

    // f_n = min(f, n f^2) increases to f
    double prev = 0.0, last = 0.0;
    for (int k = 0; k <= 40; ++k) {
      const double nk = std::ldexp(1.0, k);
      last = tx(apply_hermitian([nk](double s) { return std::min(s, nk * s * s); }, f));
      r.observe(detail::margin(prev, last) + tol);
      prev = last;
    }
    r.observe(tol - detail::rel(last, tx(f)));

    const double one = tx(AlgebraElement::identity(alg)), tr = trace(x).real();
    unit_gap = std::max(unit_gap, detail::rel(one, tr));
    r.observe(std::min(tol, 1e-12) - detail::rel(one, tr));
    ++r.samples;
  }
  r.detail = {{"unit_max_relative_gap", unit_gap}};
  return r;
}

inline CheckRecord check_moment_chain(const SuiteOptions& o) {
  auto r = detail::start("moment_chain", "tau(x y^n) <= 2n integral of mu_s(y)^n mu_s(x) ds", o, 1e-9);
  auto rng = make_rng(o.seed, r.name);
  const auto algs = standard_algebras();
  MomentMutant mutant = MomentMutant::none;
  if (o.mutant("moment-drop-exponent")) mutant = MomentMutant::drop_exponent;
  if (o.mutant("moment-drop-factor")) mutant = MomentMutant::drop_factor;
  json by_order = json::object();
  for (int n : {1, 2, 3, 5}) {
    int fails = 0;
    for (int i = 0, m = o.count(200); i < m; ++i) {
      const auto& alg = algs[i % algs.size()];
      auto x = random_positive(rng, alg);
      x = (1.0 / trace(x).real()) * x;
      const auto y = detail::with_norm(random_positive(rng, alg), uniform(rng, 0.3, 4.0));
      const auto rep = moment_bound_check(x, y, n, r.tolerance, mutant);
      fails += !rep.pass;
      r.observe(detail::margin(rep.lhs, rep.rhs) + r.tolerance);
      ++r.samples;
    }
    by_order[std::to_string(n)] = fails;
  }
  r.detail = {{"failures_by_order", by_order}};
  return r;
}

inline CheckRecord check_luxemburg_sup_bounds(const SuiteOptions& o) {
  auto r = detail::start("luxemburg_sup_bounds",
                         "a_phi ||a||_phi <= ||a||_inf <= b_phi ||a||_phi and tau(phi(beta|a|)) <= beta tau(phi(|a|))",
                         o, 1e-8);
  auto rng = make_rng(o.seed, r.name);
  const auto algs = standard_algebras();
  const std::vector<OrliczFunction> lower{
      OrliczFunction::zero_then_linear(0.5), OrliczFunction::zero_then_linear(1.2, 2.0),
      compose_orlicz(OrliczFunction::power(2), OrliczFunction::zero_then_linear(0.3))};
  const std::vector<OrliczFunction> upper{OrliczFunction::linear_until_cap(2.0), OrliczFunction::linear_until_cap(0.7, 3.0),
                                          OrliczFunction::linear_until_cap(1.5, 0.0)};
  const std::vector<OrliczFunction> beta_gauges{OrliczFunction::power(2), OrliczFunction::cosh_minus_one(),
                                                OrliczFunction::zero_then_linear(0.5),
                                                OrliczFunction::linear_until_cap(4.0)};
  int v_lower = 0, v_upper = 0, v_beta = 0;
  auto note = [&](double s, int& counter) {
    counter += s < 0.0;
    r.observe(s);
  };
  for (int i = 0, n = o.count(200); i < n; ++i) {
    const auto a = detail::with_norm(random_element(rng, algs[i % algs.size()]), uniform(rng, 0.2, 3.0));
    const auto mu = singular_values(a);
    const double sup = mu(0.0);
    for (const auto& phi : lower) note(detail::margin(phi.a() * luxemburg_norm(mu, phi), sup) + r.tolerance, v_lower);
    for (const auto& phi : upper) note(detail::margin(sup, phi.b() * luxemburg_norm(mu, phi)) + r.tolerance, v_upper);
    const double beta = uniform(rng, 0.01, 1.0);
    for (const auto& phi : beta_gauges) {
      const double lhs = trace(apply_function(phi, a, beta)).real();
      const double rhs = beta * trace(apply_function(phi, a)).real();
      note(detail::margin(lhs, rhs) + r.tolerance, v_beta);
    }
    ++r.samples;
  }
  r.detail = {{"lower_violations", v_lower}, {"upper_violations", v_upper}, {"beta_violations", v_beta}};
  return r;
}

inline CheckRecord check_projection_norm(const SuiteOptions& o) {
  auto r = detail::start("projection_norm", "||e||_phi = 1 / phi^{-1}(1 / tau(e)) for projections e", o, 1e-8);
  auto rng = make_rng(o.seed, r.name);
  const auto algs = standard_algebras();
  const std::vector<OrliczFunction> gauges{
      OrliczFunction::power(1),          OrliczFunction::power(2),
      OrliczFunction::power(3, 0.5),     OrliczFunction::power_over_p(2.5),
      OrliczFunction::cosh_minus_one(),  OrliczFunction::exp_minus_one(),
      OrliczFunction::t_log1p(),         OrliczFunction::zero_then_linear(0.5),
      OrliczFunction::linear_until_cap(2.0),
      compose_orlicz(OrliczFunction::power(2), OrliczFunction::cosh_minus_one())};
  double worst = 0.0;
  for (int i = 0, n = o.count(50); i < n; ++i) {
    const auto& alg = algs[i % algs.size()];
    std::vector<Matrix> blocks;
    bool any = false;
    for (const auto& b : alg.blocks()) {
      Matrix d = Matrix::Zero(b.dim, b.dim);
      for (int k = 0; k < b.dim; ++k)
        if (uniform01(rng) < 0.5) {
          d(k, k) = 1.0;
          any = true;
        }
      const Matrix u = random_unitary(rng, b.dim);
      blocks.push_back(u * d * u.adjoint());
    }
    if (!any) {
      blocks[0] = Matrix::Zero(alg.block(0).dim, alg.block(0).dim);
      blocks[0](0, 0) = 1.0;
    }
    const AlgebraElement e(alg, std::move(blocks));
    const auto& phi = gauges[i % gauges.size()];
    const double formula = projection_trace_norm(alg, e, phi);
    const double oracle = luxemburg_norm(singular_values(e), phi);
    worst = std::max(worst, detail::rel(formula, oracle));
    r.observe(r.tolerance - detail::rel(formula, oracle));
    ++r.samples;
  }
  r.detail = {{"gauges", gauges.size()}, {"max_relative_gap", worst}};
  return r;
}

inline CheckRecord check_composition_bound(const SuiteOptions& o) {
  auto r = detail::start("composition_bound", "||J(a)||_phi2 <= max{1, ||f_J||^0_psi*} ||a||_phi1 on self-adjoint a", o,
                         1e-7);
  auto rng = make_rng(o.seed, r.name);
  const auto corpus = detail::morphism_corpus(rng);
  const auto pairs = detail::composition_pairs();
  const bool unit = o.mutant("composition-unit-bound");
  json rows = json::array();
  for (std::size_t m = 0; m < corpus.size(); ++m)
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const auto rep = composition_bound_check(corpus[m], pairs[p].first, pairs[p].second, rng, o.count(20), r.tolerance);
      const double bound = unit ? 1.0 : rep.bound;
      r.observe(detail::margin(rep.max_ratio, bound) + r.tolerance);
      r.samples += rep.samples;
      rows.push_back({{"morphism", m},
                      {"pair", p},
                      {"bound", bound},
                      {"max_ratio", rep.max_ratio},
                      {"max_non_self_adjoint_ratio", rep.max_nonsa_ratio}});
    }
  r.detail = {{"morphisms", corpus.size()}, {"pairs", pairs.size()}, {"rows", rows}};
  return r;
}

inline CheckRecord check_modular_chain(const SuiteOptions& o) {
  auto r = detail::start("modular_chain",
                         "tau(phi2(|J(a)|)) = tau(phi2(J(|a|))) = tau(J(phi2(|a|))) = tau(f_J phi2(|a|))", o, 1e-9);
  auto rng = make_rng(o.seed, r.name);
  const auto corpus = detail::morphism_corpus(rng);
  const auto pairs = detail::composition_pairs();
  int skipped = 0;
  double worst_gap = 0.0;
  for (const auto& J : corpus)
    for (const auto& [psi, phi2] : pairs) {
      const auto phi1 = compose_orlicz(psi, phi2);
      for (int i = 0, n = o.count(3); i < n; ++i) {
        auto a = random_self_adjoint(rng, J.source());
        a = (uniform(rng, 0.3, 0.95) / luxemburg_norm(singular_values(a), phi1)) * a;
        const auto rep = modular_chain_check(J, psi, phi2, a, r.tolerance);
        ++r.samples;
        if (!rep.hypothesis_ok) {
          ++skipped;
          continue;
        }
        worst_gap = std::max(worst_gap, rep.max_gap);
        r.observe(r.tolerance - rep.max_gap);
        r.require(rep.bound);
      }
    }
  r.detail = {{"hypothesis_violations", skipped}, {"max_gap", worst_gap}};
  return r;
}

inline CheckRecord check_tau_T(const SuiteOptions& o) {
  auto r = detail::start("tau_T", "tau_T is a faithful normal trace dominating tau_2 o J", o, 1e-10);
  auto rng = make_rng(o.seed, r.name);
  const auto corpus = detail::morphism_corpus(rng);
  for (const auto& J : corpus) {
    const auto rep = tau_T_check(J, rng, o.count(40));
    r.observe(r.tolerance - rep.trace_gap);
    r.observe(r.tolerance - rep.domination_gap);
    r.observe(rep.min_positive > 0.0 ? std::min(r.tolerance, rep.min_positive) : -1.0);
    r.samples += rep.samples;
  }
  r.detail = {{"morphisms", corpus.size()}};
  return r;
}

inline CheckRecord check_interpolation_contraction(const SuiteOptions& o) {
  auto r = detail::start("interpolation_contraction",
                         "||T(a)||_phi <= max(C, N) ||a||_phi and mu(T(a)) / max(C, N) submajorized by mu(a)", o, 1e-9);
  auto rng = make_rng(o.seed, r.name);
  const auto maps = detail::positive_map_corpus(rng);
  const std::vector<OrliczFunction> gauges{OrliczFunction::power(2), OrliczFunction::cosh_minus_one()};
  const int per = std::max(1, o.count(50) / static_cast<int>(gauges.size()));
  json rows = json::array();
  for (std::size_t m = 0; m < maps.size(); ++m)
    for (const auto& phi : gauges) {
      const auto rep = interpolation_contraction_check(maps[m], phi, rng, per, r.tolerance);
      r.require(rep.positive_on_samples && rep.submajorization_failures == 0);
      r.observe(rep.worst_norm_slack / std::max(1.0, rep.constant) + r.tolerance);
      r.samples += rep.samples;
      rows.push_back({{"map", m}, {"C", rep.C}, {"N", rep.N}, {"constant", rep.constant}});
    }
  r.detail = {{"maps", maps.size()}, {"rows", rows}};
  return r;
}

// further invariants ------------------------------------------------------

inline CheckRecord check_young_inequality(const SuiteOptions& o) {
  auto r = detail::start("young_inequality", "uv <= phi(u) + phi*(v) and midpoint convexity of phi", o, 1e-8);
  auto rng = make_rng(o.seed, r.name);
  const std::vector<OrliczFunction> gauges{
      OrliczFunction::power(1.5),         OrliczFunction::power(3),          OrliczFunction::power_over_p(3),
      OrliczFunction::cosh_minus_one(),   OrliczFunction::exp_minus_one(),   OrliczFunction::t_log1p(),
      OrliczFunction::zero_then_linear(0.5), OrliczFunction::linear_until_cap(2.0)};
  std::vector<OrliczFunction> conj;
  for (const auto& g : gauges) conj.push_back(conjugate(g));
  for (int i = 0, n = o.count(200); i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(i) % gauges.size();
    const double u = std::exp(uniform(rng, -3.0, 2.0)), v = std::exp(uniform(rng, -3.0, 2.0));
    const double pu = gauges[k](u), cv = conj[k](v);
    r.observe(detail::margin(u * v, pu + cv) + r.tolerance);
    const double w = std::exp(uniform(rng, -3.0, 2.0));
    const double pw = gauges[k](w), mid = gauges[k](0.5 * (u + w));
    if (std::isfinite(pu) && std::isfinite(pw)) r.observe(0.5 * (pu + pw) + 1e-12 * (1.0 + std::max(pu, pw)) - mid);
    ++r.samples;
  }
  r.detail = {{"gauges", gauges.size()}};
  return r;
}

inline CheckRecord check_fack_kosaki(const SuiteOptions& o) {
  auto r = detail::start("fack_kosaki", "mu_{t+s}(fg) <= mu_t(f) mu_s(g), mu(f*f) = mu(ff*), mu(alpha f) = |alpha| mu(f)",
                         o, 1e-10);
  auto rng = make_rng(o.seed, r.name);
  const auto algs = standard_algebras();
  for (int i = 0, n = o.count(100); i < n; ++i) {
    const auto& alg = algs[i % algs.size()];
    const auto rep = fack_kosaki_checks(random_element(rng, alg), random_element(rng, alg),
                                        Complex(gaussian(rng), gaussian(rng)));
    r.observe(r.tolerance - std::max({rep.product_violation, rep.adjoint_violation, rep.homogeneity_violation}));
    ++r.samples;
  }
  return r;
}

inline CheckRecord check_jordan_axioms(const SuiteOptions& o) {
  auto r = detail::start("jordan_axioms", "constructed morphisms are normal Jordan *-morphisms", o, 1e-10);
  auto rng = make_rng(o.seed, r.name);
  const auto corpus = detail::morphism_corpus(rng);
  for (const auto& J : corpus)
    for (int i = 0, n = o.count(20); i < n; ++i) {
      r.observe(r.tolerance -
                jordan_axiom_violation(J, random_element(rng, J.source()), random_element(rng, J.source())));
      ++r.samples;
    }
  return r;
}

inline CheckRecord check_absolute_continuity(const SuiteOptions& o) {
  auto r = detail::start("absolute_continuity", "tau_1(e) < eps / ||f_J||_inf implies tau_2(J(e)) < eps", o, 0.0);
  auto rng = make_rng(o.seed, r.name);
  for (const auto& J : detail::morphism_corpus(rng)) {
    const auto rep = absolute_continuity_check(J);
    r.require(rep.pass());
    r.samples += rep.projections;
  }
  return r;
}

inline CheckRecord check_modular_at_norm(const SuiteOptions& o) {
  auto r = detail::start("modular_at_norm", "the modular equals 1 at the Luxemburg norm (infimum property)", o, 1e-9);
  auto rng = make_rng(o.seed, r.name);
  const auto algs = standard_algebras();
  const std::vector<OrliczFunction> gauges{OrliczFunction::power(1),       OrliczFunction::power(2),
                                           OrliczFunction::cosh_minus_one(), OrliczFunction::exp_minus_one(),
                                           OrliczFunction::t_log1p(),        OrliczFunction::zero_then_linear(0.5)};
  for (int i = 0, n = o.count(100); i < n; ++i) {
    const auto mu = singular_values(random_element(rng, algs[i % algs.size()]));
    for (const auto& phi : gauges) {
      const double lambda = luxemburg_norm(mu, phi);
      r.observe(1.0 + r.tolerance - modular(mu, phi, 1.0 / lambda));
      r.observe(modular(mu, phi, 1.0 / (lambda * (1.0 - 10.0 * r.tolerance))) - (1.0 - r.tolerance));
    }
    ++r.samples;
  }
  return r;
}

inline CheckRecord check_delta2_finiteness(const SuiteOptions& o) {
  auto r = detail::start("delta2_finiteness",
                         "for Delta2 phi, ||a||_phi is finite iff tau(phi(|a|)) is finite; fails without Delta2", o, 0.0);
  auto rng = make_rng(o.seed, r.name);
  const auto algs = standard_algebras();
  const std::vector<OrliczFunction> delta2{OrliczFunction::power(1.5), OrliczFunction::power(2),
                                           OrliczFunction::power_over_p(3)};
  const auto cap = OrliczFunction::linear_until_cap(1.0);
  int counterexamples = 0;
  for (int i = 0, n = o.count(100); i < n; ++i) {
    const auto a = random_element(rng, algs[i % algs.size()]);
    for (double scale : {1.0, 1e6}) {
      const auto b = scale * a;
      for (const auto& phi : delta2) {
        const bool norm_finite = std::isfinite(luxemburg_norm(singular_values(b), phi));
        const bool modular_finite = std::isfinite(trace(apply_function(phi, b)).real());
        r.require(norm_finite == modular_finite);
      }
    }
    // the cap gauge is not Delta2: the norm stays finite once the spectrum
    // leaves [0, b] although the modular at scale 1 is infinite
    const auto big = detail::with_norm(a, 2.0);
    bool modular_finite = true;
    try {
      (void)apply_function(cap, big);
    } catch (const NotMeasurableError&) {
      modular_finite = false;
    }
    const bool norm_finite = std::isfinite(luxemburg_norm(singular_values(big), cap));
    counterexamples += norm_finite && !modular_finite;
    r.require(norm_finite && !modular_finite);
    ++r.samples;
  }
  r.detail = {{"non_delta2_counterexamples", counterexamples}};
  return r;
}

inline CheckRecord check_composed_norm_bound(const SuiteOptions& o) {
  auto r = detail::start("composed_norm_bound", "||phi2(|a|)||_psi <= ||a||_phi1 when ||a||_phi1 < 1, phi1 = psi o phi2",
                         o, 1e-8);
  auto rng = make_rng(o.seed, r.name);
  const auto algs = standard_algebras();
  const auto pairs = detail::composition_pairs();
  for (int i = 0, n = o.count(100); i < n; ++i) {
    const auto& [psi, phi2] = pairs[i % pairs.size()];
    const auto phi1 = compose_orlicz(psi, phi2);
    auto a = random_element(rng, algs[i % algs.size()]);
    a = (uniform(rng, 0.05, 0.99) / luxemburg_norm(singular_values(a), phi1)) * a;
    const double rhs = luxemburg_norm(singular_values(a), phi1);
    const double lhs = luxemburg_norm(singular_values(apply_function(phi2, a)), psi);
    r.observe(detail::margin(lhs, rhs) + r.tolerance);
    ++r.samples;
  }
  return r;
}

inline CheckRecord check_commutative_isometry(const SuiteOptions& o) {
  auto r = detail::start("commutative_isometry",
                         "on a commutative algebra the weighted norm equals the norm for the reweighted trace tau_x", o,
                         1e-8);
  auto rng = make_rng(o.seed, r.name);
  const std::vector<OrliczFunction> gauges{OrliczFunction::power(2), OrliczFunction::cosh_minus_one()};
  for (int i = 0, n = o.count(50); i < n; ++i) {
    const int k = uniform_int(rng, 3, 6);
    std::vector<double> c, xv, order;
    for (int j = 0; j < k; ++j) {
      c.push_back(uniform(rng, 0.2, 2.0));
      xv.push_back(uniform(rng, 0.1, 3.0));
    }
    const auto alg = TracedAlgebra::commutative(c);
    const auto x = AlgebraElement::diagonal(alg, xv);
    const WeightedContext ctx(singular_values(x));
    // f and g ordered like x, so tau_x is additive on them
    std::vector<int> idx(k);
    for (int j = 0; j < k; ++j) idx[j] = j;
    std::sort(idx.begin(), idx.end(), [&](int p, int q) { return xv[p] > xv[q]; });
    auto comonotone = [&]() {
      std::vector<double> v;
      for (int j = 0; j < k; ++j) v.push_back(uniform(rng, 0.05, 4.0));
      std::sort(v.rbegin(), v.rend());
      std::vector<double> out(k);
      for (int j = 0; j < k; ++j) out[idx[j]] = v[j];
      return out;
    };
    const auto fv = comonotone(), gv = comonotone();
    const auto f = AlgebraElement::diagonal(alg, fv), g = AlgebraElement::diagonal(alg, gv);
    r.observe(r.tolerance - detail::rel(tau_x(f + g, ctx), tau_x(f, ctx) + tau_x(g, ctx)));

    std::vector<double> cx;
    for (int j = 0; j < k; ++j) cx.push_back(c[j] * xv[j]);
    const auto alg_x = TracedAlgebra::commutative(cx);
    const auto f_x = AlgebraElement::diagonal(alg_x, fv);
    for (const auto& phi : gauges) {
      const double weighted = luxemburg_norm(singular_values(f), phi, &ctx);
      const double reweighted = kunze_norm(f_x, phi, 1e-10, false);
      r.observe(r.tolerance - detail::rel(weighted, reweighted));
    }
    ++r.samples;
  }
  return r;
}

inline CheckRecord check_choi_purity(const SuiteOptions& o) {
  auto r = detail::start("choi_purity", "a CP map is pure iff its Choi matrix has rank one", o, 0.0);
  auto rng = make_rng(o.seed, r.name);
  for (int i = 0, n = o.count(20); i < n; ++i) {
    const int d = uniform_int(rng, 2, 4);
    const auto alg = TracedAlgebra::full(d);
    const PositiveMap conj(alg, alg, {{0, 0, random_unitary(rng, d), false}}, true);
    r.require(purity_check(conj).pure);
    const auto pin = purity_check(PositiveMap::pinching(d));
    r.require(!pin.pure && pin.choi_rank == d);
    const auto mix = purity_check(PositiveMap::random_unital_channel(rng, d, 2));
    r.require(!mix.pure && mix.choi_rank == 2);
    ++r.samples;
  }
  return r;
}

// suite -------------------------------------------------------------------

struct CheckSpec {
  std::string name;
  std::function<CheckRecord(const SuiteOptions&)> run;
};

inline const std::vector<CheckSpec>& registry() {
  static const std::vector<CheckSpec> r{
      {"absolute_continuity", check_absolute_continuity},
      {"choi_purity", check_choi_purity},
      {"commutative_isometry", check_commutative_isometry},
      {"composed_norm_bound", check_composed_norm_bound},
      {"composition_bound", check_composition_bound},
      {"delta2_finiteness", check_delta2_finiteness},
      {"fack_kosaki", check_fack_kosaki},
      {"holder_pairing", check_holder_pairing},
      {"interpolation_contraction", check_interpolation_contraction},
      {"jordan_axioms", check_jordan_axioms},
      {"luxemburg_sup_bounds", check_luxemburg_sup_bounds},
      {"modular_at_norm", check_modular_at_norm},
      {"modular_chain", check_modular_chain},
      {"moment_chain", check_moment_chain},
      {"norm_equivalence", check_norm_equivalence},
      {"pistone_sempi", check_pistone_sempi},
      {"projection_norm", check_projection_norm},
      {"rearrangement_exchange", check_rearrangement_exchange},
      {"tau_T", check_tau_T},
      {"tau_x_quasi_trace", check_tau_x_quasi_trace},
      {"weighted_norm_axioms", check_weighted_norm_axioms},
      {"weighted_rearrangement_identity", check_weighted_rearrangement_identity},
      {"young_inequality", check_young_inequality},
  };
  return r;
}

/// Runs one check; an exception becomes a failed record naming it.
inline CheckRecord run_check(const CheckSpec& spec, const SuiteOptions& o) {
  try {
    return spec.run(o);
  } catch (const std::exception& e) {
    CheckRecord r;
    r.name = spec.name;
    r.anchor = "(aborted)";
    r.pass = false;
    r.worst_slack = -kInf;
    r.detail = {{"error", e.what()}};
    return r;
  }
}

inline std::vector<CheckRecord> run_suite(const SuiteOptions& o) {
  for (const auto& m : o.mutants) {
    bool known = false;
    for (const auto& [name, _] : known_mutants()) known = known || name == m;
    if (!known) throw ConfigError("unknown mutant \"" + m + "\"");
  }
  for (const auto& n : o.only) {
    bool known = false;
    for (const auto& s : registry()) known = known || s.name == n;
    if (!known) throw ConfigError("unknown check \"" + n + "\"");
  }
  std::vector<CheckRecord> out;
  for (const auto& spec : registry())
    if (o.only.empty() || o.only.count(spec.name)) out.push_back(run_check(spec, o));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

}  // namespace ncorlicz::verify
