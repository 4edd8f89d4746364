// ncorlicz: batch front end for the noncommutative Orlicz library.
//
// Exit codes: 0 success (including "outside-space" results and hypothesis
// violations, which are answers), 1 an invariant failed, 2 bad input or
// usage, 3 a numerical routine failed to reach its tolerance.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncorlicz/ncorlicz.hpp"

using namespace ncorlicz;
using io::json;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Config {
  std::string command;
  std::string algebra, mu, orlicz, psi, phi2, weight, morphism, out;
  std::string format = "json";
  std::vector<std::string> elements;
  std::vector<std::string> mutants, checks;
  std::uint64_t seed = 0;
  std::string seed_source = "default";
  int samples = 0;
  std::optional<double> tol;
};

struct Outcome {
  json result = json::object();
  json checks = json::array();
  json inputs = json::object();
  std::string status = "ok";  // ok | outside-space | hypothesis-violation | invariant-failure
  double comparison_tol = 0.0;
  std::string csv;  // command-specific CSV body; empty means the generic flattening
};

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json tolerances_json(double comparison) {
  const auto& t = default_tolerances();
  return {{"bisection", t.bisection},
          {"threshold", t.threshold},
          {"conjugate", t.conjugate},
          {"quad_abs", t.quad_abs},
          {"quad_rel", t.quad_rel},
          {"divergence_cap", t.divergence_cap},
          {"modular_slack", t.modular_slack},
          {"projection", t.projection},
          {"eigen_clamp", t.eigen_clamp},
          {"submajorization", t.submajorization},
          {"choi_rank", t.choi_rank},
          {"comparison", comparison}};
}

// loading -------------------------------------------------------------------

json load_spec(const std::string& arg, const char* flag, std::string* source = nullptr) {
  if (arg.empty()) throw ConfigError(std::string("missing required ") + flag);
  auto [j, src] = io::load(arg);
  if (source) *source = src;
  return j;
}

std::optional<TracedAlgebra> load_algebra(const Config& c) {
  if (c.algebra.empty()) return std::nullopt;
  std::string src;
  const auto j = load_spec(c.algebra, "--algebra", &src);
  return io::parse_algebra(io::root(j, src));
}

AlgebraElement load_element(const std::string& arg, const Config& c) {
  std::string src;
  const auto j = load_spec(arg, "--element", &src);
  const auto alg = load_algebra(c);
  return io::parse_element(io::root(j, src), alg ? &*alg : nullptr);
}

OrliczFunction load_orlicz(const std::string& arg, const char* flag) {
  std::string src;
  const auto j = load_spec(arg, flag, &src);
  return io::parse_orlicz(io::root(j, src));
}

/// A rearrangement spec, or an element whose singular values are used.
RearrangementFunction load_rearrangement(const std::string& arg, const char* flag, const Config& c) {
  std::string src;
  const auto j = load_spec(arg, flag, &src);
  if (j.is_object() && j.contains("blocks") && !j.contains("durations")) {
    const auto alg = load_algebra(c);
    return singular_values(io::parse_element(io::root(j, src), alg ? &*alg : nullptr));
  }
  return io::parse_rearrangement(io::root(j, src));
}

json check_record(const std::string& name, const std::string& digest, double lhs, double rhs, double slack) {
  return {{"check", name},
          {"inputs-digest", digest},
          {"lhs", io::number(lhs)},
          {"rhs", io::number(rhs)},
          {"slack", io::number(slack)},
          {"pass", !(slack < 0.0) && !std::isnan(slack)}};
}

double rel(double x, double y) { return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300}); }
double margin(double lhs, double rhs) { return is_inf(rhs) ? kInf : (rhs - lhs) / std::max(1.0, std::abs(rhs)); }

void settle(Outcome& o) {
  for (const auto& c : o.checks)
    if (c.contains("pass") && !c["pass"].get<bool>()) o.status = "invariant-failure";
}

// commands ------------------------------------------------------------------

Outcome cmd_norm(const Config& c) {
  Outcome o;
  o.comparison_tol = c.tol.value_or(1e-7);
  std::optional<AlgebraElement> a;
  RearrangementFunction mu;
  if (!c.elements.empty()) {
    a = load_element(c.elements.front(), c);
    mu = singular_values(*a);
    o.inputs["element"] = io::to_json(*a);
  } else if (!c.mu.empty()) {
    mu = load_rearrangement(c.mu, "--mu", c);
    o.inputs["mu"] = io::to_json(mu);
  } else {
    throw ConfigError("norm needs --element or --mu");
  }
  const auto phi = load_orlicz(c.orlicz, "--orlicz");
  o.inputs["orlicz"] = io::to_json(phi);
  std::optional<WeightedContext> ctx;
  if (!c.weight.empty()) {
    ctx.emplace(load_rearrangement(c.weight, "--weight", c));
    o.inputs["weight"] = io::to_json(ctx->weight());
  }
  const auto digest = io::digest(o.inputs);
  const WeightedContext* w = ctx ? &*ctx : nullptr;
  o.result["mu"] = io::to_json(mu);
  o.result["weighted"] = ctx.has_value();

  double lux = 0.0;
  try {
    lux = luxemburg_norm(mu, phi, w);
  } catch (const UnboundedNormError& e) {
    o.status = "outside-space";
    o.result["result"] = "outside-space";
    o.result["reason"] = e.what();
    o.result["luxemburg"] = "inf";
    o.result["amemiya"] = "inf";
    o.result["kunze"] = nullptr;
    return o;
  }
  const auto am = amemiya_report(mu, phi, w);
  o.result["result"] = "in-space";
  o.result["luxemburg"] = io::number(lux);
  o.result["amemiya"] = io::number(am.value);
  o.result["amemiya_k"] = io::number(am.k);
  o.result["amemiya_limit"] = am.limit;
  json relations = json::object();
  const double t = o.comparison_tol;
  if (a && !ctx) {
    const double k = kunze_norm(*a, phi, default_tolerances().bisection, false);
    o.result["kunze"] = io::number(k);
    o.checks.push_back(check_record("kunze_equals_luxemburg", digest, k, lux, t - rel(k, lux)));
    relations["kunze_equals_luxemburg"] = o.checks.back()["pass"];
  } else {
    o.result["kunze"] = nullptr;
  }
  o.checks.push_back(check_record("luxemburg_le_amemiya", digest, lux, am.value, margin(lux, am.value) + t));
  relations["luxemburg_le_amemiya"] = o.checks.back()["pass"];
  o.checks.push_back(check_record("amemiya_le_twice_luxemburg", digest, am.value, 2.0 * lux, margin(am.value, 2.0 * lux) + t));
  relations["amemiya_le_twice_luxemburg"] = o.checks.back()["pass"];
  o.result["relations"] = relations;
  settle(o);
  return o;
}

Outcome cmd_singular(const Config& c) {
  Outcome o;
  o.comparison_tol = c.tol.value_or(1e-10);
  if (c.elements.empty()) throw ConfigError("singular needs --element");
  const auto a = load_element(c.elements.front(), c);
  o.inputs["element"] = io::to_json(a);
  const auto mu = singular_values(a);
  o.result["mu"] = io::to_json(mu);
  o.result["sup"] = mu(0.0);
  o.result["support"] = mu.support();
  o.result["trace_of_abs"] = head_integral(mu, kInf);
  std::ostringstream csv;
  csv << "t,mu\n";
  csv.precision(17);
  double t0 = 0.0;
  for (std::size_t i = 0; i < mu.step().values.size(); ++i) {
    csv << t0 << "," << mu.step().values[i] << "\n";
    t0 += mu.step().durations[i];
  }
  csv << t0 << ",0\n";
  o.csv = csv.str();
  if (!c.orlicz.empty()) {
    const auto phi = load_orlicz(c.orlicz, "--orlicz");
    o.inputs["orlicz"] = io::to_json(phi);
    const auto digest = io::digest(o.inputs);
    StepForm lhs = mu.step();
    for (double& v : lhs.values) v = phi(v);
    o.result["phi_of_mu"] = io::to_json(RearrangementFunction(lhs));
    try {
      const auto rhs = singular_values(apply_function(phi, a));
      const double gap = verify::detail::step_gap(RearrangementFunction(lhs), rhs);
      o.checks.push_back(check_record("rearrangement_exchange", digest, gap, 0.0, o.comparison_tol - gap));
    } catch (const NotMeasurableError& e) {
      o.status = "hypothesis-violation";
      o.result["hypothesis"] = e.what();
    }
  }
  settle(o);
  return o;
}

Outcome cmd_dual_check(const Config& c) {
  Outcome o;
  o.comparison_tol = c.tol.value_or(1e-8);
  if (c.elements.empty()) throw ConfigError("dual-check needs --element (f, optionally a second one for g)");
  const auto f = load_element(c.elements[0], c);
  const auto phi = load_orlicz(c.orlicz, "--orlicz");
  o.inputs["f"] = io::to_json(f);
  o.inputs["orlicz"] = io::to_json(phi);
  auto rng = make_rng(c.seed, "dual-check");
  std::vector<AlgebraElement> gs;
  if (c.elements.size() > 1) {
    gs.push_back(load_element(c.elements[1], c));
    o.inputs["g"] = io::to_json(gs.back());
  } else {
    for (int i = 0, n = c.samples > 0 ? c.samples : 20; i < n; ++i) gs.push_back(random_element(rng, f.algebra()));
    o.inputs["g_samples"] = gs.size();
  }
  o.inputs["seed"] = c.seed;
  const auto digest = io::digest(o.inputs);
  std::vector<AlgebraElement> probes{f.adjoint()};
  for (int i = 0; i < 8; ++i) probes.push_back(random_element(rng, f.algebra()));
  json pairs = json::array();
  double dual = 0.0, sampled = 0.0, worst = kInf;
  for (const auto& g : gs) {
    const auto h = holder_check(f, g, phi, probes, o.comparison_tol);
    dual = h.dual_norm;
    sampled = std::max(sampled, h.sampled_sup);
    const double s = margin(h.pairing, h.bound) + o.comparison_tol;
    worst = std::min(worst, s);
    pairs.push_back({{"pairing", h.pairing}, {"norm_g", h.norm_g}, {"bound", h.bound}, {"slack", h.slack}});
  }
  const double max_pairing = [&] {
    double m = 0.0;
    for (const auto& p : pairs) m = std::max(m, p["pairing"].get<double>() / std::max(1e-300, p["bound"].get<double>()));
    return m;
  }();
  o.checks.push_back(check_record("holder_pairing", digest, max_pairing, 1.0, worst));
  o.checks.push_back(check_record("sampled_sup_le_dual_norm", digest, sampled, dual, margin(sampled, dual) + o.comparison_tol));
  o.result["dual_norm"] = io::number(dual);
  o.result["sampled_sup"] = io::number(sampled);
  o.result["pairs"] = pairs;
  settle(o);
  o.result["pass"] = o.status != "invariant-failure";
  return o;
}

Outcome cmd_ps_check(const Config& c) {
  Outcome o;
  if (c.weight.empty()) throw ConfigError("ps-check needs --weight");
  const WeightedContext ctx(load_rearrangement(c.weight, "--weight", c));
  RearrangementFunction mu;
  if (!c.mu.empty())
    mu = load_rearrangement(c.mu, "--mu", c);
  else if (!c.elements.empty())
    mu = singular_values(load_element(c.elements.front(), c));
  else
    throw ConfigError("ps-check needs --mu or --element for mu_g");
  o.inputs["weight"] = io::to_json(ctx.weight());
  o.inputs["mu"] = io::to_json(mu);
  const auto digest = io::digest(o.inputs);
  const auto r = pistone_sempi_equivalence(mu, ctx);
  o.result["member_via_laplace"] = r.via_laplace;
  o.result["member_via_norm"] = r.via_norm;
  o.result["agree"] = r.agree();
  o.result["laplace_witness"] = io::number(r.laplace_witness);
  o.result["norm_witness"] = io::number(r.norm_witness);
  o.result["weight_mass"] = io::number(ctx.mass());
  o.checks.push_back(check_record("membership_agrees", digest, r.via_laplace, r.via_norm, r.agree() ? 0.0 : -1.0));
  settle(o);
  return o;
}

Outcome cmd_compose(const Config& c) {
  Outcome o;
  o.comparison_tol = c.tol.value_or(1e-7);
  std::string src;
  const auto mj = load_spec(c.morphism, "--morphism", &src);
  const auto J = io::parse_morphism(io::root(mj, src));
  const auto psi = load_orlicz(c.psi, "--psi");
  const auto phi2 = load_orlicz(c.phi2, "--phi2");
  o.inputs = {{"morphism", io::to_json(J)}, {"psi", io::to_json(psi)}, {"phi2", io::to_json(phi2)}, {"seed", c.seed}};
  const auto digest = io::digest(o.inputs);
  const auto phi1 = compose_orlicz(psi, phi2);
  auto rng = make_rng(c.seed, "compose");
  const int samples = c.samples > 0 ? c.samples : 50;
  const auto rep = composition_bound_check(J, psi, phi2, rng, samples, o.comparison_tol);
  o.result["f_J"] = io::numbers(rep.fj);
  o.result["bound"] = io::number(rep.bound);
  o.result["max_ratio"] = io::number(rep.max_ratio);
  o.result["max_non_self_adjoint_ratio"] = io::number(rep.max_nonsa_ratio);
  o.result["samples"] = rep.samples;
  o.result["phi1"] = io::to_json(phi1);
  o.checks.push_back(check_record("composition_bound", digest, rep.max_ratio, rep.bound,
                                  margin(rep.max_ratio, rep.bound) + o.comparison_tol));

  // modular chain on a few self-adjoint elements inside the unit ball of phi1
  json chain = json::array();
  int violations = 0;
  double worst_gap = 0.0;
  for (int i = 0, n = std::min(samples, 5); i < n; ++i) {
    auto a = random_self_adjoint(rng, J.source());
    const double n1 = luxemburg_norm(singular_values(a), phi1);
    if (n1 == 0.0) continue;
    a = (uniform(rng, 0.3, 0.95) / n1) * a;
    const auto m = modular_chain_check(J, psi, phi2, a, 1e-9);
    if (!m.hypothesis_ok) {
      ++violations;
      chain.push_back({{"hypothesis", m.hypothesis_note}});
      continue;
    }
    worst_gap = std::max(worst_gap, m.max_gap);
    chain.push_back({{"e1", m.e1}, {"e2", m.e2}, {"e3", m.e3}, {"e4", m.e4}, {"max_gap", m.max_gap},
                     {"bound_holds", m.bound}});
    o.checks.push_back(check_record("modular_chain_bound", digest, m.e1, m.dual_norm * m.inner_norm,
                                    m.bound ? margin(m.e1, m.dual_norm * m.inner_norm) + 1e-8 : -1.0));
  }
  o.checks.push_back(check_record("modular_chain_equalities", digest, worst_gap, 0.0, 1e-9 - worst_gap));
  o.result["modular_chain"] = chain;
  if (violations > 0) o.status = "hypothesis-violation";
  settle(o);
  o.result["pass"] = o.status != "invariant-failure";
  return o;
}

Outcome cmd_verify(const Config& c) {
  Outcome o;
  verify::SuiteOptions s;
  s.seed = c.seed;
  s.samples = c.samples;
  s.tol = c.tol;
  s.mutants.insert(c.mutants.begin(), c.mutants.end());
  s.only.insert(c.checks.begin(), c.checks.end());
  o.inputs = {{"seed", c.seed}, {"samples", c.samples}, {"mutants", c.mutants}, {"checks", c.checks}};
  const auto records = verify::run_suite(s);
  int passed = 0;
  std::ostringstream csv;
  csv << "name,anchor,samples,tolerance,worst_slack,pass\n";
  csv.precision(17);
  for (const auto& r : records) {
    o.checks.push_back(verify::to_json(r));
    passed += r.pass;
    csv << r.name << ",\"" << r.anchor << "\"," << r.samples << "," << r.tolerance << "," << r.worst_slack << ","
        << (r.pass ? "true" : "false") << "\n";
  }
  o.csv = csv.str();
  o.comparison_tol = c.tol.value_or(0.0);
  o.result = {{"passed", passed},
              {"failed", static_cast<int>(records.size()) - passed},
              {"mutants", c.mutants},
              {"tolerance_override", c.tol ? io::number(*c.tol) : json(nullptr)}};
  if (passed != static_cast<int>(records.size())) o.status = "invariant-failure";
  return o;
}

// output --------------------------------------------------------------------

void flatten(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << "," << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

std::string render(const Config& c, const Outcome& o) {
  if (c.format == "csv") {
    if (!o.csv.empty()) return o.csv;
    std::ostringstream out;
    out << "key,value\n";
    flatten(o.result, "result", out);
    flatten(o.checks, "checks", out);
    out << "status," << o.status << "\n";
    return out.str();
  }
  json report{{"schema", "ncorlicz.report/1"},
              {"tool", {{"name", "ncorlicz"}, {"version", kVersion}}},
              {"command", c.command},
              {"timestamp", utc_now()},
              {"seed", c.seed},
              {"seed_source", c.seed_source},
              {"tolerances", tolerances_json(o.comparison_tol)},
              {"inputs_digest", io::digest(o.inputs)},
              {"status", o.status},
              {"checks", o.checks},
              {"result", o.result}};
  return report.dump(2) + "\n";
}

void add_common(CLI::App* sub, Config& c, std::optional<std::uint64_t>& seed, std::optional<double>& tol) {
  sub->add_option("--seed", seed, "RNG seed (falls back to $NCORLICZ_SEED, then 0)");
  sub->add_option("--samples", c.samples, "sample count (0 keeps the defaults)")->check(CLI::NonNegativeNumber);
  sub->add_option("--tol", tol, "comparison tolerance override")->check(CLI::PositiveNumber);
  sub->add_option("--out", c.out, "write the report here instead of stdout");
  sub->add_option("--format", c.format, "report format")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noncommutative Orlicz spaces over finite multimatrix algebras"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Config c;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;

  auto* norm = app.add_subcommand("norm", "Luxemburg, Kunze and Amemiya norms of an element or rearrangement");
  auto* singular = app.add_subcommand("singular", "generalized singular values mu_t(a)");
  auto* dual = app.add_subcommand("dual-check", "Koethe-dual pairing |tau(fg)| <= ||f||^0 ||g||");
  auto* ps = app.add_subcommand("ps-check", "quantum Pistone-Sempi membership by Laplace transform and by norm");
  auto* compose = app.add_subcommand("compose", "composition operator bound for a Jordan morphism");
  auto* ver = app.add_subcommand("verify", "run the named-check verification suite");
  for (auto* s : {norm, singular, dual, ps, compose, ver}) add_common(s, c, seed, tol);
  for (auto* s : {norm, singular, dual, ps}) {
    s->add_option("--algebra", c.algebra, "algebra JSON (file or inline)");
    s->add_option("--element", c.elements, "element JSON (file or inline)");
  }
  for (auto* s : {norm, singular, dual}) s->add_option("--orlicz", c.orlicz, "Orlicz spec JSON");
  for (auto* s : {norm, ps}) {
    s->add_option("--weight", c.weight, "weight mu(x): rearrangement spec or element JSON");
    s->add_option("--mu", c.mu, "rearrangement spec JSON (step form or catalog kind)");
  }
  compose->add_option("--morphism", c.morphism, "morphism JSON")->required();
  compose->add_option("--psi", c.psi, "Orlicz spec psi")->required();
  compose->add_option("--phi2", c.phi2, "Orlicz spec phi2")->required();
  ver->add_option("--mutant", c.mutants, "inject a known mutant (repeatable)");
  ver->add_option("--check", c.checks, "run only these checks (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  for (auto* s : app.get_subcommands()) c.command = s->get_name();

  try {
    if (seed) {
      c.seed = *seed;
      c.seed_source = "flag";
    } else if (const char* env = std::getenv("NCORLICZ_SEED"); env && *env) {
      std::size_t used = 0;
      c.seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      c.seed_source = "env";
    }
  } catch (const std::exception&) {
    std::cerr << "error: NCORLICZ_SEED is not an unsigned integer\n";
    return 2;
  }
  c.tol = tol;

  Outcome o;
  try {
    if (c.command == "norm") o = cmd_norm(c);
    else if (c.command == "singular") o = cmd_singular(c);
    else if (c.command == "dual-check") o = cmd_dual_check(c);
    else if (c.command == "ps-check") o = cmd_ps_check(c);
    else if (c.command == "compose") o = cmd_compose(c);
    else o = cmd_verify(c);
  } catch (const ParseError& e) {
    std::cerr << "parse error at " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const auto text = render(c, o);
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(c.out);
    if (!f) {
      std::cerr << "error: cannot write " << c.out << "\n";
      return 2;
    }
    f << text;
  }
  return o.status == "invariant-failure" ? 1 : 0;
}
