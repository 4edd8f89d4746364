#pragma once

// JSON documents for algebras, elements, Orlicz specs, rearrangement specs,
// morphisms and positive maps. Every parse error names the JSON path of the
// offending value, prefixed by the source (file name or "<inline>").

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ncorlicz/algebra.hpp"
#include "ncorlicz/errors.hpp"
#include "ncorlicz/morphisms.hpp"
#include "ncorlicz/orlicz.hpp"
#include "ncorlicz/positive_map.hpp"
#include "ncorlicz/rearrangement.hpp"

namespace ncorlicz::io {

using json = nlohmann::json;

/// A JSON value together with the path it was found at.
struct Node {
  const json& v;
  std::string path;

  Node at(const std::string& key) const {
    if (!v.is_object()) fail("expected an object");
    auto it = v.find(key);
    if (it == v.end()) fail("missing key \"" + key + "\"");
    return {*it, path + "." + key};
  }
  Node at(std::size_t i) const { return {v.at(i), path + "[" + std::to_string(i) + "]"}; }
  bool has(const std::string& key) const { return v.is_object() && v.contains(key); }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(path, what); }

  double number() const {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s == "inf" || s == "Infinity") return kInf;
    }
    fail("expected a number");
  }
  double number_or(const std::string& key, double fallback) const { return has(key) ? at(key).number() : fallback; }
  int integer() const {
    if (!v.is_number_integer()) fail("expected an integer");
    return v.get<int>();
  }
  int integer_or(const std::string& key, int fallback) const { return has(key) ? at(key).integer() : fallback; }
  bool boolean() const {
    if (!v.is_boolean()) fail("expected true or false");
    return v.get<bool>();
  }
  std::string string() const {
    if (!v.is_string()) fail("expected a string");
    return v.get<std::string>();
  }
  const json& array() const {
    if (!v.is_array()) fail("expected an array");
    return v;
  }
};

inline Node root(const json& v, std::string source = "<inline>") { return {v, std::move(source) + ":$"}; }

/// `arg` is either inline JSON (starts with '{' or '[') or a file path.
inline std::pair<json, std::string> load(const std::string& arg) {
  std::string text, source;
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
    text = arg;
    source = "<inline>";
  } else {
    std::ifstream in(arg);
    if (!in) throw ParseError(arg, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
    source = arg;
  }
  try {
    return {json::parse(text), source};
  } catch (const json::parse_error& e) {
    throw ParseError(source + ":byte " + std::to_string(e.byte), "malformed JSON");
  }
}

// numbers -----------------------------------------------------------------

/// Doubles with infinities written as the string "inf".
inline json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline json numbers(const std::vector<double>& xs) {
  json a = json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

// algebras and elements ---------------------------------------------------

inline TracedAlgebra parse_algebra(const Node& n) {
  const Node blocks = n.at("blocks");
  std::vector<BlockSpec> specs;
  for (std::size_t i = 0; i < blocks.array().size(); ++i) {
    const Node b = blocks.at(i);
    const int dim = b.at("dim").integer();
    if (dim < 1) b.at("dim").fail("dimension must be >= 1");
    const double w = b.number_or("weight", 1.0);
    if (!(w > 0.0) || !std::isfinite(w)) b.at("weight").fail("weight must be finite and > 0");
    specs.push_back({dim, w});
  }
  if (specs.empty()) blocks.fail("algebra needs at least one block");
  return TracedAlgebra(std::move(specs));
}

inline json to_json(const TracedAlgebra& alg) {
  json b = json::array();
  for (const auto& s : alg.blocks()) b.push_back({{"dim", s.dim}, {"weight", s.weight}});
  return {{"blocks", b}};
}

inline Complex parse_scalar(const Node& n) {
  if (n.v.is_number()) return {n.v.get<double>(), 0.0};
  if (n.v.is_array() && n.v.size() == 2 && n.v[0].is_number() && n.v[1].is_number())
    return {n.v[0].get<double>(), n.v[1].get<double>()};
  n.fail("expected a number or [re, im]");
}

/// Row-major matrix; `rows` < 0 accepts any square shape.
inline Matrix parse_matrix(const Node& n, int rows = -1, int cols = -1) {
  const auto& a = n.array();
  const int r = static_cast<int>(a.size());
  if (rows >= 0 && r != rows) n.fail("expected " + std::to_string(rows) + " rows, got " + std::to_string(r));
  int c = cols;
  if (c < 0) c = r > 0 && a[0].is_array() ? static_cast<int>(a[0].size()) : 0;
  Matrix m(r, c);
  for (int i = 0; i < r; ++i) {
    const Node row = n.at(static_cast<std::size_t>(i));
    if (static_cast<int>(row.array().size()) != c)
      row.fail("expected " + std::to_string(c) + " columns, got " + std::to_string(row.v.size()));
    for (int j = 0; j < c; ++j) m(i, j) = parse_scalar(row.at(static_cast<std::size_t>(j)));
  }
  return m;
}

inline json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

/// Element JSON {"blocks": [matrix, ...]}; an embedded "algebra" key is used
/// when `alg` is null.
inline AlgebraElement parse_element(const Node& n, const TracedAlgebra* alg) {
  TracedAlgebra own;
  if (!alg) {
    if (!n.has("algebra")) n.fail("no algebra given (pass --algebra or embed an \"algebra\" key)");
    own = parse_algebra(n.at("algebra"));
    alg = &own;
  }
  const Node blocks = n.at("blocks");
  if (blocks.array().size() != alg->num_blocks())
    blocks.fail("expected " + std::to_string(alg->num_blocks()) + " blocks, got " + std::to_string(blocks.v.size()));
  std::vector<Matrix> m;
  for (std::size_t k = 0; k < alg->num_blocks(); ++k) {
    const int d = alg->block(k).dim;
    m.push_back(parse_matrix(blocks.at(k), d, d));
  }
  return {*alg, std::move(m)};
}

inline json to_json(const AlgebraElement& a) {
  json b = json::array();
  for (std::size_t k = 0; k < a.algebra().num_blocks(); ++k) b.push_back(to_json(a.block(k)));
  return {{"algebra", to_json(a.algebra())}, {"blocks", b}};
}

// Orlicz specs ------------------------------------------------------------

inline OrliczFunction parse_orlicz(const Node& n) {
  const std::string kind = n.at("kind").string();
  auto positive = [&](const std::string& key, double fallback, bool allow_zero = false) {
    const double x = n.number_or(key, fallback);
    if (!std::isfinite(x) || x < 0.0 || (!allow_zero && x == 0.0))
      n.at(key).fail(key + (allow_zero ? " must be finite and >= 0" : " must be finite and > 0"));
    return x;
  };
  try {
    if (kind == "power") {
      const double p = n.at("p").number();
      if (!(p >= 1.0) || !std::isfinite(p)) n.at("p").fail("exponent must be >= 1");
      return OrliczFunction::power(p, positive("coef", 1.0));
    }
    if (kind == "power_over_p") {
      const double p = n.at("p").number();
      if (!(p >= 1.0) || !std::isfinite(p)) n.at("p").fail("exponent must be >= 1");
      return OrliczFunction::power_over_p(p);
    }
    if (kind == "cosh_minus_one") return OrliczFunction::cosh_minus_one();
    if (kind == "exp_minus_one") return OrliczFunction::exp_minus_one();
    if (kind == "t_log1p") return OrliczFunction::t_log1p();
    if (kind == "zero_then_linear") return OrliczFunction::zero_then_linear(positive("a", 1.0, true), positive("slope", 1.0));
    if (kind == "linear_until_cap") return OrliczFunction::linear_until_cap(positive("b", 1.0), positive("slope", 1.0, true));
    if (kind == "compose") return compose_orlicz(parse_orlicz(n.at("psi")), parse_orlicz(n.at("phi2")));
  } catch (const InvalidOrliczError& e) {
    n.fail(e.what());
  }
  n.at("kind").fail("unknown Orlicz kind \"" + kind + "\"");
}

inline json to_json(const OrliczFunction& phi) {
  json j{{"kind", to_string(phi.kind())}};
  switch (phi.kind()) {
    case OrliczKind::compose:
      j["psi"] = to_json(phi.children().at(0));
      j["phi2"] = to_json(phi.children().at(1));
      break;
    case OrliczKind::conjugate:
      j["base"] = to_json(phi.children().at(0));
      break;
    case OrliczKind::custom:
      j["name"] = phi.name();
      break;
    default:
      for (const auto& [k, v] : phi.params()) j[k] = number(v);
  }
  return j;
}

// rearrangement specs -----------------------------------------------------

inline RearrangementFunction parse_rearrangement(const Node& n) {
  if (n.has("durations") || n.has("values")) {
    StepForm s;
    const Node d = n.at("durations"), v = n.at("values");
    if (d.array().size() != v.array().size()) n.fail("durations and values differ in length");
    for (std::size_t i = 0; i < d.v.size(); ++i) {
      const double di = d.at(i).number(), vi = v.at(i).number();
      if (!(di >= 0.0) || !std::isfinite(di)) d.at(i).fail("duration must be finite and >= 0");
      if (!(vi >= 0.0) || !std::isfinite(vi)) v.at(i).fail("value must be finite and >= 0");
      s.durations.push_back(di);
      s.values.push_back(vi);
    }
    return RearrangementFunction(canonicalize(s));
  }
  if (!n.has("kind")) n.fail("expected a step form {durations, values} or a catalog {kind}");
  const std::string kind = n.at("kind").string();
  try {
    if (kind == "exp_decay") return RearrangementFunction(catalog::exp_decay());
    if (kind == "log_reciprocal") return RearrangementFunction(catalog::log_reciprocal(n.number_or("support", 1.0)));
    if (kind == "power_decay")
      return RearrangementFunction(catalog::power_decay(n.at("exponent").number(), n.number_or("support", kInf)));
    if (kind == "reciprocal") return RearrangementFunction(catalog::reciprocal(n.number_or("support", 1.0)));
    if (kind == "constant")
      return RearrangementFunction(catalog::constant(n.at("value").number(), n.number_or("support", kInf)));
  } catch (const ConfigError& e) {
    n.fail(e.what());
  }
  throw ConfigError(n.path + ".kind: unknown parametric kind \"" + kind + "\"");
}

inline json to_json(const RearrangementFunction& mu) {
  if (mu.is_step()) return {{"durations", numbers(mu.step().durations)}, {"values", numbers(mu.step().values)}};
  json j{{"kind", mu.parametric().kind}};
  for (const auto& [k, v] : mu.parametric().params) j[k] = number(v);
  return j;
}

// morphisms ---------------------------------------------------------------

inline Flavor parse_flavor(const Node& n) {
  const auto s = n.string();
  if (s == "homo" || s == "homomorphism") return Flavor::homomorphism;
  if (s == "anti" || s == "antihomomorphism") return Flavor::antihomomorphism;
  n.fail("flavor must be \"homo\" or \"anti\"");
}

inline JordanMorphism parse_morphism(const Node& n) {
  const auto source = parse_algebra(n.at("source"));
  const auto target = parse_algebra(n.at("target"));
  const Node blocks = n.at("blocks");
  std::vector<TargetBlock> out;
  for (std::size_t k = 0; k < blocks.array().size(); ++k) {
    const Node b = blocks.at(k);
    if (b.v.is_string()) {
      if (b.string() != "zero") b.fail("a block is an object or the string \"zero\"");
      out.push_back(TargetBlock::zero_block());
      continue;
    }
    TargetBlock tb;
    const Flavor dflt = b.has("flavor") ? parse_flavor(b.at("flavor")) : Flavor::homomorphism;
    const Node as = b.at("assignments");
    for (std::size_t i = 0; i < as.array().size(); ++i) {
      const Node a = as.at(i);
      const int src = a.at("src").integer();
      if (src < 0) a.at("src").fail("source block must be >= 0");
      tb.assignments.push_back({static_cast<std::size_t>(src), a.integer_or("copies", 1),
                                a.has("flavor") ? parse_flavor(a.at("flavor")) : dflt});
    }
    tb.pad = b.integer_or("pad", 0);
    if (b.has("unitary")) {
      const Node u = b.at("unitary");
      if (u.v.is_string()) {
        if (u.string() != "identity") u.fail("unitary is a matrix or \"identity\"");
      } else if (k < target.num_blocks()) {
        const int m = target.block(k).dim;
        tb.unitary = parse_matrix(u, m, m);
      }
    }
    out.push_back(std::move(tb));
  }
  try {
    return JordanMorphism(source, target, std::move(out));
  } catch (const StructuralError& e) {
    throw StructuralError(blocks.path + ": " + e.what());
  }
}

inline json to_json(const JordanMorphism& J) {
  json blocks = json::array();
  for (const auto& b : J.blocks()) {
    if (b.zero) {
      blocks.push_back("zero");
      continue;
    }
    json as = json::array();
    for (const auto& a : b.assignments)
      as.push_back({{"src", a.src}, {"copies", a.copies}, {"flavor", to_string(a.flavor)}});
    json u = b.unitary.size() ? to_json(b.unitary) : json("identity");
    blocks.push_back({{"assignments", as}, {"unitary", u}, {"pad", b.pad}});
  }
  return {{"source", to_json(J.source())}, {"target", to_json(J.target())}, {"blocks", blocks}};
}

// positive maps -----------------------------------------------------------

/// {"source", "target", "kraus": [[op, ...], ...], "cp"}: kraus[k] lists the
/// operators feeding target block k. An operator is a matrix (source block 0)
/// or {"src", "op", "transpose", "coefficient"}. Source and target default to
/// M_n read off the first operator's shape.
inline PositiveMap parse_positive_map(const Node& n) {
  const Node kraus = n.at("kraus");
  if (kraus.array().empty()) kraus.fail("at least one target block of operators expected");
  struct Raw {
    std::size_t src, dst;
    Matrix op;
    bool transpose;
    double coef;
  };
  std::vector<Raw> raw;
  for (std::size_t k = 0; k < kraus.v.size(); ++k) {
    const Node group = kraus.at(k);
    for (std::size_t i = 0; i < group.array().size(); ++i) {
      const Node t = group.at(i);
      if (t.v.is_array()) {
        raw.push_back({0, k, parse_matrix(t), false, 1.0});
        continue;
      }
      const int src = t.integer_or("src", 0);
      if (src < 0) t.at("src").fail("source block must be >= 0");
      raw.push_back({static_cast<std::size_t>(src), k, parse_matrix(t.at("op")),
                     t.has("transpose") && t.at("transpose").boolean(), t.number_or("coefficient", 1.0)});
    }
  }
  if (raw.empty()) kraus.fail("no Kraus operators");
  const auto& op0 = raw.front().op;
  const auto source = n.has("source") ? parse_algebra(n.at("source")) : TracedAlgebra::full(static_cast<int>(op0.cols()));
  const auto target = n.has("target") ? parse_algebra(n.at("target")) : TracedAlgebra::full(static_cast<int>(op0.rows()));
  const bool cp = n.has("cp") ? n.at("cp").boolean() : true;
  std::vector<KrausTerm> terms;
  for (auto& r : raw) terms.push_back({r.src, r.dst, std::move(r.op), r.transpose, r.coef});
  try {
    return PositiveMap(source, target, std::move(terms), cp);
  } catch (const StructuralError& e) {
    throw StructuralError(kraus.path + ": " + e.what());
  }
}

inline json to_json(const PositiveMap& T) {
  json kraus = json::array();
  for (std::size_t k = 0; k < T.target().num_blocks(); ++k) kraus.push_back(json::array());
  for (const auto& t : T.terms())
    kraus[t.dst].push_back(
        {{"src", t.src}, {"op", to_json(t.op)}, {"transpose", t.transpose}, {"coefficient", t.coefficient}});
  return {{"source", to_json(T.source())}, {"target", to_json(T.target())}, {"kraus", kraus}, {"cp", T.cp()}};
}

// digests -----------------------------------------------------------------

/// FNV-1a of the compact dump, as 16 hex digits.
inline std::string digest(const json& j) {
  const auto h = fnv1a(j.dump());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ncorlicz::io
