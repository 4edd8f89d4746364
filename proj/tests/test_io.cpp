#include <gtest/gtest.h>

#include <cmath>

#include "ncorlicz/io.hpp"

using namespace ncorlicz;
using io::json;

namespace {

io::Node node(const json& j) { return io::root(j); }

std::string parse_error_path(const std::function<void()>& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.where();
  }
  return "(no error)";
}

}  // namespace

TEST(Io, AlgebraAndElementRoundTrip) {
  const json a = json::parse(R"({"blocks": [{"dim": 2, "weight": 0.5}, {"dim": 1}]})");
  const auto alg = io::parse_algebra(node(a));
  EXPECT_EQ(alg.num_blocks(), 2u);
  EXPECT_DOUBLE_EQ(alg.block(1).weight, 1.0);

  const json e = json::parse(R"({"blocks": [[[1, [0, 2]], [[0, -2], 3]], [[4]]]})");
  const auto x = io::parse_element(node(e), &alg);
  EXPECT_EQ(x.block(0)(0, 1), Complex(0, 2));
  EXPECT_EQ(x.block(1)(0, 0), Complex(4, 0));

  const auto back = io::parse_element(node(io::to_json(x)), nullptr);
  EXPECT_TRUE(back.algebra() == alg);
  EXPECT_EQ((back - x).max_block_norm(), 0.0);
}

TEST(Io, ErrorsCarryPaths) {
  const json a = json::parse(R"({"blocks": [{"dim": 2}, {"dim": 0}]})");
  EXPECT_EQ(parse_error_path([&] { io::parse_algebra(node(a)); }), "<inline>:$.blocks[1].dim");

  const auto alg = TracedAlgebra::full(2);
  const json e = json::parse(R"({"blocks": [[[1, 2], [3]]]})");
  EXPECT_EQ(parse_error_path([&] { io::parse_element(node(e), &alg); }), "<inline>:$.blocks[0][1]");

  const json o = json::parse(R"({"kind": "compose", "psi": {"kind": "power", "p": 0.5}, "phi2": {"kind": "power", "p": 2}})");
  EXPECT_EQ(parse_error_path([&] { io::parse_orlicz(node(o)); }), "<inline>:$.psi.p");

  // 1-based offset of the stray brace
  EXPECT_EQ(parse_error_path([] { io::load("{\"blocks\": [1, }"); }), "<inline>:byte 16");
  EXPECT_THROW(io::load("/nonexistent/file.json"), ParseError);
}

TEST(Io, OrliczSpecs) {
  auto parse = [](const char* s) { return io::parse_orlicz(node(json::parse(s))); };
  EXPECT_DOUBLE_EQ(parse(R"({"kind": "power", "p": 2})")(3.0), 9.0);
  EXPECT_DOUBLE_EQ(parse(R"({"kind": "power", "p": 3, "coef": 2})")(2.0), 16.0);
  EXPECT_NEAR(parse(R"({"kind": "cosh_minus_one"})")(1.0), std::cosh(1.0) - 1.0, 1e-15);
  const auto z = parse(R"({"kind": "zero_then_linear", "a": 1.0})");
  EXPECT_EQ(z.a(), 1.0);
  EXPECT_DOUBLE_EQ(z(3.0), 2.0);
  const auto cap = parse(R"({"kind": "linear_until_cap", "b": 2.0})");
  EXPECT_EQ(cap.b(), 2.0);
  EXPECT_TRUE(std::isinf(cap(2.5)));
  const auto c = parse(R"({"kind": "compose", "psi": {"kind": "power", "p": 2}, "phi2": {"kind": "power", "p": 2}})");
  EXPECT_DOUBLE_EQ(c(2.0), 16.0);

  // serialization round trip keeps values
  for (const auto& phi : {c, cap, z}) {
    const auto again = io::parse_orlicz(node(io::to_json(phi)));
    for (double u : {0.0, 0.3, 1.5, 1.9}) EXPECT_EQ(again(u), phi(u));
  }
  EXPECT_THROW(parse(R"({"kind": "nope"})"), ParseError);
}

TEST(Io, RearrangementSpecs) {
  auto parse = [](const char* s) { return io::parse_rearrangement(node(json::parse(s))); };
  const auto s = parse(R"({"durations": [1, 2], "values": [0.5, 3]})");
  ASSERT_TRUE(s.is_step());
  EXPECT_EQ(s(0.0), 3.0);  // canonical: decreasing
  EXPECT_EQ(s(2.5), 0.5);
  EXPECT_EQ(parse(R"({"kind": "exp_decay"})")(1.0), std::exp(-1.0));
  EXPECT_EQ(parse(R"({"kind": "log_reciprocal", "support": 2.0})").support(), 2.0);
  EXPECT_DOUBLE_EQ(parse(R"({"kind": "power_decay", "exponent": 0.5})")(4.0), 0.5);
  EXPECT_THROW(parse(R"({"kind": "gamma"})"), ConfigError);
  EXPECT_THROW(parse(R"({"durations": [1], "values": [-1]})"), ParseError);
}

TEST(Io, Morphisms) {
  const json m = json::parse(R"({
    "source": {"blocks": [{"dim": 2}]},
    "target": {"blocks": [{"dim": 2}, {"dim": 3}]},
    "blocks": [{"assignments": [{"src": 0}], "flavor": "anti", "unitary": "identity"},
               {"assignments": [{"src": 0, "copies": 1}], "pad": 1}]})");
  const auto J = io::parse_morphism(node(m));
  Matrix a(2, 2);
  a << 1, 2, 3, 4;
  const auto y = J(AlgebraElement(J.source(), {a}));
  EXPECT_EQ(y.block(0)(0, 1), Complex(3, 0));
  EXPECT_EQ(y.block(1)(0, 1), Complex(2, 0));
  EXPECT_EQ(y.block(1)(2, 2), Complex(0, 0));

  const auto again = io::parse_morphism(node(io::to_json(J)));
  EXPECT_EQ((again(AlgebraElement(J.source(), {a})) - y).max_block_norm(), 0.0);

  json bad = m;
  bad["blocks"][1]["pad"] = 2;
  try {
    io::parse_morphism(node(bad));
    FAIL();
  } catch (const StructuralError& e) {
    EXPECT_NE(std::string(e.what()).find("target block 1"), std::string::npos);
  }
  json zero = m;
  zero["blocks"][0] = "zero";
  EXPECT_EQ(io::parse_morphism(node(zero))(AlgebraElement(J.source(), {a})).block(0).norm(), 0.0);
}

TEST(Io, PositiveMaps) {
  const json p = json::parse(R"({"kraus": [[ [[1, 0], [0, 0]], [[0, 0], [0, 1]] ]], "cp": true})");
  const auto T = io::parse_positive_map(node(p));
  Matrix a(2, 2);
  a << 1, 2, 3, 4;
  const auto y = T(AlgebraElement(T.source(), {a}));
  EXPECT_EQ(y.block(0)(0, 1), Complex(0, 0));
  EXPECT_EQ(y.block(0)(1, 1), Complex(4, 0));

  const json t = json::parse(R"({"kraus": [[ {"op": [[1, 0], [0, 1]], "transpose": true} ]], "cp": false})");
  const auto tr = io::parse_positive_map(node(t));
  EXPECT_EQ(tr(AlgebraElement(tr.source(), {a})).block(0)(0, 1), Complex(3, 0));
  json bad = t;
  bad["cp"] = true;
  EXPECT_THROW(io::parse_positive_map(node(bad)), StructuralError);

  const auto again = io::parse_positive_map(node(io::to_json(tr)));
  EXPECT_EQ(again(AlgebraElement(tr.source(), {a})).block(0)(0, 1), Complex(3, 0));
}

TEST(Io, NumbersAndDigest) {
  EXPECT_EQ(io::number(kInf), json("inf"));
  EXPECT_EQ(io::number(1.5), json(1.5));
  const json a{{"x", 1}}, b{{"x", 2}};
  EXPECT_EQ(io::digest(a), io::digest(json{{"x", 1}}));
  EXPECT_NE(io::digest(a), io::digest(b));
  EXPECT_EQ(io::digest(a).size(), 16u);
}
