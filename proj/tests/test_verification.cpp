#include <gtest/gtest.h>

#include "ncorlicz/verification.hpp"

using namespace ncorlicz;

namespace {

verify::CheckRecord one(const std::string& name, std::set<std::string> mutants = {}, std::uint64_t seed = 0) {
  verify::SuiteOptions o;
  o.seed = seed;
  o.only = {name};
  o.mutants = std::move(mutants);
  return verify::run_suite(o).front();
}

}  // namespace

TEST(Verification, RegistryIsSortedAndUnique) {
  const auto& reg = verify::registry();
  ASSERT_GE(reg.size(), 14u);
  for (std::size_t i = 1; i < reg.size(); ++i) EXPECT_LT(reg[i - 1].name, reg[i].name);
}

TEST(Verification, MutantsAreCaught) {
  EXPECT_TRUE(one("moment_chain").pass);
  EXPECT_FALSE(one("moment_chain", {"moment-drop-exponent"}).pass);
  // dropping 2n leaves a true inequality
  EXPECT_TRUE(one("moment_chain", {"moment-drop-factor"}).pass);
  EXPECT_TRUE(one("composition_bound").pass);
  EXPECT_FALSE(one("composition_bound", {"composition-unit-bound"}).pass);
}

TEST(Verification, UnknownNamesRejected) {
  verify::SuiteOptions o;
  o.mutants = {"no-such-mutant"};
  EXPECT_THROW(verify::run_suite(o), ConfigError);
  o.mutants.clear();
  o.only = {"no_such_check"};
  EXPECT_THROW(verify::run_suite(o), ConfigError);
}

TEST(Verification, OverridesApply) {
  verify::SuiteOptions o;
  o.only = {"projection_norm"};
  o.samples = 7;
  o.tol = 1e-6;
  const auto r = verify::run_suite(o).front();
  EXPECT_EQ(r.samples, 7);
  EXPECT_EQ(r.tolerance, 1e-6);
  EXPECT_TRUE(r.pass);
}

TEST(Verification, SeedsChangeSamplesNotVerdicts) {
  const auto a = one("holder_pairing", {}, 1), b = one("holder_pairing", {}, 2);
  EXPECT_TRUE(a.pass);
  EXPECT_TRUE(b.pass);
  EXPECT_NE(a.worst_slack, b.worst_slack);
  EXPECT_EQ(verify::to_json(a).dump(), verify::to_json(one("holder_pairing", {}, 1)).dump());
}

TEST(Verification, RecordSlackRules) {
  verify::CheckRecord r;
  r.observe(0.0);
  EXPECT_TRUE(r.pass);
  r.observe(std::nan(""));
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.worst_slack, -kInf);
}
