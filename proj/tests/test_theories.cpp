#include <gtest/gtest.h>

#include "foasl/models.hpp"
#include "foasl/prover.hpp"
#include "foasl/theories.hpp"

using namespace foasl;

namespace {

Formula F(const char* s) { return desugar(parse_formula(s)); }

bool contains(const TheorySet& t, const Formula& f) {
  for (const auto& g : t.formulas)
    if (alpha_equivalent(g, f)) return true;
  return false;
}

}  // namespace

TEST(TheoryIds, ParseAndPrint) {
  for (const char* s : {"none", "reynolds", "vp", "lee", "thakur:2", "thakur:7"})
    EXPECT_EQ(to_string(parse_theory_id(s)), s);
  EXPECT_EQ(parse_theory_id("thakur:4").unfold_depth, 4);
  for (const char* bad : {"", "Reynolds", "thakur", "thakur:0", "thakur:2x", "thakur:-1"})
    EXPECT_THROW(parse_theory_id(bad), std::invalid_argument) << bad;
}

TEST(Theories, NoneIsEmpty) {
  auto t = theory_formulas(TheoryId::none(), {});
  EXPECT_TRUE(t.empty());
  EXPECT_THROW(theory_formulas(TheoryId::reynolds(), {}), std::invalid_argument);
  EXPECT_THROW(theory_formulas(TheoryId::reynolds(), {1}), std::invalid_argument);
}

TEST(Theories, ReynoldsBinary) {
  auto t = theory_formulas(TheoryId::reynolds(), {2});
  EXPECT_EQ(t.size(), 7u);
  EXPECT_TRUE(contains(t, F("A e1 e2. ((e1 |-> e2) & emp) -> false")));
  EXPECT_TRUE(contains(t, F("A e1 e2. (e1 |-> e2) -> ~(~emp * ~emp)")));
  EXPECT_TRUE(contains(t, F("A e1 e2 e3 e4. ((e1 |-> e2) * (e3 |-> e4)) -> ~(e1 = e3)")));
  EXPECT_TRUE(contains(t, F("A e1 e2 e3 e4. ((e1 |-> e2) & (e3 |-> e4)) -> (e1 = e3 & e2 = e4)")));
  EXPECT_TRUE(contains(t, F("E e1. A e2. ~((e1 |-> e2) -* false)")));
  EXPECT_TRUE(contains(t, F("A e2. (nil |-> e2) -> false")));
  for (int n : {1, 2, 3, 4, 5, 6, 10}) EXPECT_GE(t.find(n, 2), 0) << n;
  EXPECT_LT(t.find(7, 2), 0);
}

TEST(Theories, PerArity) {
  auto t = theory_formulas(TheoryId::reynolds(), {2, 3});
  EXPECT_EQ(t.size(), 14u);
  EXPECT_TRUE(contains(t, F("A e1 e2 e3. ((e1 |-> e2, e3) & emp) -> false")));
  EXPECT_TRUE(contains(t, F("A e2 e3. (nil |-> e2, e3) -> false")));
}

TEST(Theories, Extensions) {
  auto vp = theory_formulas(TheoryId::vp(), {2});
  EXPECT_EQ(vp.size(), 8u);
  EXPECT_TRUE(contains(vp, F("A e1 e2. <>(e1 |-> e2)")));
  auto lee = theory_formulas(TheoryId::lee(), {2});
  EXPECT_EQ(lee.size(), 8u);
  EXPECT_TRUE(contains(lee, F("A e1 e2. <>(e1 |-> e2) -> ~(E e3. ~(e2 = e3) & <>(e1 |-> e3))")));
  auto th = theory_formulas(TheoryId::thakur(2), {2});
  EXPECT_EQ(th.size(), 8u);
  EXPECT_TRUE(contains(th, desugar(unfold_path(2))));
  // Formula 9 is binary only
  EXPECT_EQ(theory_formulas(TheoryId::thakur(2), {3}).size(), 7u);
}

TEST(Theories, PathUnfolding) {
  EXPECT_TRUE(alpha_equivalent(unfold_path(1), parse_formula("A e1 e2. (e1 |-> e2) -> ~(e1 = e2)")));
  EXPECT_TRUE(alpha_equivalent(
      unfold_path(2), parse_formula("A e1 e2. ((e1 |-> e2) | E e3. (e1 |-> e3) * (e3 |-> e2)) -> ~(e1 = e2)")));
  EXPECT_THROW(unfold_path(0), std::invalid_argument);
}

TEST(Theories, AllClosed) {
  for (auto id : {TheoryId::reynolds(), TheoryId::vp(), TheoryId::lee(), TheoryId::thakur(3)})
    for (const auto& f : theory_formulas(id, {2, 3}).formulas) EXPECT_TRUE(is_closed(f)) << to_string(f);
}

TEST(Theories, DeeperPathAxiomImpliesShallower) {
  auto goal = Formula::imp(unfold_path(2), unfold_path(1));
  auto r = prove(goal, TheorySet{});
  ASSERT_TRUE(r.proved);
  EXPECT_TRUE(check_derivation(*r.derivation, TheorySet{}, goal));
}

// Attached under a box, a theory formula has the same truth at every world.
TEST(Theories, WorldIndependentOnSamples) {
  auto t = theory_formulas(TheoryId::lee(), {2, 3});
  t.add(unfold_path(2), {9, 2});
  t.add(theory_formula(7, 2), {7, 2});
  auto sig = signature_of(t);
  SampleBounds b{4, 3};
  for (std::uint64_t i = 0; i < 60; ++i) {
    Model m = sample_model(11, i, b, sig);
    for (const auto& body : t.formulas) {
      Formula f = Formula::box(body);
      bool at0 = evaluate(m, 0, f);
      for (int w = 1; w < m.algebra.size(); ++w) ASSERT_EQ(evaluate(m, w, f), at0) << to_string(f);
    }
    // purely modal, so independent even without the box
    for (int n : {7, 8}) {
      Formula f = theory_formula(n, 2);
      bool at0 = evaluate(m, 0, f);
      for (int w = 1; w < m.algebra.size(); ++w) ASSERT_EQ(evaluate(m, w, f), at0) << n;
    }
  }
}
