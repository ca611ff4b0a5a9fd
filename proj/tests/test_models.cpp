#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "foasl/models.hpp"
#include "foasl/theories.hpp"
#include "mutants.hpp"

using namespace foasl;

using mutants::with_pairs;

namespace {

Formula F(const char* s) { return parse_formula(s); }
Label h(std::uint32_t n) { return Label::var(n); }

bool has(const std::vector<Violation>& vs, Axiom a) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.axiom == a; });
}

// {eps, a} with a o a undefined; p true only at a (for the given domain).
Model two_worlds(int domain = 1) {
  Model m;
  m.algebra = PartialMonoid(2);
  m.domain = domain;
  return m;
}

}  // namespace

// ---- algebra ----

TEST(Algebra, TrivialIsValid) { EXPECT_TRUE(validate_algebra(PartialMonoid(1)).empty()); }

TEST(Algebra, TwoWorldsUndefinedIsValid) { EXPECT_TRUE(validate_algebra(PartialMonoid(2)).empty()); }

TEST(Algebra, SelfCompositionBreaksDisjointness) {
  auto vs = validate_algebra(with_pairs(2, {{1, 1, 1}}));
  EXPECT_TRUE(has(vs, Axiom::Disjointness));
}

TEST(Algebra, HeapLikeIsValid) {
  // eps, a, b, a o b = c
  EXPECT_TRUE(validate_algebra(with_pairs(4, {{1, 2, 3}, {2, 1, 3}})).empty());
  EXPECT_TRUE(validate_algebra(subset_algebra({0, 1, 2, 4, 3, 5, 6, 7})).empty());
}

class Mutants : public ::testing::TestWithParam<int> {};

TEST_P(Mutants, Caught) {
  auto m = mutants::mutants()[GetParam()];
  auto vs = validate_algebra(m.m);
  EXPECT_TRUE(has(vs, m.axiom)) << to_string(m.axiom);
}

INSTANTIATE_TEST_SUITE_P(EachAxiom, Mutants, ::testing::Range(0, 8));

TEST(Algebra, CatalogIsValidAndComplete) {
  EXPECT_EQ(algebras_of_size(1).size(), 1u);
  EXPECT_EQ(algebras_of_size(2).size(), 1u);
  EXPECT_EQ(algebras_of_size(3).size(), 1u);
  // eps, a, b, c: nothing composes, or one pair composes to the third world
  EXPECT_EQ(algebras_of_size(4).size(), 4u);
  for (int n = 1; n <= 5; ++n)
    for (const auto& m : algebras_of_size(n)) {
      EXPECT_EQ(m.size(), n);
      EXPECT_TRUE(validate_algebra(m).empty());
    }
  EXPECT_THROW(algebras_of_size(6), std::invalid_argument);
}

TEST(Algebra, UnitComposesWithEverything) {
  for (int n = 1; n <= 5; ++n)
    for (const auto& m : algebras_of_size(n))
      for (int x = 0; x < n; ++x) {
        EXPECT_EQ(m.compose(0, x), x);
        EXPECT_EQ(m.compose(x, 0), x);
      }
}

// ---- evaluation ----

TEST(Evaluate, Emp) {
  Model m = two_worlds();
  EXPECT_TRUE(evaluate(m, 0, F("emp")));
  EXPECT_FALSE(evaluate(m, 1, F("emp")));
}

TEST(Evaluate, EmpStarEmpAtNonUnit) {
  Model m = two_worlds();
  // oracle: enumerate splits of world 1 directly
  bool any = false;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      if (m.algebra.holds(x, y, 1) && x == 0 && y == 0) any = true;
  EXPECT_EQ(evaluate(m, 1, F("emp * emp")), any);
  EXPECT_FALSE(evaluate(m, 1, F("emp * emp")));
}

TEST(Evaluate, PointsToByTable) {
  Model m = two_worlds();
  m.constants["z"] = 0;
  m.pointsto[2] = {1};  // f2(0, 0) = a
  EXPECT_TRUE(evaluate(m, 1, F("z |-> z")));
  EXPECT_FALSE(evaluate(m, 0, F("z |-> z")));
}

TEST(Evaluate, WandAndQuantifiers) {
  Model m = two_worlds(2);
  m.constants["c"] = 0;
  m.pointsto[2] = {1, 0, 0, 0};
  // the only A-world composable with eps is a; at a, emp fails
  EXPECT_FALSE(evaluate(m, 0, F("(c |-> c) -* emp")));
  EXPECT_TRUE(evaluate(m, 0, F("(c |-> c) -* (c |-> c)")));
  // at a nothing but eps composes, so the wand over non-unit worlds holds
  EXPECT_TRUE(evaluate(m, 1, F("~emp -* false")));
  EXPECT_TRUE(evaluate(m, 0, F("E x y. x |-> y")));
  EXPECT_FALSE(evaluate(m, 1, F("A x. E y. x |-> y")));
  EXPECT_TRUE(evaluate(m, 0, F("A x. x = x")));
  EXPECT_FALSE(evaluate(m, 0, F("A x y. x = y")));
}

TEST(Evaluate, PredicatesAreWorldIndexed) {
  Model m = two_worlds();
  m.constants["c"] = 0;
  m.predicates[{"p", 1}] = {0, 1};
  EXPECT_FALSE(evaluate(m, 0, F("p(c)")));
  EXPECT_TRUE(evaluate(m, 1, F("p(c)")));
  EXPECT_FALSE(evaluate(m, 1, F("p(c) * p(c)")));
}

TEST(Evaluate, UnknownSymbols) {
  Model m = two_worlds();
  EXPECT_THROW(evaluate(m, 0, F("p(c)")), UnknownSymbol);
  EXPECT_THROW(evaluate(m, 0, F("X = X")), UnknownSymbol);
  ExtendedModel em{m, {}, {}};
  em.model.constants["c"] = 0;
  EXPECT_THROW(evaluate(em, 0, F("c |-> c")), UnknownSymbol);
  em.valuation["X"] = 0;
  EXPECT_TRUE(evaluate(em, 0, F("X = c")));
}

TEST(Evaluate, ModalFormulasAreWorldIndependent) {
  Signature sig = signature_of(F("p(a) * (a |-> b) -> q"));
  std::vector<Formula> fs = {F("<>(a |-> b)"), F("[](p(a) -> ~emp)"), F("<>(q * ~emp)"),
                             F("[]((a |-> b) -* q)")};
  for (std::uint64_t i = 0; i < 150; ++i) {
    Model m = sample_model(3, i, {4, 3}, sig);
    for (const auto& f : fs) {
      bool at0 = evaluate(m, 0, f);
      for (int w = 1; w < m.algebra.size(); ++w) EXPECT_EQ(evaluate(m, w, f), at0) << to_string(f);
    }
  }
}

// ---- falsifiability ----

TEST(Falsifiable, Examples) {
  ExtendedModel em{two_worlds(), {{h(1), 1}}, {}};
  EXPECT_TRUE(falsifiable(em, Sequent({}, {}, {{h(1), F("emp")}})));
  // same formula on both sides
  Sequent both({}, {{h(1), F("emp")}}, {{h(1), F("emp")}});
  for (int w = 0; w < 2; ++w) {
    em.rho[h(1)] = w;
    EXPECT_FALSE(falsifiable(em, both));
  }
  // relational atom fails: a o a is undefined
  ExtendedModel bad{two_worlds(), {{h(1), 1}, {h(2), 1}, {h(3), 1}}, {}};
  EXPECT_FALSE(falsifiable(bad, Sequent({{h(1), h(2), h(3)}}, {}, {})));
  EXPECT_THROW(falsifiable(ExtendedModel{two_worlds(), {}, {}}, Sequent({}, {}, {{h(1), F("emp")}})),
               std::out_of_range);
}

TEST(Falsifiable, SearchExtendsRho) {
  ExtendedModel base{two_worlds(), {}, {}};
  auto em = find_falsifying(base, Sequent({}, {}, {{h(1), F("emp")}}));
  ASSERT_TRUE(em.has_value());
  EXPECT_EQ(em->rho.at(h(1)), 1);
  EXPECT_FALSE(find_falsifying(base, Sequent({}, {{h(1), F("emp")}}, {{h(1), F("emp")}})).has_value());
}

// ---- sampling ----

TEST(Sampling, TrivialBoundGivesTrivialAlgebra) {
  Signature sig = signature_of(F("p(c) -> (c |-> c)"));
  for (std::uint64_t i = 0; i < 30; ++i) {
    Model m = sample_model(5, i, {1, 3}, sig);
    EXPECT_EQ(m.algebra.size(), 1);
  }
}

TEST(Sampling, Deterministic) {
  Signature sig = signature_of(F("p(c) * (c |-> d, e) -> q"));
  auto a = sample_models(42, 60, {4, 3}, sig);
  auto b = sample_models(42, 60, {4, 3}, sig);
  EXPECT_EQ(a, b);
  auto c = sample_models(43, 60, {4, 3}, sig);
  EXPECT_NE(a, c);
  EXPECT_EQ(sample_model(42, 17, {4, 3}, sig), a[17]);
}

TEST(Sampling, AllValidAndWithinBounds) {
  Signature sig = signature_of(F("p(c) * (c |-> d) -> q"));
  std::set<int> sizes;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Model m = sample_model(9, i, {3, 3}, sig);
    EXPECT_TRUE(validate_algebra(m.algebra).empty());
    EXPECT_LE(m.algebra.size(), 3);
    EXPECT_LE(m.domain, 3);
    EXPECT_EQ(m.pointsto.at(2).size(), static_cast<std::size_t>(m.domain * m.domain));
    sizes.insert(m.algebra.size());
  }
  EXPECT_EQ(sizes.size(), 3u);
}

TEST(Sampling, LargeAlgebrasFromSubsetFamilies) {
  Signature sig;
  for (std::uint64_t i = 0; i < 40; ++i) {
    Model m = sample_model(1, i, {8, 2}, sig);
    EXPECT_TRUE(validate_algebra(m.algebra).empty());
  }
}

// ---- refutation ----

TEST(Refute, NonTheoremsHaveCounterexamples) {
  for (const char* s : {"p(c) -> p(c) * p(c)", "emp", "(nil |-> e) -> false"}) {
    auto cex = refute(F(s), TheorySet{}, 0, 200);
    ASSERT_TRUE(cex.has_value()) << s;
    EXPECT_FALSE(evaluate(cex->model, cex->world, universal_closure(F(s))));
  }
}

TEST(Refute, PCounterexampleInTwoWorldAlgebra) {
  auto cex = refute(F("p(c) -> p(c) * p(c)"), TheorySet{}, 0, 200, {2, 3});
  ASSERT_TRUE(cex.has_value());
  EXPECT_EQ(cex->model.algebra.size(), 2);
  EXPECT_EQ(cex->world, 1);
}

TEST(Refute, TautologyHasNone) {
  EXPECT_FALSE(refute(F("p -> p"), TheorySet{}, 0, 200).has_value());
  EXPECT_FALSE(refute(F("(a |-> b) -> (a |-> b)"), TheorySet{}, 0, 200).has_value());
}

TEST(Refute, SerialAndParallelAgree) {
  TheorySet partial;
  for (int n : {1, 2, 3, 4, 6}) partial.add(theory_formula(n, 2), {n, 2});
  partial.arities = {2};
  for (const char* s : {"p(c) -> p(c) * p(c)", "(e |-> f) -> false", "emp", "p -> p",
                        "(a |-> b) * (c |-> d) -> ~(a = c)"}) {
    for (const TheorySet* t : std::vector<const TheorySet*>{&partial, nullptr}) {
      TheorySet th = t ? *t : TheorySet{};
      RefuteStats s1, s2;
      auto a = refute(F(s), th, 11, 300, {4, 3}, &s1);
      auto b = refute_serial(F(s), th, 11, 300, {4, 3}, &s2);
      ASSERT_EQ(a.has_value(), b.has_value()) << s;
      EXPECT_EQ(s1.theory_models, s2.theory_models);
      if (a) {
        EXPECT_EQ(a->index, b->index);
        EXPECT_EQ(a->world, b->world);
        EXPECT_EQ(a->model, b->model);
      }
    }
  }
}

// ---- model files ----

TEST(ModelFile, RoundTrip) {
  Signature sig = signature_of(F("p(c) * q(c, d) * (c |-> d, e) * r -> (c |-> d)"));
  for (std::uint64_t i = 0; i < 50; ++i) {
    Model m = sample_model(2, i, {4, 3}, sig);
    std::stringstream ss;
    write_model(ss, m, static_cast<int>(i % m.algebra.size()));
    std::optional<int> w;
    Model back = read_model(ss, &w);
    EXPECT_EQ(back, m);
    EXPECT_EQ(w, static_cast<int>(i % m.algebra.size()));
  }
}

TEST(ModelFile, RejectsMalformed) {
  std::istringstream missing("domain 2\n");
  EXPECT_THROW(read_model(missing), std::runtime_error);
  std::istringstream bad_world("worlds 2\ncompose\n0 0 5\nend\n");
  EXPECT_THROW(read_model(bad_world), std::exception);
  std::istringstream partial_pto("worlds 1\ncompose\n0 0 0\nend\ndomain 2\npto 2\n0 0 0\nend\n");
  EXPECT_THROW(read_model(partial_pto), std::runtime_error);
}
