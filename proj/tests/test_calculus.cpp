#include <gtest/gtest.h>

#include "foasl/calculus.hpp"
#include "foasl/theories.hpp"

using namespace foasl;

namespace {

Label h(std::uint32_t n) { return Label::var(n); }
const Label eps = Label::eps();
Formula F(const char* s) { return desugar(parse_formula(s)); }
LabelledFormula LF(Label l, const char* s) { return {l, F(s)}; }
Term C(const char* n) { return Term::constant(n); }

std::vector<Sequent> run(const Sequent& s, RuleInstance inst) { return apply(s, inst); }

RuleInstance with_fresh(RuleId r, std::vector<LabelledFormula> fs, std::vector<RelAtom> as,
                        std::vector<Label> fresh) {
  RuleInstance i{.rule = r, .formulas = std::move(fs), .atoms = std::move(as)};
  i.fresh_labels = std::move(fresh);
  return i;
}

}  // namespace

TEST(RuleNames, RoundTrip) {
  for (int r = 0; r <= static_cast<int>(RuleId::ForallR); ++r) {
    auto id = static_cast<RuleId>(r);
    EXPECT_EQ(parse_rule_name(rule_name(id)), id);
  }
  EXPECT_TRUE(is_derived(RuleId::BoxL));
  EXPECT_FALSE(is_derived(RuleId::StarL));
  EXPECT_EQ(premise_count(RuleId::ImpL), 2);
  EXPECT_EQ(premise_count(RuleId::Id), 0);
}

// ---- closing rules ----

TEST(Calculus, Id) {
  Sequent s({}, {LF(h(1), "p")}, {LF(h(1), "p")});
  EXPECT_TRUE(run(s, {.rule = RuleId::Id, .formulas = {LF(h(1), "p")}}).empty());
  Sequent other({}, {LF(h(1), "p")}, {LF(h(2), "p")});
  EXPECT_THROW(run(other, {.rule = RuleId::Id, .formulas = {LF(h(1), "p")}}), NotApplicable);
}

TEST(Calculus, BotL) {
  Sequent s({}, {LF(h(1), "false")}, {});
  EXPECT_TRUE(run(s, {.rule = RuleId::BotL, .formulas = {LF(h(1), "false")}}).empty());
  EXPECT_EQ(closure_check(s)->rule, RuleId::BotL);
  // preferred over id when both close
  Sequent both({}, {LF(h(1), "false")}, {LF(h(1), "false")});
  EXPECT_EQ(closure_check(both)->rule, RuleId::BotL);
}

TEST(Calculus, MTrueR) {
  Sequent s({}, {}, {LF(eps, "emp")});
  EXPECT_TRUE(run(s, {.rule = RuleId::MTrueR, .formulas = {LF(eps, "emp")}}).empty());
  Sequent not_unit({}, {}, {LF(h(1), "emp")});
  EXPECT_THROW(run(not_unit, {.rule = RuleId::MTrueR, .formulas = {LF(h(1), "emp")}}), NotApplicable);
  EXPECT_FALSE(closure_check(not_unit).has_value());
}

// ---- logical rules ----

TEST(Calculus, MTrueL) {
  Sequent s({}, {LF(h(1), "emp")}, {LF(h(1), "q")});
  auto p = run(s, {.rule = RuleId::MTrueL, .formulas = {LF(h(1), "emp")}});
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], Sequent({RelAtom::sim(h(1), eps)}, {}, {LF(h(1), "q")}));
}

TEST(Calculus, ImpL) {
  Sequent s({}, {LF(h(1), "p -> q")}, {LF(h(2), "r")});
  auto p = run(s, {.rule = RuleId::ImpL, .formulas = {LF(h(1), "p -> q")}});
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0], Sequent({}, {}, {LF(h(1), "p"), LF(h(2), "r")}));
  EXPECT_EQ(p[1], Sequent({}, {LF(h(1), "q")}, {LF(h(2), "r")}));
}

TEST(Calculus, ImpR) {
  Sequent s({}, {}, {LF(h(1), "p -> q")});
  auto p = run(s, {.rule = RuleId::ImpR, .formulas = {LF(h(1), "p -> q")}});
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], Sequent({}, {LF(h(1), "p")}, {LF(h(1), "q")}));
}

TEST(Calculus, StarL) {
  Sequent s({}, {LF(h(1), "p * q")}, {});
  auto inst = with_fresh(RuleId::StarL, {LF(h(1), "p * q")}, {}, {h(2), h(3)});
  auto p = run(s, inst);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], Sequent({{h(2), h(3), h(1)}}, {LF(h(2), "p"), LF(h(3), "q")}, {}));
}

TEST(Calculus, StarLFreshness) {
  Sequent s({}, {LF(h(1), "p * q")}, {LF(h(2), "r")});
  EXPECT_THROW(run(s, with_fresh(RuleId::StarL, {LF(h(1), "p * q")}, {}, {h(2), h(3)})), NotApplicable);
  EXPECT_THROW(run(s, with_fresh(RuleId::StarL, {LF(h(1), "p * q")}, {}, {h(3), h(3)})), NotApplicable);
  EXPECT_THROW(run(s, with_fresh(RuleId::StarL, {LF(h(1), "p * q")}, {}, {eps, h(3)})), NotApplicable);
  // names filled in by apply avoid the conclusion
  RuleInstance auto_inst{.rule = RuleId::StarL, .formulas = {LF(h(1), "p * q")}};
  run(s, auto_inst);
  RuleInstance filled{.rule = RuleId::StarL, .formulas = {LF(h(1), "p * q")}};
  apply(s, filled);
  ASSERT_EQ(filled.fresh_labels.size(), 2u);
  for (Label l : filled.fresh_labels) EXPECT_FALSE(s.mentions_label(l));
}

TEST(Calculus, StarR) {
  Sequent s({{h(2), h(3), h(1)}}, {}, {LF(h(1), "p * q")});
  auto p = run(s, {.rule = RuleId::StarR, .formulas = {LF(h(1), "p * q")}, .atoms = {{h(2), h(3), h(1)}}});
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0], Sequent({{h(2), h(3), h(1)}}, {}, {LF(h(2), "p"), LF(h(1), "p * q")}));
  EXPECT_EQ(p[1], Sequent({{h(2), h(3), h(1)}}, {}, {LF(h(3), "q"), LF(h(1), "p * q")}));
  Sequent wrong({{h(2), h(3), h(4)}}, {}, {LF(h(1), "p * q")});
  EXPECT_THROW(run(wrong, {.rule = RuleId::StarR, .formulas = {LF(h(1), "p * q")}, .atoms = {{h(2), h(3), h(4)}}}),
               NotApplicable);
}

TEST(Calculus, WandL) {
  Sequent s({{h(2), h(1), h(3)}}, {LF(h(1), "p -* q")}, {});
  auto p = run(s, {.rule = RuleId::WandL, .formulas = {LF(h(1), "p -* q")}, .atoms = {{h(2), h(1), h(3)}}});
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0], Sequent({{h(2), h(1), h(3)}}, {LF(h(1), "p -* q")}, {LF(h(2), "p")}));
  EXPECT_EQ(p[1], Sequent({{h(2), h(1), h(3)}}, {LF(h(1), "p -* q"), LF(h(3), "q")}, {}));
}

TEST(Calculus, WandR) {
  Sequent s({}, {}, {LF(h(1), "p -* q")});
  auto p = run(s, with_fresh(RuleId::WandR, {LF(h(1), "p -* q")}, {}, {h(2), h(3)}));
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], Sequent({{h(2), h(1), h(3)}}, {LF(h(2), "p")}, {LF(h(3), "q")}));
  EXPECT_THROW(run(s, with_fresh(RuleId::WandR, {LF(h(1), "p -* q")}, {}, {h(1), h(3)})), NotApplicable);
}

TEST(Calculus, ExistsL) {
  Sequent s({}, {LF(h(1), "E x. p(x)")}, {});
  RuleInstance inst{.rule = RuleId::ExistsL, .formulas = {LF(h(1), "E x. p(x)")}};
  inst.fresh_var = Term::var("_v1");
  auto p = run(s, inst);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], Sequent({}, {{h(1), Formula::pred("p", {Term::var("_v1")})}}, {}));
  // eigenvariable must not be free in the conclusion
  Sequent busy({}, {LF(h(1), "E x. p(x)")}, {{h(1), Formula::pred("q", {Term::var("_v1")})}});
  EXPECT_THROW(run(busy, inst), NotApplicable);
}

TEST(Calculus, ExistsR) {
  Sequent s({}, {}, {LF(h(1), "E x. p(x)")});
  auto p = run(s, {.rule = RuleId::ExistsR, .formulas = {LF(h(1), "E x. p(x)")}, .terms = {C("c")}});
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], Sequent({}, {}, {LF(h(1), "p(c)"), LF(h(1), "E x. p(x)")}));
}

TEST(Calculus, DiaL) {
  Sequent s({}, {LF(h(1), "<>p")}, {});
  auto p = run(s, with_fresh(RuleId::DiaL, {LF(h(1), "<>p")}, {}, {h(2)}));
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], Sequent({}, {LF(h(2), "p")}, {}));
  EXPECT_THROW(run(s, with_fresh(RuleId::DiaL, {LF(h(1), "<>p")}, {}, {h(1)})), NotApplicable);
}

TEST(Calculus, DiaR) {
  Sequent s({}, {}, {LF(h(1), "<>p")});
  RuleInstance inst{.rule = RuleId::DiaR, .formulas = {LF(h(1), "<>p")}};
  inst.label = h(5);
  auto p = run(s, inst);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], Sequent({}, {}, {LF(h(5), "p"), LF(h(1), "<>p")}));
}

TEST(Calculus, EqRefl) {
  Sequent s({}, {}, {LF(h(1), "q")});
  RuleInstance inst{.rule = RuleId::EqRefl, .terms = {C("a")}};
  inst.label = h(1);
  auto p = run(s, inst);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], Sequent({}, {LF(h(1), "a = a")}, {LF(h(1), "q")}));
}

TEST(Calculus, EqSubst) {
  // h: s = t ; Gamma |- Delta  <-  Gamma[s/t] |- Delta[s/t]
  Sequent s({}, {LF(h(1), "a = b"), LF(h(2), "p(b)")}, {LF(h(3), "q(b, c)")});
  auto p = run(s, {.rule = RuleId::EqSubst, .formulas = {LF(h(1), "a = b")}});
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], Sequent({}, {LF(h(2), "p(a)")}, {LF(h(3), "q(a, c)")}));
}

TEST(Calculus, PtoTotal) {
  Sequent s({}, {}, {LF(h(1), "q")});
  auto inst = with_fresh(RuleId::PtoTotal, {}, {}, {h(2)});
  inst.terms = {C("a"), C("b")};
  auto p = run(s, inst);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], Sequent({}, {LF(h(2), "a |-> b")}, {LF(h(1), "q")}));
  auto stale = with_fresh(RuleId::PtoTotal, {}, {}, {h(1)});
  stale.terms = {C("a"), C("b")};
  EXPECT_THROW(run(s, stale), NotApplicable);
}

TEST(Calculus, PtoInj) {
  Sequent s({}, {LF(h(1), "a |-> b"), LF(h(2), "a |-> b")}, {});
  auto p = run(s, {.rule = RuleId::PtoInj, .formulas = {LF(h(1), "a |-> b"), LF(h(2), "a |-> b")}});
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], Sequent({RelAtom::sim(h(1), h(2))}, s.gamma(), {}));
  Sequent diff({}, {LF(h(1), "a |-> b"), LF(h(2), "a |-> c")}, {});
  EXPECT_THROW(run(diff, {.rule = RuleId::PtoInj, .formulas = {LF(h(1), "a |-> b"), LF(h(2), "a |-> c")}}),
               NotApplicable);
}

// ---- structural rules ----

TEST(Calculus, SimRefl) {
  Sequent s({}, {}, {LF(h(1), "q")});
  RuleInstance inst{.rule = RuleId::SimRefl};
  inst.label = h(1);
  auto p = run(s, inst);
  EXPECT_EQ(p.at(0), Sequent({RelAtom::sim(h(1), h(1))}, {}, {LF(h(1), "q")}));
}

TEST(Calculus, SimSubst) {
  // h1 ~ h2 with h2 a variable: theta = [h1/h2]
  Sequent s({RelAtom::sim(h(1), h(2)), {h(2), h(3), h(4)}}, {LF(h(2), "p")}, {LF(h(2), "q")});
  auto p = run(s, {.rule = RuleId::SimSubst, .atoms = {RelAtom::sim(h(1), h(2))}});
  EXPECT_EQ(p.at(0), Sequent({{h(1), h(3), h(4)}}, {LF(h(1), "p")}, {LF(h(1), "q")}));
}

TEST(Calculus, SimSubstEpsTarget) {
  // h1 ~ eps: theta = [eps/h1]
  Sequent s({RelAtom::sim(h(1), eps), {h(1), h(3), h(4)}}, {LF(h(1), "p")}, {});
  auto p = run(s, {.rule = RuleId::SimSubst, .atoms = {RelAtom::sim(h(1), eps)}});
  EXPECT_EQ(p.at(0), Sequent({{eps, h(3), h(4)}}, {LF(eps, "p")}, {}));
}

TEST(Calculus, SimSubstTrivial) {
  Sequent s({RelAtom::sim(h(1), h(1))}, {LF(h(1), "p")}, {});
  auto p = run(s, {.rule = RuleId::SimSubst, .atoms = {RelAtom::sim(h(1), h(1))}});
  EXPECT_EQ(p.at(0), Sequent({}, {LF(h(1), "p")}, {}));
}

TEST(Calculus, E) {
  Sequent s({{h(1), h(2), h(0 + 3)}}, {}, {});
  auto p = run(s, {.rule = RuleId::E, .atoms = {{h(1), h(2), h(3)}}});
  EXPECT_EQ(p.at(0), Sequent({{h(1), h(2), h(3)}, {h(2), h(1), h(3)}}, {}, {}));
}

TEST(Calculus, D) {
  Sequent s({{h(1), h(1), h(2)}}, {}, {});
  auto p = run(s, {.rule = RuleId::D, .atoms = {{h(1), h(1), h(2)}}});
  EXPECT_EQ(p.at(0), Sequent({{h(1), h(1), h(2)}, RelAtom::sim(h(1), eps)}, {}, {}));
  Sequent bad({{h(1), h(3), h(2)}}, {}, {});
  EXPECT_THROW(run(bad, {.rule = RuleId::D, .atoms = {{h(1), h(3), h(2)}}}), NotApplicable);
}

TEST(Calculus, A) {
  // (h1,h2 |> h0);(h3,h4 |> h1)  <-  adds (h3,h5 |> h0);(h2,h4 |> h5), h5 fresh
  RelAtom a1{h(1), h(2), h(10)}, a2{h(3), h(4), h(1)};
  Sequent s({a1, a2}, {}, {});
  auto p = run(s, with_fresh(RuleId::A, {}, {a1, a2}, {h(5)}));
  EXPECT_EQ(p.at(0), Sequent({a1, a2, {h(3), h(5), h(10)}, {h(2), h(4), h(5)}}, {}, {}));
  EXPECT_THROW(run(s, with_fresh(RuleId::A, {}, {a1, a2}, {h(4)})), NotApplicable);
  EXPECT_THROW(run(s, with_fresh(RuleId::A, {}, {a2, a1}, {h(5)})), NotApplicable);
}

TEST(Calculus, P) {
  RelAtom a1{h(1), h(2), h(10)}, a2{h(1), h(2), h(3)};
  Sequent s({a1, a2}, {}, {});
  auto p = run(s, {.rule = RuleId::P, .atoms = {a1, a2}});
  EXPECT_EQ(p.at(0), Sequent({a1, RelAtom::sim(h(10), h(3))}, {}, {}));
}

TEST(Calculus, C) {
  RelAtom a1{h(1), h(2), h(10)}, a2{h(1), h(3), h(10)};
  Sequent s({a1, a2}, {}, {});
  auto p = run(s, {.rule = RuleId::C, .atoms = {a1, a2}});
  EXPECT_EQ(p.at(0), Sequent({a1, RelAtom::sim(h(2), h(3))}, {}, {}));
}

TEST(Calculus, CS) {
  RelAtom a1{h(1), h(2), h(10)}, a2{h(3), h(4), h(10)};
  Sequent s({a1, a2}, {}, {});
  auto p = run(s, with_fresh(RuleId::CS, {}, {a1, a2}, {h(5), h(6), h(7), h(8)}));
  EXPECT_EQ(p.at(0), Sequent({a1, a2, {h(5), h(6), h(1)}, {h(7), h(8), h(2)}, {h(5), h(7), h(3)},
                              {h(6), h(8), h(4)}},
                             {}, {}));
  EXPECT_THROW(run(s, with_fresh(RuleId::CS, {}, {a1, a2}, {h(5), h(6), h(7), h(3)})), NotApplicable);
}

// ---- derived rules ----

TEST(Calculus, BoxL) {
  LabelledFormula box = LF(h(1), "[]p");
  Sequent s({}, {box}, {});
  RuleInstance inst{.rule = RuleId::BoxL, .formulas = {box}};
  inst.label = h(4);
  auto p = run(s, inst);
  EXPECT_EQ(p.at(0), Sequent({}, {box, LF(h(4), "p")}, {}));
}

TEST(Calculus, BoxR) {
  Sequent s({}, {}, {LF(h(1), "[]p")});
  auto p = run(s, with_fresh(RuleId::BoxR, {LF(h(1), "[]p")}, {}, {h(2)}));
  EXPECT_EQ(p.at(0), Sequent({}, {}, {LF(h(2), "p")}));
}

TEST(Calculus, ForallL) {
  LabelledFormula all = LF(h(1), "A x y. r(x, y)");
  Sequent s({}, {all}, {});
  auto p = run(s, {.rule = RuleId::ForallL, .formulas = {all}, .terms = {C("a"), C("b")}});
  EXPECT_EQ(p.at(0), Sequent({}, {all, LF(h(1), "r(a, b)")}, {}));
  EXPECT_THROW(run(s, {.rule = RuleId::ForallL, .formulas = {all}, .terms = {C("a"), C("b"), C("c")}}),
               NotApplicable);
}

TEST(Calculus, ForallR) {
  Sequent s({}, {}, {LF(h(1), "A x. p(x)")});
  RuleInstance inst{.rule = RuleId::ForallR, .formulas = {LF(h(1), "A x. p(x)")}};
  inst.fresh_var = Term::var("_v9");
  auto p = run(s, inst);
  EXPECT_EQ(p.at(0), Sequent({}, {}, {{h(1), Formula::pred("p", {Term::var("_v9")})}}));
}

TEST(Calculus, DerivedExpansionsCheck) {
  LabelledFormula box = LF(h(1), "[]p");
  Sequent s({}, {box}, {LF(h(2), "q")});
  RuleInstance inst{.rule = RuleId::BoxL, .formulas = {box}};
  inst.label = h(2);
  FreshNames fresh;
  fresh.reserve(s);
  Sequent open;
  Derivation d = expand_derived(s, inst, fresh, open);
  EXPECT_EQ(d.node, s);
  EXPECT_TRUE(open.in_gamma(LF(h(2), "p")));
}

// ---- checker ----

namespace {

// ImpR then id: |- h1: p -> p
Derivation tiny() {
  Sequent root({}, {}, {LF(h(1), "p -> p")});
  Sequent leaf({}, {LF(h(1), "p")}, {LF(h(1), "p")});
  Derivation d{root, {.rule = RuleId::ImpR, .formulas = {LF(h(1), "p -> p")}}, {}};
  d.children.push_back({leaf, {.rule = RuleId::Id, .formulas = {LF(h(1), "p")}}, {}});
  return d;
}

}  // namespace

TEST(Checker, AcceptsValid) {
  Derivation d = tiny();
  EXPECT_TRUE(check_subderivation(d));
  EXPECT_TRUE(check_derivation(d, TheorySet{}, F("p -> p")));
  EXPECT_EQ(leaf_rules(d), std::vector<RuleId>{RuleId::Id});
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.height(), 2u);
}

TEST(Checker, RejectsTampering) {
  Derivation wrong_child = tiny();
  wrong_child.children[0].node.add_gamma(LF(h(1), "q"));
  EXPECT_FALSE(check_subderivation(wrong_child));

  Derivation open_leaf = tiny();
  open_leaf.children[0].applied = {.rule = RuleId::BotL, .formulas = {LF(h(1), "false")}};
  auto res = check_subderivation(open_leaf);
  EXPECT_FALSE(res);
  EXPECT_EQ(res.path, std::vector<std::size_t>{0});

  Derivation missing = tiny();
  missing.children.clear();
  EXPECT_FALSE(check_subderivation(missing));

  Derivation wrong_goal = tiny();
  EXPECT_FALSE(check_derivation(wrong_goal, TheorySet{}, F("q -> q")));
  TheorySet t;
  t.add(F("p"), {});
  EXPECT_FALSE(check_derivation(wrong_goal, t, F("p -> p")));
}

TEST(Checker, RejectsStaleFreshLabel) {
  Sequent root({{h(2), h(3), h(4)}}, {LF(h(1), "p * q")}, {});
  Sequent prem({{h(2), h(3), h(4)}, {h(2), h(5), h(1)}}, {LF(h(2), "p"), LF(h(5), "q")}, {});
  Derivation d{root, with_fresh(RuleId::StarL, {LF(h(1), "p * q")}, {}, {h(2), h(5)}), {}};
  d.children.push_back({prem, {}, {}});
  EXPECT_FALSE(check_subderivation(d));
}
