#include <stdexcept>

#include "prover_internal.hpp"

namespace foasl::detail {

namespace {

RuleInstance rule(RuleId r, std::vector<LabelledFormula> fs = {}, std::vector<RelAtom> as = {}) {
  return RuleInstance{.rule = r, .formulas = std::move(fs), .atoms = std::move(as)};
}

Label fresh_of(const RuleInstance& r) { return r.fresh_labels.at(0); }

Formula instantiate(Formula f, const std::vector<Term>& terms) {
  for (const auto& t : terms) {
    ForallView fv{};
    if (!match_forall(f, fv)) throw std::logic_error("instantiate: not a universal formula");
    f = substitute_term(*fv.body, *fv.var, t);
  }
  return f;
}

}  // namespace

bool close_leaf(Builder& b, std::size_t i) {
  if (b.close(i)) return true;
  for (const auto& lf : b.leaf(i).delta()) {
    if (lf.formula.op() != Op::Eq || lf.formula.args()[0] != lf.formula.args()[1]) continue;
    RuleInstance r{.rule = RuleId::EqRefl, .label = lf.label, .terms = {lf.formula.args()[0]}};
    b.step(i, r);
    return b.close(i);
  }
  return false;
}

std::size_t decompose(Builder& b, std::size_t i, const LabelledFormula& f, bool in_gamma) {
  struct Item {
    LabelledFormula f;
    bool gamma;
  };
  std::function<std::size_t(std::size_t, std::vector<Item>)> go = [&](std::size_t j,
                                                                      std::vector<Item> pending) {
    if (close_leaf(b, j)) return std::size_t{0};
    while (!pending.empty()) {
      Item it = pending.back();
      pending.pop_back();
      const Formula& g = it.f.formula;
      if (g.op() != Op::Imp || retained_shape(g)) continue;
      if (it.gamma) {
        if (!b.leaf(j).in_gamma(it.f)) continue;
        b.step(j, rule(RuleId::ImpL, {it.f}));
        auto right = pending;
        right.push_back({{it.f.label, g.rhs()}, true});
        std::size_t n2 = go(j + 1, right);
        pending.push_back({{it.f.label, g.lhs()}, false});
        std::size_t n1 = go(j, pending);
        return n1 + n2;
      }
      if (!b.leaf(j).in_delta(it.f)) continue;
      b.step(j, rule(RuleId::ImpR, {it.f}));
      pending.push_back({{it.f.label, g.lhs()}, true});
      pending.push_back({{it.f.label, g.rhs()}, false});
      if (close_leaf(b, j)) return std::size_t{0};
    }
    return std::size_t{1};
  };
  return go(i, {{f, in_gamma}});
}

LabelledFormula theory_instance(Builder& b, std::size_t i, const Env& env, int idx, Label w,
                                const std::vector<Term>& terms) {
  auto boxed = env.locate(b.leaf(i), idx);
  if (!boxed) throw NotApplicable("theory formula not in the antecedent");
  LabelledFormula body{w, env.bodies[idx]};
  if (!b.leaf(i).in_gamma(body)) {
    RuleInstance r{.rule = RuleId::BoxL, .formulas = {*boxed}, .label = w};
    b.step(i, r);
  }
  if (terms.empty()) return body;
  b.ctx(i).junk_gamma.insert(body);
  RuleInstance r{.rule = RuleId::ForallL, .formulas = {body}, .terms = terms};
  b.step(i, r);
  return {w, instantiate(body.formula, terms)};
}

void pto_l1(Builder& b, std::size_t i, const Env& env, int idx, const LabelledFormula& pto) {
  auto inst = theory_instance(b, i, env, idx, Label::eps(), pto.formula.args());
  decompose(b, i, inst, true);
}

void pto_l2(Builder& b, std::size_t i, const Env& env, int idx, const RelAtom& a,
            const LabelledFormula& pto) {
  auto inst = theory_instance(b, i, env, idx, a.result, pto.formula.args());
  b.step(i, rule(RuleId::ImpL, {inst}));
  LabelledFormula neg_split{a.result, inst.formula.rhs()};
  b.step(i + 1, rule(RuleId::ImpL, {neg_split}));
  b.close(i + 2);
  LabelledFormula split{a.result, neg_split.formula.lhs()};
  b.ctx(i + 1).junk_delta.insert(split);
  b.step(i + 1, rule(RuleId::StarR, {split}, {a}));
  for (std::size_t k : {i + 2, i + 1}) {
    const Label part = k == i + 1 ? a.left : a.right;
    const Formula& nonempty = k == i + 1 ? split.formula.lhs() : split.formula.rhs();
    b.step(k, rule(RuleId::ImpR, {{part, nonempty}}));
    b.step(k, rule(RuleId::MTrueL, {{part, Formula::mtrue()}}));
  }
  close_leaf(b, i);
}

void pto_l3(Builder& b, std::size_t i, const Env& env, int idx, const RelAtom& a,
            const LabelledFormula& f1, const LabelledFormula& f2) {
  auto terms = f1.formula.args();
  terms.insert(terms.end(), f2.formula.args().begin(), f2.formula.args().end());
  auto inst = theory_instance(b, i, env, idx, a.result, terms);
  b.step(i, rule(RuleId::ImpL, {inst}));
  decompose(b, i + 1, {a.result, inst.formula.rhs()}, true);
  b.step(i, rule(RuleId::StarR, {{a.result, inst.formula.lhs()}}, {a}));
  close_leaf(b, i + 1);
  close_leaf(b, i);
}

void pto_l4(Builder& b, std::size_t i, const Env& env, int idx, const LabelledFormula& f1,
            const LabelledFormula& f2) {
  auto terms = f1.formula.args();
  terms.insert(terms.end(), f2.formula.args().begin(), f2.formula.args().end());
  auto inst = theory_instance(b, i, env, idx, f1.label, terms);
  decompose(b, i, inst, true);
}

void heap_extension(Builder& b, std::size_t i, const Env& env, int idx, Label h0) {
  auto body = theory_instance(b, i, env, idx, h0, {});
  auto ex = b.step(i, rule(RuleId::ExistsL, {body}));
  LabelledFormula all{h0, substitute_term(body.formula.body(), body.formula.name(), *ex.fresh_var)};
  std::vector<Term> fields;
  Prefix p = forall_prefix(all.formula);
  for (std::size_t k = 0; k < p.vars.size(); ++k) fields.push_back(b.fresh().variable());
  b.ctx(i).junk_gamma.insert(all);
  RuleInstance fl{.rule = RuleId::ForallL, .formulas = {all}, .terms = fields};
  b.step(i, fl);
  LabelledFormula neg{h0, instantiate(all.formula, fields)};
  b.step(i, rule(RuleId::ImpL, {neg}));
  b.close(i + 1);
  b.step(i, rule(RuleId::WandR, {{h0, neg.formula.lhs()}}));
}

void indivisible_unit(Builder& b, std::size_t i, const RelAtom& a) {
  const Label e = Label::eps();
  RuleInstance refl{.rule = RuleId::SimRefl, .label = e};
  b.step(i, refl);
  const RelAtom unit{e, e, e};
  Label h5 = fresh_of(b.step(i, rule(RuleId::A, {}, {unit, a})));
  Label h6 = fresh_of(b.step(i, rule(RuleId::A, {}, {{e, a.right, h5}, a})));
  b.step(i, rule(RuleId::D, {}, {{a.right, a.right, h6}}));
}

void ensure_atom(Builder& b, std::size_t i, const RelAtom& a) {
  const Sequent& s = b.leaf(i);
  if (s.has_atom(a)) return;
  if (a.left.is_eps() && a.right == a.result) {
    RuleInstance r{.rule = RuleId::SimRefl, .label = a.right};
    b.step(i, r);
    return;
  }
  if (a.right.is_eps() && a.left == a.result) {
    ensure_atom(b, i, RelAtom::sim(a.left, a.left));
    b.step(i, rule(RuleId::E, {}, {RelAtom::sim(a.left, a.left)}));
    return;
  }
  const RelAtom swapped{a.right, a.left, a.result};
  if (!s.has_atom(swapped)) throw NotApplicable("missing relational atom " + to_string(a));
  b.step(i, rule(RuleId::E, {}, {swapped}));
}

namespace {

// Splits the subtree at n into (selected part, rest); eps stands for an
// empty part. Both parts non-eps implies the atom exists.
std::pair<Label, Label> part(Builder& b, std::size_t i, const Tree& t, int n, const std::vector<char>& sel) {
  const auto& node = t.nodes[n];
  const Label e = Label::eps();
  if (node.left < 0) return sel[n] ? std::pair{node.label, e} : std::pair{e, node.label};
  const Label y = node.label;
  const Label a = t.nodes[node.left].label;
  const Label c = t.nodes[node.right].label;
  auto [pa, qa] = part(b, i, t, node.left, sel);
  auto [pb, qb] = part(b, i, t, node.right, sel);
  auto assoc = [&](RelAtom x, RelAtom z) {
    ensure_atom(b, i, x);
    ensure_atom(b, i, z);
    return fresh_of(b.step(i, rule(RuleId::A, {}, {x, z})));
  };
  if (qa.is_eps() && qb.is_eps()) return {y, e};
  if (pa.is_eps() && pb.is_eps()) return {e, y};
  if (qa.is_eps() && pb.is_eps()) return {a, c};
  if (pa.is_eps() && qb.is_eps()) {
    ensure_atom(b, i, {c, a, y});
    return {c, a};
  }
  if (qa.is_eps()) {
    Label w = assoc({c, a, y}, {qb, pb, c});
    ensure_atom(b, i, {w, qb, y});
    return {w, qb};
  }
  if (pa.is_eps()) {
    Label w = assoc({c, a, y}, {pb, qb, c});
    return {pb, w};
  }
  if (qb.is_eps()) {
    Label w = assoc({a, c, y}, {qa, pa, a});
    ensure_atom(b, i, {w, qa, y});
    return {w, qa};
  }
  if (pb.is_eps()) {
    Label w = assoc({a, c, y}, {pa, qa, a});
    return {pa, w};
  }
  Label w1 = assoc({a, c, y}, {pa, qa, a});
  Label w2 = assoc({c, qa, w1}, {pb, qb, c});
  Label w3 = assoc({w1, pa, y}, {w2, pb, w1});
  ensure_atom(b, i, {w3, w2, y});
  return {w3, w2};
}

}  // namespace

std::pair<Label, Label> realize(Builder& b, std::size_t i, const Tree& t, const std::vector<bool>& selected) {
  std::vector<char> sel(t.nodes.size(), 0);
  auto leaves = t.leaf_nodes();
  for (std::size_t k = 0; k < leaves.size(); ++k) sel[leaves[k]] = selected.at(k);
  auto [x1, x2] = part(b, i, t, 0, sel);
  const Label y = t.nodes[0].label;
  if (x1.is_eps()) ensure_atom(b, i, RelAtom::sim(y, y));
  if (x2.is_eps()) ensure_atom(b, i, {y, Label::eps(), y});
  return {x1, x2};
}

}  // namespace foasl::detail
