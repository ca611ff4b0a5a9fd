#include "foasl/calculus.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace foasl {

namespace {

struct RuleInfo {
  RuleId id;
  std::string_view name;
  int premises;
  bool derived;
};

constexpr std::array<RuleInfo, 30> kRules{{
    {RuleId::Id, "id", 0, false},
    {RuleId::BotL, "BotL", 0, false},
    {RuleId::MTrueR, "MTrueR", 0, false},
    {RuleId::MTrueL, "MTrueL", 1, false},
    {RuleId::ImpL, "ImpL", 2, false},
    {RuleId::ImpR, "ImpR", 1, false},
    {RuleId::StarL, "StarL", 1, false},
    {RuleId::StarR, "StarR", 2, false},
    {RuleId::WandL, "WandL", 2, false},
    {RuleId::WandR, "WandR", 1, false},
    {RuleId::ExistsL, "ExistsL", 1, false},
    {RuleId::ExistsR, "ExistsR", 1, false},
    {RuleId::DiaL, "DiaL", 1, false},
    {RuleId::DiaR, "DiaR", 1, false},
    {RuleId::EqRefl, "EqRefl", 1, false},
    {RuleId::EqSubst, "EqSubst", 1, false},
    {RuleId::PtoTotal, "PtoTotal", 1, false},
    {RuleId::PtoInj, "PtoInj", 1, false},
    {RuleId::SimRefl, "SimRefl", 1, false},
    {RuleId::SimSubst, "SimSubst", 1, false},
    {RuleId::E, "E", 1, false},
    {RuleId::D, "D", 1, false},
    {RuleId::A, "A", 1, false},
    {RuleId::P, "P", 1, false},
    {RuleId::C, "C", 1, false},
    {RuleId::CS, "CS", 1, false},
    {RuleId::BoxL, "BoxL", 1, true},
    {RuleId::BoxR, "BoxR", 1, true},
    {RuleId::ForallL, "ForallL", 1, true},
    {RuleId::ForallR, "ForallR", 1, true},
}};

const RuleInfo& info(RuleId r) { return kRules[static_cast<std::size_t>(r)]; }

[[noreturn]] void fail(RuleId r, const std::string& why) {
  throw NotApplicable(std::string(rule_name(r)) + ": " + why);
}

void need(bool cond, RuleId r, const char* why) {
  if (!cond) fail(r, why);
}

const LabelledFormula& formula_arg(const RuleInstance& inst, std::size_t i) {
  if (inst.formulas.size() <= i) fail(inst.rule, "missing principal formula");
  return inst.formulas[i];
}

const RelAtom& atom_arg(const RuleInstance& inst, std::size_t i) {
  if (inst.atoms.size() <= i) fail(inst.rule, "missing principal atom");
  return inst.atoms[i];
}

// Returns n fresh labels, taking them from inst when supplied.
std::vector<Label> fresh_labels(const Sequent& s, RuleInstance& inst, FreshNames& fresh,
                                std::size_t n) {
  if (inst.fresh_labels.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      Label l = fresh.label();
      while (s.mentions_label(l)) l = fresh.label();
      inst.fresh_labels.push_back(l);
    }
  }
  need(inst.fresh_labels.size() == n, inst.rule, "wrong number of fresh labels");
  std::set<Label> seen;
  for (Label l : inst.fresh_labels) {
    need(!l.is_eps(), inst.rule, "eps cannot be a fresh label");
    need(!s.mentions_label(l), inst.rule, "fresh label occurs in the conclusion");
    need(seen.insert(l).second, inst.rule, "fresh labels are not distinct");
  }
  return inst.fresh_labels;
}

Term fresh_variable(const Sequent& s, RuleInstance& inst, FreshNames& fresh) {
  if (!inst.fresh_var) {
    Term y = fresh.variable();
    while (s.mentions_name(y.name)) y = fresh.variable();
    inst.fresh_var = y;
  }
  need(inst.fresh_var->is_var(), inst.rule, "eigenvariable must be a variable");
  need(!s.mentions_free_var(inst.fresh_var->name), inst.rule,
       "eigenvariable is free in the conclusion");
  return *inst.fresh_var;
}

const LabelledFormula& in_gamma(const Sequent& s, const RuleInstance& inst, Op op) {
  const auto& lf = formula_arg(inst, 0);
  need(s.in_gamma(lf), inst.rule, "principal formula not in antecedent");
  need(lf.formula.op() == op, inst.rule, "principal formula has the wrong shape");
  return lf;
}

const LabelledFormula& in_delta(const Sequent& s, const RuleInstance& inst, Op op) {
  const auto& lf = formula_arg(inst, 0);
  need(s.in_delta(lf), inst.rule, "principal formula not in succedent");
  need(lf.formula.op() == op, inst.rule, "principal formula has the wrong shape");
  return lf;
}

const RelAtom& atom_in(const Sequent& s, const RuleInstance& inst, std::size_t i) {
  const auto& a = atom_arg(inst, i);
  need(s.has_atom(a), inst.rule, "principal atom not in the sequent");
  return a;
}

Sequent with_gamma(Sequent s, LabelledFormula lf) {
  s.add_gamma(std::move(lf));
  return s;
}

Sequent with_delta(Sequent s, LabelledFormula lf) {
  s.add_delta(std::move(lf));
  return s;
}

Sequent with_atom(Sequent s, const RelAtom& a) {
  s.add_atom(a);
  return s;
}

}  // namespace

std::string_view rule_name(RuleId r) { return info(r).name; }

std::optional<RuleId> parse_rule_name(std::string_view s) {
  for (const auto& r : kRules)
    if (r.name == s) return r.id;
  return std::nullopt;
}

bool is_closure(RuleId r) { return info(r).premises == 0; }
bool is_derived(RuleId r) { return info(r).derived; }
int premise_count(RuleId r) { return info(r).premises; }

std::string to_string(const RuleInstance& r) {
  std::string out(rule_name(r.rule));
  std::vector<std::string> parts;
  for (const auto& f : r.formulas) parts.push_back(to_string(f));
  for (const auto& a : r.atoms) parts.push_back(to_string(a));
  if (r.label) parts.push_back("at " + to_string(*r.label));
  if (!r.terms.empty()) {
    std::string t = "with ";
    for (std::size_t i = 0; i < r.terms.size(); ++i) t += (i ? ", " : "") + to_string(r.terms[i]);
    parts.push_back(t);
  }
  if (!r.fresh_labels.empty()) {
    std::string t = "fresh ";
    for (std::size_t i = 0; i < r.fresh_labels.size(); ++i)
      t += (i ? ", " : "") + to_string(r.fresh_labels[i]);
    parts.push_back(t);
  }
  if (r.fresh_var) parts.push_back("fresh " + to_string(*r.fresh_var));
  if (parts.empty()) return out;
  out += " [";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "; " : "") + parts[i];
  return out + "]";
}

std::size_t Derivation::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

std::size_t Derivation::height() const {
  std::size_t h = 0;
  for (const auto& c : children) h = std::max(h, c.height());
  return h + 1;
}

std::optional<RuleInstance> closure_check(const Sequent& s) {
  const auto& g = s.gamma();
  for (const auto& lf : g)
    if (lf.formula.op() == Op::Bot) return RuleInstance{.rule = RuleId::BotL, .formulas = {lf}};
  // gamma and delta are sorted; walk them together
  const auto& d = s.delta();
  auto gi = g.begin();
  auto di = d.begin();
  while (gi != g.end() && di != d.end()) {
    if (*gi < *di) {
      ++gi;
    } else if (*di < *gi) {
      ++di;
    } else {
      return RuleInstance{.rule = RuleId::Id, .formulas = {*gi}};
    }
  }
  LabelledFormula unit{Label::eps(), Formula::mtrue()};
  if (s.in_delta(unit)) return RuleInstance{.rule = RuleId::MTrueR, .formulas = {unit}};
  return std::nullopt;
}

std::vector<Sequent> apply(const Sequent& s, RuleInstance& inst) {
  FreshNames fresh;
  fresh.reserve(s);
  return apply(s, inst, fresh);
}

std::vector<Sequent> apply(const Sequent& s, RuleInstance& inst, FreshNames& fresh) {
  const RuleId r = inst.rule;
  switch (r) {
    case RuleId::Id: {
      const auto& lf = formula_arg(inst, 0);
      need(s.in_gamma(lf) && s.in_delta(lf), r, "formula not on both sides");
      return {};
    }
    case RuleId::BotL:
      in_gamma(s, inst, Op::Bot);
      return {};
    case RuleId::MTrueR: {
      const auto& lf = in_delta(s, inst, Op::MTrue);
      need(lf.label.is_eps(), r, "label is not eps");
      return {};
    }
    case RuleId::MTrueL: {
      auto lf = in_gamma(s, inst, Op::MTrue);
      Sequent p = s;
      p.erase_gamma(lf);
      p.add_atom(RelAtom::sim(lf.label, Label::eps()));
      return {p};
    }
    case RuleId::ImpR: {
      auto lf = in_delta(s, inst, Op::Imp);
      Sequent p = s;
      p.erase_delta(lf);
      p.add_gamma({lf.label, lf.formula.lhs()});
      p.add_delta({lf.label, lf.formula.rhs()});
      return {p};
    }
    case RuleId::ImpL: {
      auto lf = in_gamma(s, inst, Op::Imp);
      Sequent base = s;
      base.erase_gamma(lf);
      return {with_delta(base, {lf.label, lf.formula.lhs()}),
              with_gamma(base, {lf.label, lf.formula.rhs()})};
    }
    case RuleId::StarL: {
      auto lf = in_gamma(s, inst, Op::Star);
      auto fl = fresh_labels(s, inst, fresh, 2);
      Sequent p = s;
      p.erase_gamma(lf);
      p.add_atom({fl[0], fl[1], lf.label});
      p.add_gamma({fl[0], lf.formula.lhs()});
      p.add_gamma({fl[1], lf.formula.rhs()});
      return {p};
    }
    case RuleId::StarR: {
      const auto& lf = in_delta(s, inst, Op::Star);
      const auto& a = atom_in(s, inst, 0);
      need(a.result == lf.label, r, "atom does not decompose the principal label");
      return {with_delta(s, {a.left, lf.formula.lhs()}), with_delta(s, {a.right, lf.formula.rhs()})};
    }
    case RuleId::WandR: {
      auto lf = in_delta(s, inst, Op::Wand);
      auto fl = fresh_labels(s, inst, fresh, 2);
      Sequent p = s;
      p.erase_delta(lf);
      p.add_atom({fl[0], lf.label, fl[1]});
      p.add_gamma({fl[0], lf.formula.lhs()});
      p.add_delta({fl[1], lf.formula.rhs()});
      return {p};
    }
    case RuleId::WandL: {
      const auto& lf = in_gamma(s, inst, Op::Wand);
      const auto& a = atom_in(s, inst, 0);
      need(a.right == lf.label, r, "atom does not extend the principal label");
      return {with_delta(s, {a.left, lf.formula.lhs()}), with_gamma(s, {a.result, lf.formula.rhs()})};
    }
    case RuleId::ExistsL: {
      auto lf = in_gamma(s, inst, Op::Exists);
      Term y = fresh_variable(s, inst, fresh);
      Sequent p = s;
      p.erase_gamma(lf);
      p.add_gamma({lf.label, substitute_term(lf.formula.body(), lf.formula.name(), y)});
      return {p};
    }
    case RuleId::ExistsR: {
      const auto& lf = in_delta(s, inst, Op::Exists);
      need(inst.terms.size() == 1, r, "needs exactly one witness term");
      return {with_delta(s, {lf.label, substitute_term(lf.formula.body(), lf.formula.name(),
                                                       inst.terms[0])})};
    }
    case RuleId::DiaL: {
      auto lf = in_gamma(s, inst, Op::Dia);
      auto fl = fresh_labels(s, inst, fresh, 1);
      Sequent p = s;
      p.erase_gamma(lf);
      p.add_gamma({fl[0], lf.formula.body()});
      return {p};
    }
    case RuleId::DiaR: {
      const auto& lf = in_delta(s, inst, Op::Dia);
      need(inst.label.has_value(), r, "needs a witness label");
      return {with_delta(s, {*inst.label, lf.formula.body()})};
    }
    case RuleId::EqRefl: {
      need(inst.label.has_value(), r, "needs a label");
      need(inst.terms.size() == 1, r, "needs exactly one term");
      return {with_gamma(s, {*inst.label, Formula::eq(inst.terms[0], inst.terms[0])})};
    }
    case RuleId::EqSubst: {
      auto lf = in_gamma(s, inst, Op::Eq);
      Sequent p = s;
      p.erase_gamma(lf);
      const Term& src = lf.formula.args()[0];
      const Term& tgt = lf.formula.args()[1];
      return {substitute_term_in(p, tgt, src)};
    }
    case RuleId::PtoTotal: {
      need(inst.terms.size() >= 2, r, "needs at least two terms");
      auto fl = fresh_labels(s, inst, fresh, 1);
      return {with_gamma(s, {fl[0], Formula::points_to(inst.terms)})};
    }
    case RuleId::PtoInj: {
      need(inst.formulas.size() == 2, r, "needs two principal formulas");
      const auto& f1 = inst.formulas[0];
      const auto& f2 = inst.formulas[1];
      need(s.in_gamma(f1) && s.in_gamma(f2), r, "principal formula not in antecedent");
      need(f1.formula.op() == Op::PointsTo && f1.formula == f2.formula, r,
           "principals are not the same points-to formula");
      return {with_atom(s, RelAtom::sim(f1.label, f2.label))};
    }
    case RuleId::SimRefl: {
      need(inst.label.has_value(), r, "needs a label");
      return {with_atom(s, RelAtom::sim(*inst.label, *inst.label))};
    }
    case RuleId::SimSubst: {
      auto a = atom_in(s, inst, 0);
      need(a.is_sim(), r, "principal atom is not a ~ atom");
      Sequent p = s;
      p.erase_atom(a);
      // h1 ~ h2 is (eps, h1 |> h2)
      if (a.right == a.result) return {p};
      if (!a.result.is_eps()) return {substitute_label(p, a.result, a.right)};
      return {substitute_label(p, a.right, Label::eps())};
    }
    case RuleId::E: {
      const auto& a = atom_in(s, inst, 0);
      return {with_atom(s, {a.right, a.left, a.result})};
    }
    case RuleId::D: {
      const auto& a = atom_in(s, inst, 0);
      need(a.left == a.right, r, "atom is not of the form (h1, h1 |> h2)");
      return {with_atom(s, RelAtom::sim(a.left, Label::eps()))};
    }
    case RuleId::A: {
      const auto& a1 = atom_in(s, inst, 0);
      const auto& a2 = atom_in(s, inst, 1);
      need(a2.result == a1.left, r, "second atom does not decompose the first's left label");
      auto fl = fresh_labels(s, inst, fresh, 1);
      Sequent p = s;
      p.add_atom({a2.left, fl[0], a1.result});
      p.add_atom({a1.right, a2.right, fl[0]});
      return {p};
    }
    case RuleId::P: {
      const auto& a1 = atom_in(s, inst, 0);
      auto a2 = atom_in(s, inst, 1);
      need(a1 != a2, r, "principal atoms coincide");
      need(a1.left == a2.left && a1.right == a2.right, r, "atoms do not share both parts");
      Sequent p = s;
      p.erase_atom(a2);
      p.add_atom(RelAtom::sim(a1.result, a2.result));
      return {p};
    }
    case RuleId::C: {
      const auto& a1 = atom_in(s, inst, 0);
      auto a2 = atom_in(s, inst, 1);
      need(a1 != a2, r, "principal atoms coincide");
      need(a1.left == a2.left && a1.result == a2.result, r,
           "atoms do not share the left part and the result");
      Sequent p = s;
      p.erase_atom(a2);
      p.add_atom(RelAtom::sim(a1.right, a2.right));
      return {p};
    }
    case RuleId::CS: {
      const auto& a1 = atom_in(s, inst, 0);
      const auto& a2 = atom_in(s, inst, 1);
      need(a1.result == a2.result, r, "atoms do not share the result");
      auto fl = fresh_labels(s, inst, fresh, 4);
      Sequent p = s;
      p.add_atom({fl[0], fl[1], a1.left});
      p.add_atom({fl[2], fl[3], a1.right});
      p.add_atom({fl[0], fl[2], a2.left});
      p.add_atom({fl[1], fl[3], a2.right});
      return {p};
    }
    case RuleId::BoxL: {
      const auto& lf = formula_arg(inst, 0);
      need(s.in_gamma(lf), r, "principal formula not in antecedent");
      const Formula* body = match_box(lf.formula);
      need(body != nullptr, r, "principal formula is not a box");
      need(inst.label.has_value(), r, "needs a witness label");
      return {with_gamma(s, {*inst.label, *body})};
    }
    case RuleId::BoxR: {
      auto lf = formula_arg(inst, 0);
      need(s.in_delta(lf), r, "principal formula not in succedent");
      const Formula* body = match_box(lf.formula);
      need(body != nullptr, r, "principal formula is not a box");
      auto fl = fresh_labels(s, inst, fresh, 1);
      Sequent p = s;
      p.erase_delta(lf);
      p.add_delta({fl[0], *body});
      return {p};
    }
    case RuleId::ForallL: {
      const auto& lf = formula_arg(inst, 0);
      need(s.in_gamma(lf), r, "principal formula not in antecedent");
      need(!inst.terms.empty(), r, "needs at least one witness term");
      Formula cur = lf.formula;
      for (const auto& t : inst.terms) {
        ForallView fv{};
        need(match_forall(cur, fv), r, "not enough universal quantifiers");
        cur = substitute_term(*fv.body, *fv.var, t);
      }
      return {with_gamma(s, {lf.label, cur})};
    }
    case RuleId::ForallR: {
      auto lf = formula_arg(inst, 0);
      need(s.in_delta(lf), r, "principal formula not in succedent");
      ForallView fv{};
      need(match_forall(lf.formula, fv), r, "principal formula is not universal");
      Term y = fresh_variable(s, inst, fresh);
      Sequent p = s;
      p.erase_delta(lf);
      p.add_delta({lf.label, substitute_term(*fv.body, *fv.var, y)});
      return {p};
    }
  }
  fail(r, "unknown rule");
}

namespace {

// A chain of single-premise steps where two-premise ImpL steps close one side
// with BotL. Assembled bottom-up into a Derivation.
struct Spine {
  struct Step {
    Sequent node;
    RuleInstance inst;
    std::optional<Derivation> closed_side;  // ImpL: the h:bot premise
  };
  std::vector<Step> steps;

  Derivation assemble(const Sequent& leaf) const {
    Derivation cur{leaf, RuleInstance{.rule = RuleId::Id}, {}};
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      Derivation d{it->node, it->inst, {}};
      if (it->closed_side) {
        d.children.push_back(std::move(cur));
        d.children.push_back(*it->closed_side);
      } else {
        d.children.push_back(std::move(cur));
      }
      cur = std::move(d);
    }
    return cur;
  }
};

// ImpL whose right premise closes by BotL; returns the left premise.
Sequent imp_l_bot(Spine& spine, const Sequent& s, const LabelledFormula& lf, FreshNames& fresh) {
  RuleInstance inst{.rule = RuleId::ImpL, .formulas = {lf}};
  auto prem = apply(s, inst, fresh);
  LabelledFormula bot{lf.label, Formula::bot()};
  if (lf.formula.rhs().op() != Op::Bot) fail(RuleId::ImpL, "expansion expects a negation");
  Derivation side{prem[1], RuleInstance{.rule = RuleId::BotL, .formulas = {bot}}, {}};
  spine.steps.push_back({s, inst, std::move(side)});
  return prem[0];
}

Sequent step1(Spine& spine, const Sequent& s, RuleInstance inst, FreshNames& fresh) {
  auto prem = apply(s, inst, fresh);
  spine.steps.push_back({s, inst, std::nullopt});
  return prem.at(0);
}

}  // namespace

Derivation expand_derived(const Sequent& s, const RuleInstance& inst_in, FreshNames& fresh,
                          Sequent& open_leaf) {
  RuleInstance inst = inst_in;
  Spine spine;
  Sequent cur = s;
  const LabelledFormula& lf = formula_arg(inst, 0);
  switch (inst.rule) {
    case RuleId::BoxL: {
      // []A = <>(A -> false) -> false
      need(s.in_gamma(lf), inst.rule, "principal formula not in antecedent");
      need(match_box(lf.formula) != nullptr && inst.label.has_value(), inst.rule, "bad instance");
      cur = imp_l_bot(spine, cur, lf, fresh);
      const Formula& dia = lf.formula.lhs();
      cur = step1(spine, cur,
                  RuleInstance{.rule = RuleId::DiaR, .formulas = {{lf.label, dia}}, .label = inst.label},
                  fresh);
      cur = step1(spine, cur, RuleInstance{.rule = RuleId::ImpR, .formulas = {{*inst.label, dia.body()}}},
                  fresh);
      break;
    }
    case RuleId::BoxR: {
      need(s.in_delta(lf), inst.rule, "principal formula not in succedent");
      need(match_box(lf.formula) != nullptr, inst.rule, "bad instance");
      cur = step1(spine, cur, RuleInstance{.rule = RuleId::ImpR, .formulas = {lf}}, fresh);
      RuleInstance dl{.rule = RuleId::DiaL, .formulas = {{lf.label, lf.formula.lhs()}},
                      .fresh_labels = inst.fresh_labels};
      cur = step1(spine, cur, dl, fresh);
      Label w = spine.steps.back().inst.fresh_labels.at(0);
      cur = imp_l_bot(spine, cur, {w, lf.formula.lhs().body()}, fresh);
      break;
    }
    case RuleId::ForallL: {
      need(s.in_gamma(lf), inst.rule, "principal formula not in antecedent");
      need(!inst.terms.empty(), inst.rule, "needs a witness term");
      LabelledFormula f = lf;
      for (const auto& t : inst.terms) {
        ForallView fv{};
        need(match_forall(f.formula, fv), inst.rule, "not enough universal quantifiers");
        // (E x. (B -> false)) -> false
        cur = imp_l_bot(spine, cur, f, fresh);
        const Formula& ex = f.formula.lhs();
        cur = step1(spine, cur,
                    RuleInstance{.rule = RuleId::ExistsR, .formulas = {{f.label, ex}}, .terms = {t}},
                    fresh);
        Formula inst_neg = substitute_term(ex.body(), ex.name(), t);
        cur = step1(spine, cur, RuleInstance{.rule = RuleId::ImpR, .formulas = {{f.label, inst_neg}}},
                    fresh);
        f = {f.label, inst_neg.lhs()};
      }
      break;
    }
    case RuleId::ForallR: {
      need(s.in_delta(lf), inst.rule, "principal formula not in succedent");
      ForallView fv{};
      need(match_forall(lf.formula, fv), inst.rule, "principal formula is not universal");
      cur = step1(spine, cur, RuleInstance{.rule = RuleId::ImpR, .formulas = {lf}}, fresh);
      RuleInstance el{.rule = RuleId::ExistsL, .formulas = {{lf.label, lf.formula.lhs()}},
                      .fresh_var = inst.fresh_var};
      cur = step1(spine, cur, el, fresh);
      Term y = *spine.steps.back().inst.fresh_var;
      const Formula& ex = lf.formula.lhs();
      cur = imp_l_bot(spine, cur, {lf.label, substitute_term(ex.body(), ex.name(), y)}, fresh);
      break;
    }
    default:
      fail(inst.rule, "not a derived rule");
  }
  open_leaf = cur;
  return spine.assemble(cur);
}

namespace {

std::string node_context(const Derivation& d) {
  return " at " + to_string(d.applied) + " on " + to_string(d.node);
}

// The expansion leaf may differ from the derived premise only by the
// retained principal (L rules; Gamma is a set, so the ImpL conclusion may
// already contain its principal) and by extra succedent formulas left over
// from the encoding (weakening).
bool leaf_matches(const Sequent& leaf, const Sequent& premise, const RuleInstance& inst) {
  if (leaf.atoms() != premise.atoms()) return false;
  Sequent adjusted = leaf;
  if (inst.rule == RuleId::BoxL || inst.rule == RuleId::ForallL) adjusted.add_gamma(inst.formulas[0]);
  if (adjusted.gamma() != premise.gamma()) return false;
  return std::includes(adjusted.delta().begin(), adjusted.delta().end(), premise.delta().begin(),
                       premise.delta().end());
}

CheckResult check_node(const Derivation& d, std::vector<std::size_t>& path) {
  const RuleInstance& inst = d.applied;
  if (static_cast<int>(d.children.size()) != premise_count(inst.rule)) {
    return {false, "wrong number of premises" + node_context(d), path};
  }
  RuleInstance replay = inst;
  FreshNames fresh;
  fresh.reserve(d.node);
  std::vector<Sequent> prem;
  try {
    prem = apply(d.node, replay, fresh);
  } catch (const NotApplicable& e) {
    return {false, e.what() + node_context(d), path};
  }
  if (replay != inst) return {false, "rule instance is incomplete" + node_context(d), path};
  for (std::size_t i = 0; i < prem.size(); ++i) {
    if (!(prem[i] == d.children[i].node)) {
      return {false, "premise " + std::to_string(i + 1) + " does not match" + node_context(d), path};
    }
  }
  if (is_derived(inst.rule)) {
    Sequent leaf;
    try {
      FreshNames efresh;
      efresh.reserve(d.node);
      Derivation ex = expand_derived(d.node, inst, efresh, leaf);
      (void)ex;
    } catch (const NotApplicable& e) {
      return {false, std::string("core expansion failed: ") + e.what() + node_context(d), path};
    }
    if (!leaf_matches(leaf, prem[0], inst))
      return {false, "derived step disagrees with its core expansion" + node_context(d), path};
  }
  for (std::size_t i = 0; i < d.children.size(); ++i) {
    path.push_back(i);
    auto r = check_node(d.children[i], path);
    if (!r) return r;
    path.pop_back();
  }
  return {};
}

}  // namespace

CheckResult check_subderivation(const Derivation& d) {
  std::vector<std::size_t> path;
  return check_node(d, path);
}

CheckResult check_derivation(const Derivation& d, const TheorySet& theory,
                             const std::optional<Formula>& goal) {
  const Sequent& root = d.node;
  if (!root.atoms().empty()) return {false, "root has relational atoms", {}};
  if (root.delta().size() != 1) return {false, "root succedent is not a single formula", {}};
  Label h = root.delta()[0].label;
  if (h.is_eps()) return {false, "root label is eps", {}};
  if (!is_closed(root.delta()[0].formula)) return {false, "root goal is not closed", {}};
  Formula g = goal ? desugar(*goal) : root.delta()[0].formula;
  if (!(initial_sequent(g, theory, h) == root))
    return {false, "root is not the initial sequent for the goal and theory", {}};
  return check_subderivation(d);
}

std::vector<RuleId> leaf_rules(const Derivation& d) {
  std::vector<RuleId> out;
  std::vector<const Derivation*> stack{&d};
  while (!stack.empty()) {
    const Derivation* cur = stack.back();
    stack.pop_back();
    if (cur->children.empty()) out.push_back(cur->applied.rule);
    for (auto it = cur->children.rbegin(); it != cur->children.rend(); ++it) stack.push_back(&*it);
  }
  return out;
}

}  // namespace foasl
