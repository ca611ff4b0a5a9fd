#include "foasl/prover.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <stdexcept>

#include "prover_internal.hpp"

namespace foasl {

namespace detail {
namespace {

constexpr int kSaturationCap = 4000;
constexpr std::size_t kTuples = 24;

using Clock = std::chrono::steady_clock;

struct Exhausted {};

struct Det {
  std::string macro;
  std::function<void(Builder&, std::size_t)> run;
};

Det core(RuleInstance r) {
  return {"", [r](Builder& b, std::size_t i) { b.step(i, r); }};
}

RuleInstance rule(RuleId r, std::vector<LabelledFormula> fs = {}, std::vector<RelAtom> as = {}) {
  return RuleInstance{.rule = r, .formulas = std::move(fs), .atoms = std::move(as)};
}

std::string key_of(const std::vector<Label>& v) {
  std::string out = "{";
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + to_string(v[k]);
  return out + "}";
}

std::string key_of(const std::vector<Term>& v) {
  std::string out = "(";
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + to_string(v[k]);
  return out + ")";
}

// First pair of points-to formulas in Gamma satisfying pred.
template <class P>
std::optional<std::pair<LabelledFormula, LabelledFormula>> pto_pair(const Sequent& s, P pred) {
  const auto& g = s.gamma();
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (g[x].formula.op() != Op::PointsTo) continue;
    for (std::size_t y = x + 1; y < g.size(); ++y)
      if (g[y].formula.op() == Op::PointsTo && pred(g[x], g[y])) return std::pair{g[x], g[y]};
  }
  return std::nullopt;
}

std::optional<LabelledFormula> pto_at(const Sequent& s, Label l) {
  for (const auto& lf : s.gamma())
    if (lf.label == l && lf.formula.op() == Op::PointsTo) return lf;
  return std::nullopt;
}

// A label occurring twice among the leaves of some decomposition tree.
std::optional<Det> duplicate_leaf(const Sequent& s) {
  Oracle o(s);
  for (Label y : o.labels()) {
    for (const auto& t : o.trees(y)) {
      auto leaves = t.leaves();
      for (std::size_t x = 0; x < leaves.size(); ++x)
        for (std::size_t z = x + 1; z < leaves.size(); ++z) {
          if (leaves[x] != leaves[z]) continue;
          std::vector<bool> sel(leaves.size(), false);
          sel[x] = sel[z] = true;
          return Det{"DupLeaf", [t, sel](Builder& b, std::size_t i) { realize(b, i, t, sel); }};
        }
    }
  }
  return std::nullopt;
}

std::optional<Det> next_det(const Env& env, const Sequent& s, const Ctx& ctx) {
  if (closure_check(s)) return Det{"", [](Builder& b, std::size_t i) { b.close(i); }};
  for (const auto& lf : s.delta())
    if (lf.formula.op() == Op::Eq && lf.formula.args()[0] == lf.formula.args()[1])
      return Det{"EqReflClose", [](Builder& b, std::size_t i) { close_leaf(b, i); }};

  for (const auto& a : s.atoms())
    if (a.is_sim()) return core(rule(RuleId::SimSubst, {}, {a}));
  for (const auto& lf : s.gamma())
    if (lf.formula.op() == Op::Eq) return core(rule(RuleId::EqSubst, {lf}));

  for (const auto& lf : s.gamma()) {
    if (lf.formula.op() != Op::PointsTo || !lf.label.is_eps()) continue;
    int idx = env.derived(1, lf.formula.arity(), s);
    if (idx >= 0)
      return Det{"PtoUnit", [&env, idx, lf](Builder& b, std::size_t i) { pto_l1(b, i, env, idx, lf); }};
  }
  for (const auto& a : s.atoms()) {
    if (a.left == a.right) continue;
    auto f1 = pto_at(s, a.left);
    auto f2 = pto_at(s, a.right);
    if (!f1 || !f2) continue;
    for (const auto& x : s.gamma()) {
      if (x.label != a.left || x.formula.op() != Op::PointsTo) continue;
      for (const auto& z : s.gamma()) {
        if (z.label != a.right || z.formula.op() != Op::PointsTo) continue;
        if (x.formula.arity() != z.formula.arity() || x.formula.args()[0] != z.formula.args()[0]) continue;
        int idx = env.derived(3, x.formula.arity(), s);
        if (idx >= 0)
          return Det{"PtoDisjoint", [&env, idx, a, x, z](Builder& b, std::size_t i) {
                       pto_l3(b, i, env, idx, a, x, z);
                     }};
      }
    }
  }

  for (const auto& lf : s.gamma()) {
    switch (lf.formula.op()) {
      case Op::MTrue: return core(rule(RuleId::MTrueL, {lf}));
      case Op::Star: return core(rule(RuleId::StarL, {lf}));
      case Op::Exists: return core(rule(RuleId::ExistsL, {lf}));
      case Op::Dia: return core(rule(RuleId::DiaL, {lf}));
      default: break;
    }
  }
  for (const auto& lf : s.delta()) {
    if (lf.formula.op() == Op::Wand) return core(rule(RuleId::WandR, {lf}));
    if (lf.formula.op() != Op::Imp) continue;
    ForallView fv{};
    if (match_box(lf.formula)) return core(rule(RuleId::BoxR, {lf}));
    if (match_forall(lf.formula, fv)) return core(rule(RuleId::ForallR, {lf}));
    return core(rule(RuleId::ImpR, {lf}));
  }

  for (const auto& a : s.atoms())
    if (a.result.is_eps() && !a.left.is_eps() && !a.right.is_eps())
      return Det{"IndivisibleUnit", [a](Builder& b, std::size_t i) { indivisible_unit(b, i, a); }};
  for (const auto& a : s.atoms())
    if (a.left == a.right && !a.left.is_eps()) return core(rule(RuleId::D, {}, {a}));
  for (const auto& a : s.atoms())
    if (!a.is_sim() && !(a.right.is_eps() && a.left == a.result) && !s.has_atom({a.right, a.left, a.result}))
      return core(rule(RuleId::E, {}, {a}));
  const auto& atoms = s.atoms();
  for (std::size_t x = 0; x < atoms.size(); ++x)
    for (std::size_t z = 0; z < atoms.size(); ++z) {
      if (x == z) continue;
      const auto& a1 = atoms[x];
      const auto& a2 = atoms[z];
      if (a1.left == a2.left && a1.right == a2.right) return core(rule(RuleId::P, {}, {a1, a2}));
      if (a1.left == a2.left && a1.result == a2.result) return core(rule(RuleId::C, {}, {a1, a2}));
    }

  if (auto p = pto_pair(s, [](const auto& x, const auto& z) { return x.formula == z.formula; }))
    return core(rule(RuleId::PtoInj, {p->first, p->second}));
  if (auto p = pto_pair(s, [&](const auto& x, const auto& z) {
        return x.label == z.label && x.formula.arity() == z.formula.arity() &&
               env.derived(4, x.formula.arity(), s) >= 0;
      })) {
    int idx = env.derived(4, p->first.formula.arity(), s);
    auto [f1, f2] = *p;
    return Det{"PtoFunctional", [&env, idx, f1, f2](Builder& b, std::size_t i) { pto_l4(b, i, env, idx, f1, f2); }};
  }
  for (const auto& a : s.atoms()) {
    if (a.left.is_eps() || a.right.is_eps()) continue;
    auto f = pto_at(s, a.result);
    if (!f) continue;
    int idx = env.derived(2, f->formula.arity(), s);
    if (idx >= 0)
      return Det{"PtoAtomic", [&env, idx, a, f](Builder& b, std::size_t i) { pto_l2(b, i, env, idx, a, *f); }};
  }

  for (const auto& lf : s.gamma())
    if (lf.formula.op() == Op::Imp && !retained_shape(lf.formula) && !ctx.junk_gamma.count(lf))
      return core(rule(RuleId::ImpL, {lf}));

  return duplicate_leaf(s);
}

// ---- generative candidates ----

struct Cand {
  Candidate info;
  std::function<void(Builder&, std::size_t)> run;
};

bool world_independent(const Formula& f) {
  switch (f.op()) {
    case Op::Dia:
    case Op::Bot:
      return true;
    case Op::Imp:
      return world_independent(f.lhs()) && world_independent(f.rhs());
    case Op::Exists:
      return world_independent(f.body());
    default:
      return false;
  }
}

// Cost of assuming an instance that ImpL will split.
int instance_cost(const Oracle& o, Label w, const Formula& inst, int otherwise) {
  Formula a = inst, c = inst;
  if (inst.op() == Op::Imp && !match_and(inst, a, c) && !match_or(inst, a, c) && inst.rhs().op() != Op::Bot)
    return o.plausible_at(w, inst.lhs()) ? 1 : -1;
  if (inst.op() == Op::Imp && inst.rhs().op() == Op::Bot && !match_and(inst, a, c))
    return o.plausible_at(w, inst.lhs()) ? 1 : -1;
  return otherwise;
}

std::vector<Term> universe(const Sequent& s) {
  auto t = s.terms();
  return {t.begin(), t.end()};
}

std::vector<Cand> candidates(const Env& env, const Sequent& s, const Ctx& ctx) {
  std::vector<Cand> out;
  std::set<std::string> keys;
  auto add = [&](std::string key, int cost, RuleId head, std::function<void(Builder&, std::size_t)> run) {
    if (cost < 0 || ctx.excluded.count(key) || !keys.insert(key).second) return;
    out.push_back({{std::move(key), cost, head}, std::move(run)});
  };
  Oracle o(s);
  const auto terms = universe(s);

  // WandL
  for (const auto& lf : s.gamma()) {
    if (lf.formula.op() != Op::Wand || ctx.junk_gamma.count(lf)) continue;
    const Label h0 = lf.label;
    const Formula& A = lf.formula.lhs();
    const std::string base = "WandL " + to_string(lf) + " ";
    auto direct = [&](RelAtom a, int implausible) {
      const int cost = o.plausible_at(a.left, A) ? 1 : implausible;
      add(base + to_string(a), cost, RuleId::WandL, [lf, a](Builder& b, std::size_t i) {
        ensure_atom(b, i, a);
        b.step(i, rule(RuleId::WandL, {lf}, {a}));
      });
    };
    direct(RelAtom::sim(h0, h0), 3);
    for (const auto& a : s.atoms())
      if (a.right == h0 && !a.left.is_eps()) direct(a, 3);
    if (h0.is_eps())
      for (Label y : o.labels())
        if (!y.is_eps()) direct({y, h0, y}, -1);
    for (Label y : o.labels()) {
      if (y == h0 || y.is_eps()) continue;
      for (const auto& t : o.trees(y)) {
        auto leaves = t.leaves();
        auto pos = std::find(leaves.begin(), leaves.end(), h0);
        if (pos == leaves.end() || leaves.size() < 3) continue;
        std::vector<Label> rest = leaves;
        rest.erase(rest.begin() + (pos - leaves.begin()));
        auto existing = o.label_of(rest);
        if (existing && s.has_atom({*existing, h0, y})) continue;
        if (!o.plausible(rest, A)) continue;
        std::vector<bool> sel(leaves.size(), false);
        sel[pos - leaves.begin()] = true;
        add(base + to_string(y) + " " + key_of(sorted_multiset(rest)), 1, RuleId::WandL,
            [lf, t, sel](Builder& b, std::size_t i) {
              auto [x1, x2] = realize(b, i, t, sel);
              ensure_atom(b, i, {x2, x1, t.nodes[0].label});
              b.step(i, rule(RuleId::WandL, {lf}, {{x2, x1, t.nodes[0].label}}));
            });
      }
    }
  }

  // StarR
  for (const auto& lf : s.delta()) {
    if (lf.formula.op() != Op::Star || ctx.junk_delta.count(lf)) continue;
    const Label h0 = lf.label;
    std::vector<Tree> trees = o.trees(h0);
    if (h0.is_eps()) trees = {Tree{{{h0, -1, -1}}}};
    for (const auto& t : trees) {
      auto leaves = t.leaves();
      if (h0.is_eps()) leaves.clear();
      const std::size_t n = leaves.size();
      for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::vector<Label> x, z;
        std::vector<bool> sel(n);
        for (std::size_t k = 0; k < n; ++k) {
          sel[k] = (mask >> k) & 1;
          (sel[k] ? x : z).push_back(leaves[k]);
        }
        const bool direct = n <= 2;
        int cost = o.plausible(x, lf.formula.lhs()) && o.plausible(z, lf.formula.rhs()) ? 1 : (direct ? 3 : -1);
        add("StarR " + to_string(lf) + " " + key_of(sorted_multiset(x)) + "|" + key_of(sorted_multiset(z)), cost,
            RuleId::StarR, [lf, t, sel](Builder& b, std::size_t i) {
              std::pair<Label, Label> p{Label::eps(), Label::eps()};
              if (!lf.label.is_eps()) p = realize(b, i, t, sel);
              else ensure_atom(b, i, RelAtom::sim(Label::eps(), Label::eps()));
              b.step(i, rule(RuleId::StarR, {lf}, {{p.first, p.second, lf.label}}));
            });
      }
    }
  }

  // ExistsR, with all leading quantifiers at once
  for (const auto& lf : s.delta()) {
    if (lf.formula.op() != Op::Exists || ctx.junk_delta.count(lf)) continue;
    Prefix p = exists_prefix(lf.formula);
    for (const auto& tuple : instantiations(p.vars, p.body, s, terms, kTuples)) {
      Formula inst = p.body;
      for (std::size_t k = p.vars.size(); k-- > 0;) inst = substitute_term(inst, p.vars[k], tuple[k]);
      const int cost = o.plausible_at(lf.label, inst) ? 1 : 3;
      add("ExistsR " + to_string(lf) + " " + key_of(tuple), cost, RuleId::ExistsR,
          [lf, tuple](Builder& b, std::size_t i) {
            LabelledFormula cur = lf;
            for (const auto& t : tuple) {
              RuleInstance r{.rule = RuleId::ExistsR, .formulas = {cur}, .terms = {t}};
              b.step(i, r);
              cur = {cur.label, substitute_term(cur.formula.body(), cur.formula.name(), t)};
              if (cur.formula.op() == Op::Exists) b.ctx(i).junk_delta.insert(cur);
            }
          });
    }
  }

  // ForallL on universal formulas of the goal
  for (const auto& lf : s.gamma()) {
    if (ctx.junk_gamma.count(lf) || match_box(lf.formula)) continue;
    Prefix p = forall_prefix(lf.formula);
    if (p.vars.empty()) continue;
    for (const auto& tuple : instantiations(p.vars, p.body, s, terms, kTuples)) {
      Formula inst = p.body;
      for (std::size_t k = p.vars.size(); k-- > 0;) inst = substitute_term(inst, p.vars[k], tuple[k]);
      const int cost = instance_cost(o, lf.label, inst, 1);
      RuleInstance r{.rule = RuleId::ForallL, .formulas = {lf}, .terms = tuple};
      add("ForallL " + to_string(lf) + " " + key_of(tuple), cost, RuleId::ForallL,
          [r](Builder& b, std::size_t i) { b.step(i, r); });
    }
  }

  // DiaR
  for (const auto& lf : s.delta()) {
    if (lf.formula.op() != Op::Dia || ctx.junk_delta.count(lf)) continue;
    for (Label l : o.labels()) {
      RuleInstance r{.rule = RuleId::DiaR, .formulas = {lf}, .label = l};
      add("DiaR " + to_string(lf) + " " + to_string(l), o.plausible_at(l, lf.formula.body()) ? 1 : 3,
          RuleId::DiaR, [r](Builder& b, std::size_t i) { b.step(i, r); });
    }
  }

  // instances of boxed formulas (theory axioms and boxes of the goal)
  for (const auto& lf : s.gamma()) {
    const Formula* body = match_box(lf.formula);
    if (!body || ctx.junk_gamma.count(lf) || env.skip_generic(lf.formula)) continue;
    Prefix p = forall_prefix(*body);
    std::vector<Label> worlds = world_independent(p.body) ? std::vector<Label>{lf.label} : o.labels();
    std::vector<std::vector<Term>> tuples{{}};
    if (!p.vars.empty()) tuples = instantiations(p.vars, p.body, s, terms, kTuples);
    for (Label w : worlds)
      for (const auto& tuple : tuples) {
        Formula inst = p.body;
        for (std::size_t k = p.vars.size(); k-- > 0;) inst = substitute_term(inst, p.vars[k], tuple[k]);
        if (s.in_gamma({w, inst})) continue;
        const int cost = instance_cost(o, w, inst, 2);
        const Formula box_body = *body;
        add("Inst " + to_string(lf) + " " + to_string(w) + " " + key_of(tuple), cost, RuleId::BoxL,
            [lf, w, tuple, box_body](Builder& b, std::size_t i) {
              LabelledFormula at{w, box_body};
              if (!b.leaf(i).in_gamma(at)) {
                RuleInstance r{.rule = RuleId::BoxL, .formulas = {lf}, .label = w};
                b.step(i, r);
              }
              if (tuple.empty()) return;
              b.ctx(i).junk_gamma.insert(at);
              RuleInstance r{.rule = RuleId::ForallL, .formulas = {at}, .terms = tuple};
              b.step(i, r);
            });
      }
  }

  // heap extension next to labels carrying a magic wand
  for (std::size_t k : env.theory.arities) {
    int idx = env.derived(5, k, s);
    if (idx < 0) continue;
    std::set<Label> wands, sites;
    for (const auto& lf : s.gamma())
      if (lf.formula.op() == Op::Wand && !ctx.junk_gamma.count(lf)) wands.insert(lf.label);
    for (Label y : o.labels())
      for (const auto& t : o.trees(y))
        for (Label l : t.leaves())
          if (wands.count(l)) sites.insert(y);
    for (Label h0 : sites)
      add("HE " + std::to_string(k) + " " + to_string(h0), 1, RuleId::WandR,
          [&env, idx, h0](Builder& b, std::size_t i) { heap_extension(b, i, env, idx, h0); });
  }

  // cross split of two decompositions of the same label
  const auto& atoms = s.atoms();
  for (std::size_t x = 0; x < atoms.size(); ++x)
    for (std::size_t z = x + 1; z < atoms.size(); ++z) {
      const auto& a1 = atoms[x];
      const auto& a2 = atoms[z];
      if (a1.is_sim() || a2.is_sim() || a1.result != a2.result) continue;
      if (!(a1.left < a1.right) || !(a2.left < a2.right)) continue;
      std::string key = "CS " + to_string(a1) + " " + to_string(a2);
      if (ctx.split.count(key)) continue;
      bool heapy = false;
      for (Label l : {a1.left, a1.right, a2.left, a2.right}) heapy |= pto_at(s, l).has_value();
      add(key, heapy ? 1 : 3, RuleId::CS, [a1, a2, key](Builder& b, std::size_t i) {
        b.ctx(i).split.insert(key);
        b.step(i, rule(RuleId::CS, {}, {a1, a2}));
      });
    }

  // totality of points-to for atoms the sequent mentions
  for (const auto& f : ground_atoms(s)) {
    if (f.op() != Op::PointsTo) continue;
    bool present = false;
    for (const auto& lf : s.gamma()) present |= lf.formula == f;
    if (present) continue;
    RuleInstance r{.rule = RuleId::PtoTotal, .terms = f.args()};
    add("PtoTotal " + to_string(f), 2, RuleId::PtoTotal, [r](Builder& b, std::size_t i) { b.step(i, r); });
  }

  std::stable_sort(out.begin(), out.end(), [](const Cand& a, const Cand& b) { return a.info.cost < b.info.cost; });
  return out;
}

class Search {
 public:
  Search(const Env& env, const SearchBudget& budget, FreshNames& fresh, ProofStats& stats, Clock::time_point start)
      : env_(env), budget_(budget), fresh_(fresh), stats_(stats), start_(start) {}

  bool cut = false;

  std::optional<Derivation> prove(const Sequent& s, const Ctx& ctx, int budget) {
    Builder b(s, ctx, fresh_);
    std::size_t j = 0;
    int steps = 0;
    while (j < b.num_open()) {
      auto d = next_det(env_, b.leaf(j), b.ctx(j));
      if (!d) {
        ++j;
        continue;
      }
      if (++steps > kSaturationCap) return std::nullopt;
      ++stats_.saturation_steps;
      if ((stats_.saturation_steps & 255) == 0) check_time();
      try {
        d->run(b, j);
      } catch (const NotApplicable&) {
        return std::nullopt;
      }
    }
    std::vector<Derivation> proofs;
    for (std::size_t k = 0; k < b.num_open(); ++k) {
      auto r = generative(b.leaf(k), b.ctx(k), budget);
      if (!r) return std::nullopt;
      proofs.push_back(std::move(*r));
    }
    return b.assemble(std::move(proofs));
  }

 private:
  void check_time() {
    const double elapsed = std::chrono::duration<double>(Clock::now() - start_).count();
    if (elapsed > budget_.wall_timeout) throw Exhausted{};
  }

  std::optional<Derivation> generative(const Sequent& s, const Ctx& ctx, int budget) {
    if (budget <= 0) {
      cut = true;
      return std::nullopt;
    }
    auto cands = candidates(env_, s, ctx);
    std::vector<std::string> tried;
    for (auto& c : cands) {
      if (c.info.cost > budget) {
        cut = true;
        continue;
      }
      if (++stats_.generative_steps > budget_.max_generative_steps) throw Exhausted{};
      check_time();
      Builder b(s, ctx, fresh_);
      try {
        c.run(b, 0);
      } catch (const NotApplicable&) {
        continue;
      }
      for (std::size_t k = 0; k < b.num_open(); ++k) b.ctx(k).excluded.insert(tried.begin(), tried.end());
      tried.push_back(c.info.key);
      std::vector<Derivation> proofs;
      bool ok = true;
      for (std::size_t k = 0; k < b.num_open() && ok; ++k) {
        auto r = prove(b.leaf(k), b.ctx(k), budget - c.info.cost);
        if (r) proofs.push_back(std::move(*r));
        else ok = false;
      }
      if (ok) return b.assemble(std::move(proofs));
    }
    return std::nullopt;
  }

  const Env& env_;
  const SearchBudget& budget_;
  FreshNames& fresh_;
  ProofStats& stats_;
  Clock::time_point start_;
};

}  // namespace
}  // namespace detail

ProofResult prove(const Formula& goal, const TheorySet& theory, const SearchBudget& budget,
                  const ProverOptions& opts) {
  if (budget.max_generative_steps == 0 || budget.max_depth <= 0 || !(budget.wall_timeout > 0))
    throw std::invalid_argument("search budget must be positive");
  const auto start = detail::Clock::now();
  const Sequent root = initial_sequent(universal_closure(goal), theory, opts.root);
  detail::Env env(theory, opts);
  ProofResult out;
  FreshNames base;
  base.reserve(root);
  for (int k = 1; k <= budget.max_depth; ++k) {
    ++out.stats.rounds;
    FreshNames fresh = base;
    detail::Search search(env, budget, fresh, out.stats, start);
    try {
      auto d = search.prove(root, {}, k);
      if (d) {
        out.proved = true;
        out.derivation = std::move(d);
        out.stats.final_depth = k;
        break;
      }
    } catch (const detail::Exhausted&) {
      out.budget_exhausted = true;
      break;
    }
    if (!search.cut) break;
    if (k == budget.max_depth) out.budget_exhausted = true;
  }
  out.stats.seconds = std::chrono::duration<double>(detail::Clock::now() - start).count();
  return out;
}

SearchStep search_step(const Sequent& s, const TheorySet& theory, const ProverOptions& opts) {
  detail::Env env(theory, opts);
  SearchStep out;
  detail::Ctx ctx;
  if (auto d = detail::next_det(env, s, ctx)) {
    FreshNames fresh;
    fresh.reserve(s);
    detail::Builder b(s, ctx, fresh);
    d->run(b, 0);
    out.saturation = b.root_rule();
    out.macro = d->macro;
    return out;
  }
  for (const auto& c : detail::candidates(env, s, ctx)) out.generative.push_back(c.info);
  return out;
}

}  // namespace foasl
