#include <algorithm>
#include <functional>
#include <map>

#include "prover_internal.hpp"

namespace foasl::detail {

namespace {

constexpr int kTreeDepth = 4;
constexpr std::size_t kTreesPerLabel = 24;
constexpr std::size_t kMaxLeaves = 8;
constexpr std::size_t kMaxFlattenings = 32;

Tree single(Label l) { return Tree{{{l, -1, -1}}}; }

// Joins two trees under a new root labelled y.
Tree join(Label y, const Tree& a, const Tree& b) {
  Tree t;
  t.nodes.push_back({y, -1, -1});
  auto graft = [&](const Tree& sub) {
    const int offset = static_cast<int>(t.nodes.size());
    for (const auto& n : sub.nodes)
      t.nodes.push_back({n.label, n.left < 0 ? -1 : n.left + offset, n.right < 0 ? -1 : n.right + offset});
    return offset;
  };
  t.nodes[0].left = graft(a);
  t.nodes[0].right = graft(b);
  return t;
}

}  // namespace

std::vector<int> Tree::leaf_nodes() const {
  std::vector<int> out;
  std::function<void(int)> walk = [&](int n) {
    if (nodes[n].left < 0) {
      out.push_back(n);
      return;
    }
    walk(nodes[n].left);
    walk(nodes[n].right);
  };
  walk(0);
  return out;
}

std::vector<Label> Tree::leaves() const {
  std::vector<Label> out;
  for (int n : leaf_nodes()) out.push_back(nodes[n].label);
  return out;
}

std::vector<Label> sorted_multiset(std::vector<Label> v) {
  std::sort(v.begin(), v.end());
  return v;
}

Oracle::Oracle(const Sequent& s) : s_(s) {
  auto ls = s.labels();
  ls.insert(Label::eps());
  labels_.assign(ls.begin(), ls.end());

  std::map<Label, std::vector<RelAtom>> by_result;
  for (const auto& a : s.atoms())
    if (!a.left.is_eps() && !a.right.is_eps() && a.left != a.result && a.right != a.result)
      by_result[a.result].push_back(a);

  std::set<Label> path;
  std::function<std::vector<Tree>(Label, int)> grow = [&](Label y, int depth) {
    std::vector<Tree> out{single(y)};
    std::set<std::vector<Label>> seen{{y}};
    auto it = by_result.find(y);
    if (depth == 0 || it == by_result.end()) return out;
    path.insert(y);
    for (const auto& a : it->second) {
      if (path.count(a.left) || path.count(a.right)) continue;
      auto ta = grow(a.left, depth - 1);
      auto tb = grow(a.right, depth - 1);
      for (const auto& x : ta)
        for (const auto& z : tb) {
          if (out.size() >= kTreesPerLabel) break;
          Tree t = join(y, x, z);
          auto key = sorted_multiset(t.leaves());
          if (key.size() > kMaxLeaves || !seen.insert(key).second) continue;
          out.push_back(std::move(t));
        }
    }
    path.erase(y);
    return out;
  };

  for (Label l : labels_) {
    if (l.is_eps()) continue;
    trees_[l] = grow(l, kTreeDepth);
    for (const auto& t : trees_[l]) by_leaves_.emplace(sorted_multiset(t.leaves()), l);
  }
  by_leaves_.emplace(std::vector<Label>{}, Label::eps());
}

const std::vector<Tree>& Oracle::trees(Label y) const {
  static const std::vector<Tree> none;
  auto it = trees_.find(y);
  return it == trees_.end() ? none : it->second;
}

std::optional<Label> Oracle::label_of(const std::vector<Label>& leaves) const {
  auto it = by_leaves_.find(sorted_multiset(leaves));
  if (it == by_leaves_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::vector<Label>> Oracle::flattenings(const std::vector<Label>& leaves) const {
  std::vector<std::vector<Label>> out{{}};
  for (Label l : leaves) {
    std::vector<std::vector<Label>> next;
    for (const auto& t : trees(l))
      for (const auto& prefix : out) {
        if (next.size() >= kMaxFlattenings) break;
        auto v = prefix;
        auto tl = t.leaves();
        v.insert(v.end(), tl.begin(), tl.end());
        next.push_back(std::move(v));
      }
    if (next.empty())
      for (auto prefix : out) {
        prefix.push_back(l);
        next.push_back(std::move(prefix));
      }
    out = std::move(next);
  }
  return out;
}

bool is_top(const Formula& f) {
  return f.op() == Op::Imp && f.lhs().op() == Op::Bot && f.rhs().op() == Op::Bot;
}

bool match_and(const Formula& f, Formula& a, Formula& b) {
  const Formula* x = match_neg(f);
  if (!x || x->op() != Op::Imp) return false;
  const Formula* y = match_neg(x->rhs());
  if (!y) return false;
  a = x->lhs();
  b = *y;
  return true;
}

bool match_or(const Formula& f, Formula& a, Formula& b) {
  if (f.op() != Op::Imp || f.rhs().op() == Op::Bot) return false;
  const Formula* x = match_neg(f.lhs());
  if (!x) return false;
  a = *x;
  b = f.rhs();
  return true;
}

bool Oracle::plausible(const std::vector<Label>& leaves, const Formula& f, int depth) const {
  Formula a = f, b = f;
  switch (f.op()) {
    case Op::MTrue:
      return leaves.empty();
    case Op::Bot:
      return false;
    case Op::Eq:
      if (f.args()[0] == f.args()[1]) return true;
      [[fallthrough]];
    case Op::Pred:
    case Op::PointsTo: {
      auto l = label_of(leaves);
      return l && s_.in_gamma({*l, f});
    }
    case Op::Star: {
      if (depth <= 0) return true;
      for (const auto& flat : flattenings(leaves)) {
        const std::size_t n = flat.size();
        if (n > kMaxLeaves) continue;
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
          std::vector<Label> x, y;
          for (std::size_t k = 0; k < n; ++k) ((mask >> k) & 1 ? x : y).push_back(flat[k]);
          if (plausible(x, f.lhs(), depth - 1) && plausible(y, f.rhs(), depth - 1)) return true;
        }
      }
      return false;
    }
    case Op::Dia: {
      if (depth <= 0) return true;
      for (Label l : labels_)
        if (plausible_at(l, f.body())) return true;
      return false;
    }
    case Op::Imp:
      if (is_top(f)) return true;
      if (match_and(f, a, b)) return plausible(leaves, a, depth) && plausible(leaves, b, depth);
      if (match_or(f, a, b)) return plausible(leaves, a, depth) || plausible(leaves, b, depth);
      if (f.rhs().op() == Op::Bot && f.lhs().op() == Op::MTrue) return !leaves.empty();
      return true;
    default:
      return true;
  }
}

bool Oracle::plausible_at(Label l, const Formula& f) const {
  return plausible(l.is_eps() ? std::vector<Label>{} : std::vector<Label>{l}, f);
}

Prefix forall_prefix(const Formula& f) {
  Prefix p{{}, f};
  ForallView fv{};
  while (match_forall(p.body, fv)) {
    p.vars.push_back(*fv.var);
    Formula next = *fv.body;
    p.body = next;
  }
  return p;
}

Prefix exists_prefix(const Formula& f) {
  Prefix p{{}, f};
  while (p.body.op() == Op::Exists) {
    p.vars.push_back(p.body.name());
    Formula next = p.body.body();
    p.body = next;
  }
  return p;
}

bool retained_shape(const Formula& f) {
  ForallView fv{};
  return match_box(f) != nullptr || match_forall(f, fv);
}

namespace {

// One argument position of a pattern atom.
struct Slot {
  enum Kind { Wild, Fixed, Var } kind = Wild;
  Term term;  // Fixed: the term; Var: the variable
};

struct Pattern {
  Op op;
  std::string name;
  std::vector<Slot> slots;
};

void collect_patterns(const Formula& f, const std::set<std::string>& vars, std::set<std::string>& bound,
                      std::vector<Pattern>& out) {
  switch (f.op()) {
    case Op::Pred:
    case Op::PointsTo:
    case Op::Eq: {
      Pattern p{f.op(), f.name(), {}};
      bool useful = false;
      for (const auto& t : f.args()) {
        if (t.is_var() && bound.count(t.name)) {
          p.slots.push_back({Slot::Wild, t});
        } else if (t.is_var() && vars.count(t.name)) {
          p.slots.push_back({Slot::Var, t});
          useful = true;
        } else {
          p.slots.push_back({Slot::Fixed, t});
        }
      }
      if (useful) out.push_back(std::move(p));
      return;
    }
    case Op::Exists:
    case Op::Forall: {
      const bool fresh = bound.insert(f.name()).second;
      collect_patterns(f.body(), vars, bound, out);
      if (fresh) bound.erase(f.name());
      return;
    }
    default:
      for (std::size_t k = 0; k < f.num_kids(); ++k) collect_patterns(k == 0 ? f.lhs() : f.rhs(), vars, bound, out);
  }
}

void collect_ground(const Formula& f, std::set<std::string>& bound, std::set<Formula>& out) {
  switch (f.op()) {
    case Op::Pred:
    case Op::PointsTo:
    case Op::Eq:
      for (const auto& t : f.args())
        if (t.is_var() && bound.count(t.name)) return;
      out.insert(f);
      return;
    case Op::Exists:
    case Op::Forall: {
      const bool fresh = bound.insert(f.name()).second;
      collect_ground(f.body(), bound, out);
      if (fresh) bound.erase(f.name());
      return;
    }
    default:
      for (std::size_t k = 0; k < f.num_kids(); ++k) collect_ground(k == 0 ? f.lhs() : f.rhs(), bound, out);
  }
}

using Binding = std::map<std::string, Term>;

bool unify_args(const std::vector<Slot>& slots, const std::vector<Term>& args, Binding& b) {
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const Slot& s = slots[k];
    if (s.kind == Slot::Fixed && s.term != args[k]) return false;
    if (s.kind == Slot::Var) {
      auto [it, inserted] = b.emplace(s.term.name, args[k]);
      if (!inserted && it->second != args[k]) return false;
    }
  }
  return true;
}

}  // namespace

std::set<Formula> ground_atoms(const Sequent& s) {
  std::set<Formula> out;
  std::set<std::string> bound;
  for (const auto* side : {&s.gamma(), &s.delta()})
    for (const auto& lf : *side) collect_ground(lf.formula, bound, out);
  return out;
}

std::vector<std::vector<Term>> instantiations(const std::vector<std::string>& vars, const Formula& body,
                                              const Sequent& s, const std::vector<Term>& universe,
                                              std::size_t cap) {
  std::set<std::string> var_set(vars.begin(), vars.end());
  std::set<std::string> bound;
  std::vector<Pattern> patterns;
  collect_patterns(body, var_set, bound, patterns);
  const std::set<Formula> ground = ground_atoms(s);

  // best number of matched pattern atoms per partial binding
  std::map<Binding, int> found;
  std::size_t nodes = 0;
  constexpr std::size_t kNodeCap = 5000;
  std::function<void(std::size_t, Binding&, int)> dfs = [&](std::size_t k, Binding& b, int matched) {
    if (++nodes > kNodeCap) return;
    if (k == patterns.size()) {
      auto& best = found[b];
      best = std::max(best, matched);
      return;
    }
    const Pattern& p = patterns[k];
    for (const auto& g : ground) {
      if (g.op() != p.op || g.name() != p.name || g.arity() != p.slots.size()) continue;
      std::vector<std::vector<Term>> orders{g.args()};
      if (g.op() == Op::Eq) orders.push_back({g.args()[1], g.args()[0]});
      for (const auto& args : orders) {
        Binding nb = b;
        if (unify_args(p.slots, args, nb)) dfs(k + 1, nb, matched + 1);
      }
    }
    dfs(k + 1, b, matched);
  };
  Binding empty;
  dfs(0, empty, 0);

  std::vector<Term> fill = universe;
  if (fill.empty()) fill.push_back(Term::var("_u"));

  std::vector<std::pair<Binding, int>> order(found.begin(), found.end());
  std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
  std::vector<std::pair<int, std::vector<Term>>> ranked;
  std::set<std::vector<Term>> seen;
  for (const auto& [b, matched] : order) {
    // complete the open variables from the universe
    std::vector<std::vector<Term>> partial{{}};
    for (const auto& v : vars) {
      std::vector<std::vector<Term>> next;
      auto it = b.find(v);
      for (const auto& pre : partial) {
        if (it != b.end()) {
          auto t = pre;
          t.push_back(it->second);
          next.push_back(std::move(t));
          continue;
        }
        for (const auto& u : fill) {
          if (next.size() >= cap * 4) break;
          auto t = pre;
          t.push_back(u);
          next.push_back(std::move(t));
        }
      }
      partial = std::move(next);
    }
    for (auto& t : partial)
      if (seen.insert(t).second) ranked.push_back({matched, std::move(t)});
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  std::vector<std::vector<Term>> out;
  for (auto& r : ranked) {
    if (out.size() >= cap) break;
    out.push_back(std::move(r.second));
  }
  return out;
}

Env::Env(const TheorySet& t, const ProverOptions& o) : theory(t), opts(o) {
  for (const auto& f : t.formulas) {
    bodies.push_back(f);
    boxed.push_back(desugar(Formula::box(f)));
  }
}

int Env::index(int number, std::size_t arity) const { return theory.find(number, arity); }

std::optional<LabelledFormula> Env::locate(const Sequent& s, int idx) const {
  if (idx < 0) return std::nullopt;
  for (const auto& lf : s.gamma())
    if (lf.formula == boxed[idx]) return lf;
  return std::nullopt;
}

int Env::derived(int number, std::size_t arity, const Sequent& s) const {
  if (!opts.derived_rules) return -1;
  int idx = index(number, arity);
  return locate(s, idx) ? idx : -1;
}

bool Env::skip_generic(const Formula& f) const {
  for (std::size_t i = 0; i < boxed.size(); ++i) {
    if (boxed[i] != f) continue;
    const int n = theory.tags[i].number;
    if (n == 6) return true;
    if (opts.derived_rules && n >= 1 && n <= 5) return true;
  }
  return false;
}

}  // namespace foasl::detail
