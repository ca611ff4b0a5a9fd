#include <stdexcept>

#include "prover_internal.hpp"

namespace foasl::detail {

namespace {

LabelledFormula relabel(const LabelledFormula& lf, Label from, Label to) {
  return {lf.label == from ? to : lf.label, lf.formula};
}

template <class F>
std::set<LabelledFormula> map_set(const std::set<LabelledFormula>& in, F f) {
  std::set<LabelledFormula> out;
  for (const auto& lf : in) out.insert(f(lf));
  return out;
}

}  // namespace

Ctx transport(const Ctx& ctx, const RuleInstance& inst) {
  if (inst.rule == RuleId::SimSubst) {
    const RelAtom& a = inst.atoms.at(0);
    if (a.right == a.result) return ctx;
    Label from = a.result.is_eps() ? a.right : a.result;
    Label to = a.result.is_eps() ? Label::eps() : a.right;
    auto f = [&](const LabelledFormula& lf) { return relabel(lf, from, to); };
    return {map_set(ctx.junk_gamma, f), map_set(ctx.junk_delta, f), {}, ctx.split};
  }
  if (inst.rule == RuleId::EqSubst) {
    const auto& args = inst.formulas.at(0).formula.args();
    auto f = [&](const LabelledFormula& lf) {
      return LabelledFormula{lf.label, replace_term(lf.formula, args[1], args[0])};
    };
    return {map_set(ctx.junk_gamma, f), map_set(ctx.junk_delta, f), {}, ctx.split};
  }
  return ctx;
}

Builder::Builder(const Sequent& root, Ctx ctx, FreshNames& fresh) : fresh_(fresh) {
  nodes_.push_back({root, std::nullopt, {}, std::move(ctx)});
  open_.push_back(0);
}

RuleInstance Builder::step(std::size_t i, RuleInstance inst) {
  const int n = open_.at(i);
  auto premises = apply(nodes_[n].s, inst, fresh_);
  Ctx child_ctx = transport(nodes_[n].ctx, inst);
  nodes_[n].inst = inst;
  std::vector<int> kids;
  for (auto& p : premises) {
    kids.push_back(static_cast<int>(nodes_.size()));
    nodes_.push_back({std::move(p), std::nullopt, {}, child_ctx});
  }
  nodes_[n].kids = kids;
  open_.erase(open_.begin() + static_cast<std::ptrdiff_t>(i));
  open_.insert(open_.begin() + static_cast<std::ptrdiff_t>(i), kids.begin(), kids.end());
  return inst;
}

bool Builder::close(std::size_t i) {
  const int n = open_.at(i);
  auto c = closure_check(nodes_[n].s);
  if (!c) return false;
  nodes_[n].inst = *c;
  open_.erase(open_.begin() + static_cast<std::ptrdiff_t>(i));
  return true;
}

Derivation Builder::build(int n, const std::map<int, std::size_t>& open_index,
                          std::vector<Derivation>& proofs) const {
  const Node& node = nodes_[n];
  if (auto it = open_index.find(n); it != open_index.end()) return std::move(proofs.at(it->second));
  Derivation d{node.s, *node.inst, {}};
  for (int k : node.kids) d.children.push_back(build(k, open_index, proofs));
  return d;
}

Derivation Builder::assemble(std::vector<Derivation> leaf_proofs) const {
  if (leaf_proofs.size() != open_.size()) throw std::logic_error("assemble: wrong number of leaf proofs");
  std::map<int, std::size_t> open_index;
  for (std::size_t i = 0; i < open_.size(); ++i) open_index[open_[i]] = i;
  return build(0, open_index, leaf_proofs);
}

}  // namespace foasl::detail
