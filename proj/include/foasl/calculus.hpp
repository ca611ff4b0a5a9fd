#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "foasl/sequent.hpp"
#include "foasl/syntax.hpp"
#include "foasl/theory_set.hpp"

namespace foasl {

enum class RuleId {
  Id,
  BotL,
  MTrueR,
  MTrueL,
  ImpL,
  ImpR,
  StarL,
  StarR,
  WandL,
  WandR,
  ExistsL,
  ExistsR,
  DiaL,
  DiaR,
  EqRefl,    // =1
  EqSubst,   // =2'
  PtoTotal,  // |->1
  PtoInj,    // |->2
  SimRefl,   // ~1
  SimSubst,  // ~2'
  E,
  D,
  A,
  P,
  C,
  CS,
  // derived
  BoxL,
  BoxR,
  ForallL,
  ForallR,
};

std::string_view rule_name(RuleId r);
std::optional<RuleId> parse_rule_name(std::string_view s);
bool is_closure(RuleId r);
bool is_derived(RuleId r);
int premise_count(RuleId r);

// One backward rule application. Which fields matter depends on the rule:
//   formulas  principal labelled formulas (Id/BotL/MTrueR/MTrueL/ImpL/ImpR/
//             StarL/StarR/WandL/WandR/ExistsL/ExistsR/DiaL/DiaR/EqSubst/
//             BoxL/BoxR/ForallL/ForallR: one; PtoInj: two)
//   atoms     principal relational atoms (StarR/WandL/SimSubst/E/D: one;
//             A/P/C/CS: two, in the order of the rule schema)
//   label     witness label (DiaR, BoxL, EqRefl, SimRefl)
//   terms     witness terms (ExistsR: one; ForallL: one per quantifier
//             peeled; EqRefl: one; PtoTotal: the points-to arguments)
//   fresh_labels / fresh_var
//             names introduced by the rule; filled in by apply when empty.
struct RuleInstance {
  RuleId rule = RuleId::Id;
  std::vector<LabelledFormula> formulas;
  std::vector<RelAtom> atoms;
  std::optional<Label> label;
  std::vector<Term> terms;
  std::vector<Label> fresh_labels;
  std::optional<Term> fresh_var;

  bool operator==(const RuleInstance&) const = default;
};

std::string to_string(const RuleInstance& r);

class NotApplicable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Derivation {
  Sequent node;
  RuleInstance applied;
  std::vector<Derivation> children;

  std::size_t size() const;
  std::size_t height() const;
};

// BotL, then id, then MTrueR.
std::optional<RuleInstance> closure_check(const Sequent& s);

// Premises of `inst` read bottom-up. Fresh names missing from `inst` are
// drawn from `fresh` and written back; supplied ones are checked against the
// conclusion. Throws NotApplicable.
std::vector<Sequent> apply(const Sequent& s, RuleInstance& inst, FreshNames& fresh);

// Same, with fresh names taken from a generator reserved against s.
std::vector<Sequent> apply(const Sequent& s, RuleInstance& inst);

// Core-rule expansion of a derived rule (BoxL/BoxR/ForallL/ForallR) at s.
// All leaves but one are closed by BotL; the open leaf is returned in
// `open_leaf` with its position marked by an empty `applied.rule == Id` and
// no children. Throws NotApplicable.
Derivation expand_derived(const Sequent& s, const RuleInstance& inst, FreshNames& fresh,
                          Sequent& open_leaf);

struct CheckResult {
  bool valid = true;
  std::string reason;
  std::vector<std::size_t> path;  // child indices from the root to the bad node

  explicit operator bool() const { return valid; }
};

// Validates every node locally: closures, premises reproduced exactly by
// apply, freshness, and derived rules against their core expansions.
CheckResult check_subderivation(const Derivation& d);

// As check_subderivation, and the root must be an initial sequent for the
// theory (and for `goal`, when given).
CheckResult check_derivation(const Derivation& d, const TheorySet& theory,
                             const std::optional<Formula>& goal = std::nullopt);

// Collects the closure rules used at the leaves, in tree order.
std::vector<RuleId> leaf_rules(const Derivation& d);

}  // namespace foasl
