#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "foasl/calculus.hpp"
#include "foasl/sequent.hpp"
#include "foasl/syntax.hpp"
#include "foasl/theory_set.hpp"

namespace foasl {

struct SearchBudget {
  std::uint64_t max_generative_steps = 10000;
  int max_depth = 200;
  double wall_timeout = 60.0;  // seconds
};

struct ProverOptions {
  // Points-to rules of the heap model (closing rules, case split, same-label
  // unification, heap extension) used as macros whenever the theory holds
  // the formula that justifies them.
  bool derived_rules = true;
  Label root = Label::var(1);
};

struct ProofStats {
  std::uint64_t generative_steps = 0;
  std::uint64_t saturation_steps = 0;
  int rounds = 0;        // iterative-deepening rounds started
  int final_depth = 0;   // cost bound of the successful round
  double seconds = 0.0;
};

struct ProofResult {
  bool proved = false;
  bool budget_exhausted = false;
  std::optional<Derivation> derivation;
  ProofStats stats;
};

// Backward proof search from initial_sequent(universal_closure(goal), theory,
// opts.root). Throws std::invalid_argument for non-positive budgets.
ProofResult prove(const Formula& goal, const TheorySet& theory, const SearchBudget& budget = {},
                  const ProverOptions& opts = {});

// One generative choice available at a saturated sequent.
struct Candidate {
  std::string key;    // stable description, also used to prune permutations
  int cost = 1;       // iterative-deepening cost
  RuleId head;        // the rule the choice is about
};

// Strategy inspection: the next deterministic (saturation) step at s, if any,
// followed by the generative candidates when s is saturated.
struct SearchStep {
  std::optional<RuleInstance> saturation;  // a core rule, or the first rule of a macro
  std::string macro;                       // name of the macro when the step is one
  std::vector<Candidate> generative;
};
SearchStep search_step(const Sequent& s, const TheorySet& theory, const ProverOptions& opts = {});

}  // namespace foasl
