#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "foasl/calculus.hpp"
#include "foasl/prover.hpp"
#include "foasl/sequent.hpp"
#include "foasl/theory_set.hpp"

namespace foasl::detail {

// Per-branch search bookkeeping that is not part of the sequent.
struct Ctx {
  // Residue of macro expansions; never used as principal by the strategy.
  std::set<LabelledFormula> junk_gamma;
  std::set<LabelledFormula> junk_delta;
  // Candidate keys already explored by an earlier sibling.
  std::set<std::string> excluded;
  // Case splits already made on this branch.
  std::set<std::string> split;
};

// Carries ctx from a conclusion to the premises of inst.
Ctx transport(const Ctx& ctx, const RuleInstance& inst);

// A derivation under construction. Nodes without a rule are open leaves.
class Builder {
 public:
  Builder(const Sequent& root, Ctx ctx, FreshNames& fresh);

  std::size_t num_open() const { return open_.size(); }
  const Sequent& leaf(std::size_t i) const { return nodes_[open_.at(i)].s; }
  Ctx& ctx(std::size_t i) { return nodes_[open_.at(i)].ctx; }
  FreshNames& fresh() { return fresh_; }

  // Applies inst at open leaf i; its premises take its place in the open
  // list, in order. Returns the instance with fresh names filled in.
  RuleInstance step(std::size_t i, RuleInstance inst);
  // Closes open leaf i when closure_check succeeds.
  bool close(std::size_t i);
  const std::optional<RuleInstance>& root_rule() const { return nodes_[0].inst; }

  // Plugs proofs of the open leaves (in open-list order) into the tree.
  Derivation assemble(std::vector<Derivation> leaf_proofs) const;

 private:
  struct Node {
    Sequent s;
    std::optional<RuleInstance> inst;
    std::vector<int> kids;
    Ctx ctx;
  };
  Derivation build(int n, const std::map<int, std::size_t>& open_index,
                   std::vector<Derivation>& proofs) const;

  std::vector<Node> nodes_;
  std::vector<int> open_;
  FreshNames& fresh_;
};

// A binary decomposition of a label by relational atoms of the sequent.
struct Tree {
  struct Node {
    Label label;
    int left = -1;
    int right = -1;
  };
  std::vector<Node> nodes;  // nodes[0] is the root
  std::vector<Label> leaves() const;  // in order
  std::vector<int> leaf_nodes() const;
};

// Structural view of a saturated sequent used for heuristics.
class Oracle {
 public:
  explicit Oracle(const Sequent& s);

  const Sequent& sequent() const { return s_; }
  const std::vector<Label>& labels() const { return labels_; }
  // Trees of y; the first is always the single-leaf tree.
  const std::vector<Tree>& trees(Label y) const;
  // A label whose decomposition has exactly these leaves (sorted multiset).
  std::optional<Label> label_of(const std::vector<Label>& leaves) const;

  // Cheap, incomplete guess whether the world made of `leaves` can be shown
  // to satisfy f (f would sit in the succedent).
  bool plausible(const std::vector<Label>& leaves, const Formula& f, int depth = 3) const;
  bool plausible_at(Label l, const Formula& f) const;

 private:
  std::vector<std::vector<Label>> flattenings(const std::vector<Label>& leaves) const;

  const Sequent& s_;
  std::vector<Label> labels_;
  std::map<Label, std::vector<Tree>> trees_;
  std::map<std::vector<Label>, Label> by_leaves_;
};

std::vector<Label> sorted_multiset(std::vector<Label> v);

// Atomic formulas occurring in s with no bound variable among their arguments.
std::set<Formula> ground_atoms(const Sequent& s);

// Tuples of terms for `vars` (outermost first) that make atoms of `body`
// coincide with atoms occurring in s, best matches first; variables left
// open are filled from `universe`.
std::vector<std::vector<Term>> instantiations(const std::vector<std::string>& vars,
                                              const Formula& body, const Sequent& s,
                                              const std::vector<Term>& universe, std::size_t cap);

// Peels a prefix of nested universal (or existential) quantifiers.
struct Prefix {
  std::vector<std::string> vars;
  Formula body;
};
Prefix forall_prefix(const Formula& f);
Prefix exists_prefix(const Formula& f);

// Is f a negation-encoded connective the strategy keeps intact in Gamma?
bool retained_shape(const Formula& f);

// Recognisers for the encodings of & and | in desugared formulas.
bool match_and(const Formula& f, Formula& a, Formula& b);
bool match_or(const Formula& f, Formula& a, Formula& b);
bool is_top(const Formula& f);

// Theory formulas in their boxed, desugared form, with lookup by number.
struct Env {
  Env(const TheorySet& t, const ProverOptions& o);

  const TheorySet& theory;
  ProverOptions opts;
  std::vector<Formula> boxed;
  std::vector<Formula> bodies;

  int index(int number, std::size_t arity) const;
  std::optional<LabelledFormula> locate(const Sequent& s, int idx) const;
  // Index of the formula justifying a derived rule, if usable at s.
  int derived(int number, std::size_t arity, const Sequent& s) const;
  // Boxed formulas the generic instance search should leave alone.
  bool skip_generic(const Formula& boxed_formula) const;
};

// ---- macros (tactics.cpp). Each works on open leaf i of the builder and
// leaves the resulting open premises at positions i.. ----

// Closes leaf i with EqRefl + id when some h:t=t is in the succedent.
bool close_leaf(Builder& b, std::size_t i);

// ImpL/ImpR on f and on what it produces, closing leaves on the way.
// Returns the number of open leaves left in place of leaf i.
std::size_t decompose(Builder& b, std::size_t i, const LabelledFormula& f, bool in_gamma);

// BoxL (unless already present) and ForallL on the theory formula idx at w.
// Returns the instance added to Gamma.
LabelledFormula theory_instance(Builder& b, std::size_t i, const Env& env, int idx, Label w,
                                const std::vector<Term>& terms);

void pto_l1(Builder& b, std::size_t i, const Env& env, int idx, const LabelledFormula& pto);
void pto_l2(Builder& b, std::size_t i, const Env& env, int idx, const RelAtom& a,
            const LabelledFormula& pto);
void pto_l3(Builder& b, std::size_t i, const Env& env, int idx, const RelAtom& a,
            const LabelledFormula& f1, const LabelledFormula& f2);
void pto_l4(Builder& b, std::size_t i, const Env& env, int idx, const LabelledFormula& f1,
            const LabelledFormula& f2);
void heap_extension(Builder& b, std::size_t i, const Env& env, int idx, Label h0);
void indivisible_unit(Builder& b, std::size_t i, const RelAtom& a);

// Makes an atom (x1, x2 |> root) where x1 is made of the selected leaves of
// the tree and x2 of the others. Either part may be eps.
std::pair<Label, Label> realize(Builder& b, std::size_t i, const Tree& t,
                                const std::vector<bool>& selected);
// Ensures the atom exists at leaf i (via E or SimRefl/E when possible).
void ensure_atom(Builder& b, std::size_t i, const RelAtom& a);

}  // namespace foasl::detail
