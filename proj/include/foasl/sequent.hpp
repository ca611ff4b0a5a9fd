#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "foasl/syntax.hpp"
#include "foasl/theory_set.hpp"

namespace foasl {

// A label: the constant eps (id 0) or a label variable h<id>.
struct Label {
  std::uint32_t id = 0;

  static constexpr Label eps() { return Label{0}; }
  static constexpr Label var(std::uint32_t n) { return Label{n}; }
  bool is_eps() const { return id == 0; }

  auto operator<=>(const Label&) const = default;
};

std::string to_string(Label l);
// Accepts "eps" or "h<digits>" (digits > 0); throws std::invalid_argument.
Label parse_label(const std::string& s);

// (left, right |> result): left o right = result. h1 ~ h2 is (eps, h1 |> h2).
struct RelAtom {
  Label left;
  Label right;
  Label result;

  static RelAtom sim(Label a, Label b) { return {Label::eps(), a, b}; }
  bool is_sim() const { return left.is_eps(); }

  auto operator<=>(const RelAtom&) const = default;
};

std::string to_string(const RelAtom& a);

struct LabelledFormula {
  Label label;
  Formula formula;

  auto operator<=>(const LabelledFormula&) const = default;
  bool operator==(const LabelledFormula&) const = default;
};

std::string to_string(const LabelledFormula& lf);

// G ; Gamma |- Delta, each component a duplicate-free set (kept sorted).
class Sequent {
 public:
  Sequent() = default;
  Sequent(std::vector<RelAtom> g, std::vector<LabelledFormula> gamma,
          std::vector<LabelledFormula> delta);

  const std::vector<RelAtom>& atoms() const { return atoms_; }
  const std::vector<LabelledFormula>& gamma() const { return gamma_; }
  const std::vector<LabelledFormula>& delta() const { return delta_; }

  bool has_atom(const RelAtom& a) const;
  bool in_gamma(const LabelledFormula& lf) const;
  bool in_delta(const LabelledFormula& lf) const;

  // Each returns false when the item was already present / absent.
  bool add_atom(const RelAtom& a);
  bool add_gamma(LabelledFormula lf);
  bool add_delta(LabelledFormula lf);
  bool erase_atom(const RelAtom& a);
  bool erase_gamma(const LabelledFormula& lf);
  bool erase_delta(const LabelledFormula& lf);

  std::set<Label> labels() const;
  bool mentions_label(Label l) const;
  // Terms occurring in any labelled formula (constants and free variables).
  std::set<Term> terms() const;
  bool mentions_free_var(const std::string& name) const;
  bool mentions_name(const std::string& name) const;
  std::size_t max_label_id() const;

  auto operator<=>(const Sequent&) const = default;
  bool operator==(const Sequent&) const = default;

 private:
  std::vector<RelAtom> atoms_;
  std::vector<LabelledFormula> gamma_;
  std::vector<LabelledFormula> delta_;
};

std::string to_string(const Sequent& s);

// Replaces label `from` by `to` everywhere. `from` must not be eps
// (throws std::invalid_argument).
Sequent substitute_label(const Sequent& s, Label from, Label to);

// Replaces term `from` by `to` in every labelled formula (see replace_term).
Sequent substitute_term_in(const Sequent& s, const Term& from, const Term& to);

// ( ; root:[]T for T in theory |- root:goal ), formulas desugared. The goal
// must be closed and root must not be eps (std::invalid_argument).
Sequent initial_sequent(const Formula& goal, const TheorySet& theory, Label root);

// Produces label variables and eigenvariables that have not been handed out
// before. Deterministic: the n-th request always yields the same name.
class FreshNames {
 public:
  explicit FreshNames(std::uint32_t next_label = 1, std::uint32_t next_var = 1)
      : next_label_(next_label), next_var_(next_var) {}

  Label label() { return Label::var(next_label_++); }
  Term variable() { return Term::var("_v" + std::to_string(next_var_++)); }

  // Ensures subsequent names do not collide with anything in s.
  void reserve(const Sequent& s);

  std::uint32_t next_label_id() const { return next_label_; }
  std::uint32_t next_var_id() const { return next_var_; }

 private:
  std::uint32_t next_label_;
  std::uint32_t next_var_;
};

}  // namespace foasl
