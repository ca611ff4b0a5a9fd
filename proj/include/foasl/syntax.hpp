#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace foasl {

// A first-order term: constants and variables only (no function symbols).
struct Term {
  enum class Kind : std::uint8_t { Const, Var };

  Kind kind = Kind::Const;
  std::string name;

  static Term constant(std::string n) { return {Kind::Const, std::move(n)}; }
  static Term var(std::string n) { return {Kind::Var, std::move(n)}; }

  bool is_var() const { return kind == Kind::Var; }
  bool is_const() const { return kind == Kind::Const; }

  auto operator<=>(const Term&) const = default;
  bool operator==(const Term&) const = default;
};

enum class Op : std::uint8_t {
  // core
  MTrue,
  Bot,
  Pred,
  PointsTo,
  Eq,
  Imp,
  Star,
  Wand,
  Dia,
  Exists,
  // sugar
  Neg,
  And,
  Or,
  True,
  Forall,
  Box,
  Iff,
};

bool is_core(Op op);

// Immutable formula tree with value semantics. Copies share structure.
class Formula {
 public:
  static Formula mtrue();
  static Formula bot();
  static Formula top();
  static Formula pred(std::string name, std::vector<Term> args);
  // s |-> t1, ..., tk-1 ; args = {s, t1, ...}, arity = args.size() >= 2
  static Formula points_to(std::vector<Term> args);
  static Formula eq(Term s, Term t);
  static Formula imp(Formula a, Formula b);
  static Formula star(Formula a, Formula b);
  static Formula wand(Formula a, Formula b);
  static Formula dia(Formula a);
  static Formula exists(std::string var, Formula body);
  static Formula neg(Formula a);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula forall(std::string var, Formula body);
  static Formula box(Formula a);
  static Formula iff(Formula a, Formula b);

  Op op() const { return node_->op; }
  // Predicate name for Pred, bound variable for Exists/Forall, empty otherwise.
  const std::string& name() const { return node_->name; }
  const std::vector<Term>& args() const { return node_->args; }
  std::size_t arity() const { return node_->args.size(); }
  // First operand, or the body of a unary/quantified formula.
  const Formula& lhs() const { return node_->kids.at(0); }
  const Formula& rhs() const { return node_->kids.at(1); }
  const Formula& body() const { return node_->kids.at(0); }
  std::size_t num_kids() const { return node_->kids.size(); }

  std::size_t hash() const { return node_->hash; }
  std::size_t size() const { return node_->size; }

  bool is_atomic() const;
  bool same_node(const Formula& o) const { return node_ == o.node_; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node {
    Op op;
    std::string name;
    std::vector<Term> args;
    std::vector<Formula> kids;
    std::size_t hash = 0;
    std::size_t size = 1;
  };

  static Formula make(Op op, std::string name, std::vector<Term> args,
                      std::vector<Formula> kids);

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, int line, int column,
             std::vector<std::string> expected);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

// Parses one formula. `#` starts a comment that runs to end of line.
// Throws ParseError.
Formula parse_formula(std::string_view text);

// Prints in the concrete syntax accepted by parse_formula.
std::string to_string(const Formula& f);
std::string to_string(const Term& t);

// Replaces sugar (~, &, |, true, A, [], <->) by the core connectives.
Formula desugar(const Formula& f);
bool is_desugared(const Formula& f);

// Free variables in first-occurrence (left-to-right) order.
std::vector<std::string> free_variables(const Formula& f);
bool is_closed(const Formula& f);

// Capture-avoiding replacement of the free variable `x` by `t`.
Formula substitute_term(const Formula& f, const std::string& x, const Term& t);

// Replaces every occurrence of `from` by `to`. A variable `from` is only
// replaced where free; a constant `from` everywhere. Bound variables that
// would capture `to` are renamed.
Formula replace_term(const Formula& f, const Term& from, const Term& to);

// Prefixes `A x1 ... xn.` for the free variables of f.
Formula universal_closure(const Formula& f);

// Constants, predicate symbols (name/arity), and points-to arities used in f.
struct Signature {
  std::vector<std::string> constants;
  std::vector<std::pair<std::string, std::size_t>> predicates;
  std::vector<std::size_t> pointsto_arities;

  void merge(const Signature& other);
};
Signature signature_of(const Formula& f);

// Alpha-equivalence: equal up to consistent renaming of bound variables.
bool alpha_equivalent(const Formula& a, const Formula& b);

// Recognisers for the derived connectives inside desugared formulas.
// []A is <>(A -> false) -> false ; A x. B is (E x. (B -> false)) -> false.
const Formula* match_box(const Formula& f);
struct ForallView {
  const std::string* var;
  const Formula* body;
};
bool match_forall(const Formula& f, ForallView& out);
// A -> false
const Formula* match_neg(const Formula& f);

}  // namespace foasl
