#include "foasl/syntax.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace foasl {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t term_hash(const Term& t) {
  return mix(std::hash<std::string>{}(t.name), t.is_var() ? 17 : 31);
}

}  // namespace

bool is_core(Op op) {
  switch (op) {
    case Op::MTrue:
    case Op::Bot:
    case Op::Pred:
    case Op::PointsTo:
    case Op::Eq:
    case Op::Imp:
    case Op::Star:
    case Op::Wand:
    case Op::Dia:
    case Op::Exists:
      return true;
    default:
      return false;
  }
}

Formula Formula::make(Op op, std::string name, std::vector<Term> args,
                      std::vector<Formula> kids) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->name = std::move(name);
  n->args = std::move(args);
  n->kids = std::move(kids);
  std::size_t h = mix(0x51ed27, static_cast<std::size_t>(op));
  h = mix(h, std::hash<std::string>{}(n->name));
  for (const auto& t : n->args) h = mix(h, term_hash(t));
  for (const auto& k : n->kids) {
    h = mix(h, k.hash());
    n->size += k.size();
  }
  n->hash = h;
  return Formula(std::move(n));
}

Formula Formula::mtrue() { return make(Op::MTrue, {}, {}, {}); }
Formula Formula::bot() { return make(Op::Bot, {}, {}, {}); }
Formula Formula::top() { return make(Op::True, {}, {}, {}); }
Formula Formula::pred(std::string name, std::vector<Term> args) {
  if (name.empty()) throw std::invalid_argument("predicate name is empty");
  return make(Op::Pred, std::move(name), std::move(args), {});
}
Formula Formula::points_to(std::vector<Term> args) {
  if (args.size() < 2) throw std::invalid_argument("points-to arity must be at least 2");
  return make(Op::PointsTo, {}, std::move(args), {});
}
Formula Formula::eq(Term s, Term t) { return make(Op::Eq, {}, {std::move(s), std::move(t)}, {}); }
Formula Formula::imp(Formula a, Formula b) { return make(Op::Imp, {}, {}, {std::move(a), std::move(b)}); }
Formula Formula::star(Formula a, Formula b) { return make(Op::Star, {}, {}, {std::move(a), std::move(b)}); }
Formula Formula::wand(Formula a, Formula b) { return make(Op::Wand, {}, {}, {std::move(a), std::move(b)}); }
Formula Formula::dia(Formula a) { return make(Op::Dia, {}, {}, {std::move(a)}); }
Formula Formula::exists(std::string var, Formula body) {
  if (var.empty()) throw std::invalid_argument("bound variable name is empty");
  return make(Op::Exists, std::move(var), {}, {std::move(body)});
}
Formula Formula::neg(Formula a) { return make(Op::Neg, {}, {}, {std::move(a)}); }
Formula Formula::conj(Formula a, Formula b) { return make(Op::And, {}, {}, {std::move(a), std::move(b)}); }
Formula Formula::disj(Formula a, Formula b) { return make(Op::Or, {}, {}, {std::move(a), std::move(b)}); }
Formula Formula::forall(std::string var, Formula body) {
  if (var.empty()) throw std::invalid_argument("bound variable name is empty");
  return make(Op::Forall, std::move(var), {}, {std::move(body)});
}
Formula Formula::box(Formula a) { return make(Op::Box, {}, {}, {std::move(a)}); }
Formula Formula::iff(Formula a, Formula b) { return make(Op::Iff, {}, {}, {std::move(a), std::move(b)}); }

bool Formula::is_atomic() const {
  switch (op()) {
    case Op::MTrue:
    case Op::Bot:
    case Op::True:
    case Op::Pred:
    case Op::PointsTo:
    case Op::Eq:
      return true;
    default:
      return false;
  }
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.op != y.op || x.name != y.name || x.args != y.args || x.kids.size() != y.kids.size())
    return false;
  for (std::size_t i = 0; i < x.kids.size(); ++i)
    if (!(x.kids[i] == y.kids[i])) return false;
  return true;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.hash() <=> b.hash(); c != 0) return c;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (auto c = x.op <=> y.op; c != 0) return c;
  if (auto c = x.name <=> y.name; c != 0) return c;
  if (auto c = x.args <=> y.args; c != 0) return c;
  if (auto c = x.kids.size() <=> y.kids.size(); c != 0) return c;
  for (std::size_t i = 0; i < x.kids.size(); ++i)
    if (auto c = x.kids[i] <=> y.kids[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(Op op) {
  switch (op) {
    case Op::Iff: return 1;
    case Op::Imp: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    case Op::Wand: return 5;
    case Op::Star: return 6;
    case Op::Neg:
    case Op::Dia:
    case Op::Box: return 7;
    case Op::Exists:
    case Op::Forall: return 0;
    default: return 8;
  }
}

bool right_assoc(Op op) { return op == Op::Imp || op == Op::Wand; }

const char* binary_token(Op op) {
  switch (op) {
    case Op::Iff: return " <-> ";
    case Op::Imp: return " -> ";
    case Op::Or: return " | ";
    case Op::And: return " & ";
    case Op::Wand: return " -* ";
    case Op::Star: return " * ";
    default: return " ? ";
  }
}

void print(const Formula& f, std::string& out);

void print_operand(const Formula& f, std::string& out, bool parens) {
  if (parens) out += '(';
  print(f, out);
  if (parens) out += ')';
}

void print_terms(const std::vector<Term>& ts, std::size_t from, std::string& out) {
  for (std::size_t i = from; i < ts.size(); ++i) {
    if (i > from) out += ", ";
    out += ts[i].name;
  }
}

void print(const Formula& f, std::string& out) {
  const Op op = f.op();
  switch (op) {
    case Op::MTrue: out += "emp"; return;
    case Op::Bot: out += "false"; return;
    case Op::True: out += "true"; return;
    case Op::Pred:
      out += f.name();
      if (!f.args().empty()) {
        out += '(';
        print_terms(f.args(), 0, out);
        out += ')';
      }
      return;
    case Op::PointsTo:
      out += f.args()[0].name;
      out += " |-> ";
      print_terms(f.args(), 1, out);
      return;
    case Op::Eq:
      out += f.args()[0].name;
      out += " = ";
      out += f.args()[1].name;
      return;
    case Op::Neg:
    case Op::Dia:
    case Op::Box: {
      out += op == Op::Neg ? "~" : op == Op::Dia ? "<>" : "[]";
      const Formula& b = f.body();
      print_operand(b, out, precedence(b.op()) < 7);
      return;
    }
    case Op::Exists:
    case Op::Forall: {
      out += op == Op::Exists ? "E" : "A";
      const Formula* cur = &f;
      while (cur->op() == op) {
        out += ' ';
        out += cur->name();
        cur = &cur->body();
      }
      out += ". ";
      print(*cur, out);
      return;
    }
    default: {
      const int p = precedence(op);
      const Formula& l = f.lhs();
      const Formula& r = f.rhs();
      const int lp = precedence(l.op());
      const int rp = precedence(r.op());
      bool lparen = lp < p || (lp == p && right_assoc(op));
      bool rparen = rp < p || (rp == p && !right_assoc(op));
      print_operand(l, out, lparen);
      out += binary_token(op);
      print_operand(r, out, rparen);
      return;
    }
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

std::string to_string(const Term& t) { return t.name; }

// ---------------------------------------------------------------------------
// Desugaring

Formula desugar(const Formula& f) {
  switch (f.op()) {
    case Op::MTrue:
    case Op::Bot:
    case Op::Pred:
    case Op::PointsTo:
    case Op::Eq:
      return f;
    case Op::True:
      return Formula::imp(Formula::bot(), Formula::bot());
    case Op::Imp:
      return Formula::imp(desugar(f.lhs()), desugar(f.rhs()));
    case Op::Star:
      return Formula::star(desugar(f.lhs()), desugar(f.rhs()));
    case Op::Wand:
      return Formula::wand(desugar(f.lhs()), desugar(f.rhs()));
    case Op::Dia:
      return Formula::dia(desugar(f.body()));
    case Op::Exists:
      return Formula::exists(f.name(), desugar(f.body()));
    case Op::Neg:
      return Formula::imp(desugar(f.body()), Formula::bot());
    case Op::And: {
      auto a = desugar(f.lhs());
      auto b = desugar(f.rhs());
      return Formula::imp(Formula::imp(a, Formula::imp(b, Formula::bot())), Formula::bot());
    }
    case Op::Or: {
      auto a = desugar(f.lhs());
      auto b = desugar(f.rhs());
      return Formula::imp(Formula::imp(a, Formula::bot()), b);
    }
    case Op::Forall: {
      auto b = desugar(f.body());
      return Formula::imp(Formula::exists(f.name(), Formula::imp(b, Formula::bot())), Formula::bot());
    }
    case Op::Box: {
      auto b = desugar(f.body());
      return Formula::imp(Formula::dia(Formula::imp(b, Formula::bot())), Formula::bot());
    }
    case Op::Iff: {
      auto a = f.lhs();
      auto b = f.rhs();
      return desugar(Formula::conj(Formula::imp(a, b), Formula::imp(b, a)));
    }
  }
  return f;
}

bool is_desugared(const Formula& f) {
  if (!is_core(f.op())) return false;
  for (std::size_t i = 0; i < f.num_kids(); ++i)
    if (!is_desugared(i == 0 ? f.lhs() : f.rhs())) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Variables and substitution

namespace {

void collect_free(const Formula& f, std::vector<std::string>& bound,
                  std::vector<std::string>& out) {
  for (const auto& t : f.args()) {
    if (!t.is_var()) continue;
    if (std::find(bound.begin(), bound.end(), t.name) != bound.end()) continue;
    if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
  }
  if (f.op() == Op::Exists || f.op() == Op::Forall) {
    bound.push_back(f.name());
    collect_free(f.body(), bound, out);
    bound.pop_back();
    return;
  }
  for (std::size_t i = 0; i < f.num_kids(); ++i)
    collect_free(i == 0 ? f.lhs() : f.rhs(), bound, out);
}

bool occurs_free(const Formula& f, const std::string& x) {
  for (const auto& t : f.args())
    if (t.is_var() && t.name == x) return true;
  if (f.op() == Op::Exists || f.op() == Op::Forall) {
    if (f.name() == x) return false;
    return occurs_free(f.body(), x);
  }
  for (std::size_t i = 0; i < f.num_kids(); ++i)
    if (occurs_free(i == 0 ? f.lhs() : f.rhs(), x)) return true;
  return false;
}

bool occurs_const(const Formula& f, const std::string& c) {
  for (const auto& t : f.args())
    if (t.is_const() && t.name == c) return true;
  for (std::size_t i = 0; i < f.num_kids(); ++i)
    if (occurs_const(i == 0 ? f.lhs() : f.rhs(), c)) return true;
  return false;
}

void collect_names(const Formula& f, std::set<std::string>& out) {
  for (const auto& t : f.args()) out.insert(t.name);
  if (f.op() == Op::Exists || f.op() == Op::Forall) out.insert(f.name());
  for (std::size_t i = 0; i < f.num_kids(); ++i)
    collect_names(i == 0 ? f.lhs() : f.rhs(), out);
}

Formula rebuild(const Formula& f, std::vector<Term> args, std::vector<Formula> kids) {
  switch (f.op()) {
    case Op::MTrue: return Formula::mtrue();
    case Op::Bot: return Formula::bot();
    case Op::True: return Formula::top();
    case Op::Pred: return Formula::pred(f.name(), std::move(args));
    case Op::PointsTo: return Formula::points_to(std::move(args));
    case Op::Eq: return Formula::eq(args[0], args[1]);
    case Op::Imp: return Formula::imp(kids[0], kids[1]);
    case Op::Star: return Formula::star(kids[0], kids[1]);
    case Op::Wand: return Formula::wand(kids[0], kids[1]);
    case Op::Dia: return Formula::dia(kids[0]);
    case Op::Exists: return Formula::exists(f.name(), kids[0]);
    case Op::Neg: return Formula::neg(kids[0]);
    case Op::And: return Formula::conj(kids[0], kids[1]);
    case Op::Or: return Formula::disj(kids[0], kids[1]);
    case Op::Forall: return Formula::forall(f.name(), kids[0]);
    case Op::Box: return Formula::box(kids[0]);
    case Op::Iff: return Formula::iff(kids[0], kids[1]);
  }
  return f;
}

bool mentions(const Formula& f, const Term& from) {
  return from.is_var() ? occurs_free(f, from.name) : occurs_const(f, from.name);
}

Formula replace_impl(const Formula& f, const Term& from, const Term& to) {
  if (!mentions(f, from)) return f;
  if (f.op() == Op::Exists || f.op() == Op::Forall) {
    const std::string& x = f.name();
    if (from.is_var() && x == from.name) return f;
    Formula body = f.body();
    std::string binder = x;
    if (x == to.name) {
      // `to` would be captured (or confused with the binder when printed).
      std::set<std::string> used;
      collect_names(body, used);
      used.insert(to.name);
      used.insert(from.name);
      std::string fresh = x + "'";
      while (used.count(fresh)) fresh += "'";
      body = replace_impl(body, Term::var(x), Term::var(fresh));
      binder = fresh;
    }
    body = replace_impl(body, from, to);
    return f.op() == Op::Exists ? Formula::exists(binder, body) : Formula::forall(binder, body);
  }
  std::vector<Term> args = f.args();
  for (auto& t : args)
    if (t == from) t = to;
  std::vector<Formula> kids;
  for (std::size_t i = 0; i < f.num_kids(); ++i)
    kids.push_back(replace_impl(i == 0 ? f.lhs() : f.rhs(), from, to));
  return rebuild(f, std::move(args), std::move(kids));
}

}  // namespace

std::vector<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

bool is_closed(const Formula& f) { return free_variables(f).empty(); }

Formula substitute_term(const Formula& f, const std::string& x, const Term& t) {
  return replace_impl(f, Term::var(x), t);
}

Formula replace_term(const Formula& f, const Term& from, const Term& to) {
  if (from == to) return f;
  return replace_impl(f, from, to);
}

Formula universal_closure(const Formula& f) {
  auto fv = free_variables(f);
  Formula out = f;
  for (auto it = fv.rbegin(); it != fv.rend(); ++it) out = Formula::forall(*it, out);
  return out;
}

// ---------------------------------------------------------------------------
// Signatures

namespace {

template <typename T>
void push_unique(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

void collect_signature(const Formula& f, Signature& sig) {
  for (const auto& t : f.args())
    if (t.is_const()) push_unique(sig.constants, t.name);
  if (f.op() == Op::Pred) push_unique(sig.predicates, {f.name(), f.arity()});
  if (f.op() == Op::PointsTo) push_unique(sig.pointsto_arities, f.arity());
  for (std::size_t i = 0; i < f.num_kids(); ++i)
    collect_signature(i == 0 ? f.lhs() : f.rhs(), sig);
}

}  // namespace

void Signature::merge(const Signature& other) {
  for (const auto& c : other.constants) push_unique(constants, c);
  for (const auto& p : other.predicates) push_unique(predicates, p);
  for (auto a : other.pointsto_arities) push_unique(pointsto_arities, a);
}

Signature signature_of(const Formula& f) {
  Signature sig;
  collect_signature(f, sig);
  return sig;
}

// ---------------------------------------------------------------------------
// Alpha-equivalence

namespace {

bool alpha_impl(const Formula& a, const Formula& b, std::vector<std::pair<std::string, std::string>>& env) {
  if (a.op() != b.op()) return false;
  if (a.op() == Op::Pred && a.name() != b.name()) return false;
  if (a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i) {
    const Term& x = a.args()[i];
    const Term& y = b.args()[i];
    if (x.kind != y.kind) return false;
    if (x.is_const()) {
      if (x.name != y.name) return false;
      continue;
    }
    // innermost binding wins
    int ia = -1, ib = -1;
    for (int k = static_cast<int>(env.size()) - 1; k >= 0; --k) {
      if (ia < 0 && env[k].first == x.name) ia = k;
      if (ib < 0 && env[k].second == y.name) ib = k;
    }
    if (ia != ib) return false;
    if (ia < 0 && x.name != y.name) return false;
  }
  if (a.op() == Op::Exists || a.op() == Op::Forall) {
    env.emplace_back(a.name(), b.name());
    bool ok = alpha_impl(a.body(), b.body(), env);
    env.pop_back();
    return ok;
  }
  for (std::size_t i = 0; i < a.num_kids(); ++i) {
    if (!alpha_impl(i == 0 ? a.lhs() : a.rhs(), i == 0 ? b.lhs() : b.rhs(), env)) return false;
  }
  return true;
}

}  // namespace

bool alpha_equivalent(const Formula& a, const Formula& b) {
  std::vector<std::pair<std::string, std::string>> env;
  return alpha_impl(a, b, env);
}

// ---------------------------------------------------------------------------
// Derived connective views

const Formula* match_neg(const Formula& f) {
  if (f.op() == Op::Imp && f.rhs().op() == Op::Bot) return &f.lhs();
  return nullptr;
}

const Formula* match_box(const Formula& f) {
  const Formula* inner = match_neg(f);
  if (!inner || inner->op() != Op::Dia) return nullptr;
  return match_neg(inner->body());
}

bool match_forall(const Formula& f, ForallView& out) {
  const Formula* inner = match_neg(f);
  if (!inner || inner->op() != Op::Exists) return false;
  const Formula* body = match_neg(inner->body());
  if (!body) return false;
  out.var = &inner->name();
  out.body = body;
  return true;
}

}  // namespace foasl
