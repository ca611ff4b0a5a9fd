#include "foasl/sequent.hpp"

#include <algorithm>
#include <stdexcept>

namespace foasl {

std::string to_string(Label l) { return l.is_eps() ? "eps" : "h" + std::to_string(l.id); }

Label parse_label(const std::string& s) {
  if (s == "eps") return Label::eps();
  if (s.size() >= 2 && s[0] == 'h' &&
      std::all_of(s.begin() + 1, s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    unsigned long v = std::stoul(s.substr(1));
    if (v > 0 && v <= 0xffffffffUL) return Label::var(static_cast<std::uint32_t>(v));
  }
  throw std::invalid_argument("bad label '" + s + "'");
}

std::string to_string(const RelAtom& a) {
  return "(" + to_string(a.left) + ", " + to_string(a.right) + " |> " + to_string(a.result) + ")";
}

std::string to_string(const LabelledFormula& lf) {
  return to_string(lf.label) + ": " + to_string(lf.formula);
}

namespace {

template <typename T>
void normalize(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

template <typename T>
bool sorted_contains(const std::vector<T>& v, const T& x) {
  return std::binary_search(v.begin(), v.end(), x);
}

template <typename T>
bool sorted_insert(std::vector<T>& v, T x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) return false;
  v.insert(it, std::move(x));
  return true;
}

template <typename T>
bool sorted_erase(std::vector<T>& v, const T& x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || !(*it == x)) return false;
  v.erase(it);
  return true;
}

void collect_terms(const Formula& f, std::set<Term>& out, std::vector<std::string>& bound) {
  for (const auto& t : f.args()) {
    if (t.is_var() && std::find(bound.begin(), bound.end(), t.name) != bound.end()) continue;
    out.insert(t);
  }
  if (f.op() == Op::Exists || f.op() == Op::Forall) {
    bound.push_back(f.name());
    collect_terms(f.body(), out, bound);
    bound.pop_back();
    return;
  }
  for (std::size_t i = 0; i < f.num_kids(); ++i)
    collect_terms(i == 0 ? f.lhs() : f.rhs(), out, bound);
}

bool mentions_name_in(const Formula& f, const std::string& n) {
  for (const auto& t : f.args())
    if (t.name == n) return true;
  if ((f.op() == Op::Exists || f.op() == Op::Forall) && f.name() == n) return true;
  for (std::size_t i = 0; i < f.num_kids(); ++i)
    if (mentions_name_in(i == 0 ? f.lhs() : f.rhs(), n)) return true;
  return false;
}

}  // namespace

Sequent::Sequent(std::vector<RelAtom> g, std::vector<LabelledFormula> gamma,
                 std::vector<LabelledFormula> delta)
    : atoms_(std::move(g)), gamma_(std::move(gamma)), delta_(std::move(delta)) {
  normalize(atoms_);
  normalize(gamma_);
  normalize(delta_);
}

bool Sequent::has_atom(const RelAtom& a) const { return sorted_contains(atoms_, a); }
bool Sequent::in_gamma(const LabelledFormula& lf) const { return sorted_contains(gamma_, lf); }
bool Sequent::in_delta(const LabelledFormula& lf) const { return sorted_contains(delta_, lf); }
bool Sequent::add_atom(const RelAtom& a) { return sorted_insert(atoms_, a); }
bool Sequent::add_gamma(LabelledFormula lf) { return sorted_insert(gamma_, std::move(lf)); }
bool Sequent::add_delta(LabelledFormula lf) { return sorted_insert(delta_, std::move(lf)); }
bool Sequent::erase_atom(const RelAtom& a) { return sorted_erase(atoms_, a); }
bool Sequent::erase_gamma(const LabelledFormula& lf) { return sorted_erase(gamma_, lf); }
bool Sequent::erase_delta(const LabelledFormula& lf) { return sorted_erase(delta_, lf); }

std::set<Label> Sequent::labels() const {
  std::set<Label> out;
  for (const auto& a : atoms_) {
    out.insert(a.left);
    out.insert(a.right);
    out.insert(a.result);
  }
  for (const auto& lf : gamma_) out.insert(lf.label);
  for (const auto& lf : delta_) out.insert(lf.label);
  return out;
}

bool Sequent::mentions_label(Label l) const {
  for (const auto& a : atoms_)
    if (a.left == l || a.right == l || a.result == l) return true;
  for (const auto& lf : gamma_)
    if (lf.label == l) return true;
  for (const auto& lf : delta_)
    if (lf.label == l) return true;
  return false;
}

std::set<Term> Sequent::terms() const {
  std::set<Term> out;
  std::vector<std::string> bound;
  for (const auto& lf : gamma_) collect_terms(lf.formula, out, bound);
  for (const auto& lf : delta_) collect_terms(lf.formula, out, bound);
  return out;
}

bool Sequent::mentions_free_var(const std::string& name) const {
  for (const auto& lf : gamma_) {
    auto fv = free_variables(lf.formula);
    if (std::find(fv.begin(), fv.end(), name) != fv.end()) return true;
  }
  for (const auto& lf : delta_) {
    auto fv = free_variables(lf.formula);
    if (std::find(fv.begin(), fv.end(), name) != fv.end()) return true;
  }
  return false;
}

bool Sequent::mentions_name(const std::string& name) const {
  for (const auto& lf : gamma_)
    if (mentions_name_in(lf.formula, name)) return true;
  for (const auto& lf : delta_)
    if (mentions_name_in(lf.formula, name)) return true;
  return false;
}

std::size_t Sequent::max_label_id() const {
  std::size_t m = 0;
  for (auto l : labels()) m = std::max<std::size_t>(m, l.id);
  return m;
}

std::string to_string(const Sequent& s) {
  std::string out;
  bool first = true;
  auto sep = [&] {
    if (!first) out += "; ";
    first = false;
  };
  for (const auto& a : s.atoms()) {
    sep();
    out += to_string(a);
  }
  for (const auto& lf : s.gamma()) {
    sep();
    out += to_string(lf);
  }
  out += first ? "|-" : " |-";
  bool firstd = true;
  for (const auto& lf : s.delta()) {
    out += firstd ? " " : "; ";
    firstd = false;
    out += to_string(lf);
  }
  return out;
}

Sequent substitute_label(const Sequent& s, Label from, Label to) {
  if (from.is_eps()) throw std::invalid_argument("eps cannot be substituted away");
  if (from == to) return s;
  auto sub = [&](Label l) { return l == from ? to : l; };
  std::vector<RelAtom> g;
  g.reserve(s.atoms().size());
  for (const auto& a : s.atoms()) g.push_back({sub(a.left), sub(a.right), sub(a.result)});
  std::vector<LabelledFormula> gamma, delta;
  gamma.reserve(s.gamma().size());
  delta.reserve(s.delta().size());
  for (const auto& lf : s.gamma()) gamma.push_back({sub(lf.label), lf.formula});
  for (const auto& lf : s.delta()) delta.push_back({sub(lf.label), lf.formula});
  return Sequent(std::move(g), std::move(gamma), std::move(delta));
}

Sequent substitute_term_in(const Sequent& s, const Term& from, const Term& to) {
  if (from == to) return s;
  std::vector<LabelledFormula> gamma, delta;
  gamma.reserve(s.gamma().size());
  delta.reserve(s.delta().size());
  for (const auto& lf : s.gamma()) gamma.push_back({lf.label, replace_term(lf.formula, from, to)});
  for (const auto& lf : s.delta()) delta.push_back({lf.label, replace_term(lf.formula, from, to)});
  return Sequent(s.atoms(), std::move(gamma), std::move(delta));
}

Sequent initial_sequent(const Formula& goal, const TheorySet& theory, Label root) {
  if (root.is_eps()) throw std::invalid_argument("root label must not be eps");
  if (!is_closed(goal)) throw std::invalid_argument("goal is not closed: " + to_string(goal));
  std::vector<LabelledFormula> gamma;
  for (const auto& t : theory.formulas) {
    if (!is_closed(t)) throw std::invalid_argument("theory formula is not closed: " + to_string(t));
    gamma.push_back({root, desugar(Formula::box(t))});
  }
  return Sequent({}, std::move(gamma), {{root, desugar(goal)}});
}

void FreshNames::reserve(const Sequent& s) {
  next_label_ = std::max<std::uint32_t>(next_label_, static_cast<std::uint32_t>(s.max_label_id() + 1));
  for (const auto& t : s.terms()) {
    if (t.is_var() && t.name.rfind("_v", 0) == 0) {
      try {
        auto n = static_cast<std::uint32_t>(std::stoul(t.name.substr(2)));
        next_var_ = std::max(next_var_, n + 1);
      } catch (const std::exception&) {
      }
    }
  }
}

}  // namespace foasl
