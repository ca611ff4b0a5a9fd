#include "foasl/theories.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace foasl {

namespace {

Term v(int i) { return Term::var("e" + std::to_string(i)); }

// vars e<first> .. e<first+n-1>
std::vector<Term> vars(int first, std::size_t n) {
  std::vector<Term> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(v(first + static_cast<int>(i)));
  return out;
}

Formula close_forall(const std::vector<Term>& vs, Formula body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = Formula::forall(it->name, body);
  return body;
}

std::vector<Term> concat(std::vector<Term> a, const std::vector<Term>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Conjunction of pairwise equalities a_i = b_i, right-nested.
Formula equalities(const std::vector<Term>& a, const std::vector<Term>& b) {
  Formula f = Formula::eq(a.back(), b.back());
  for (std::size_t i = a.size() - 1; i-- > 0;) f = Formula::conj(Formula::eq(a[i], b[i]), f);
  return f;
}

}  // namespace

TheoryId parse_theory_id(const std::string& s) {
  if (s == "none") return TheoryId::none();
  if (s == "reynolds") return TheoryId::reynolds();
  if (s == "vp") return TheoryId::vp();
  if (s == "lee") return TheoryId::lee();
  const std::string prefix = "thakur:";
  if (s.rfind(prefix, 0) == 0) {
    std::size_t used = 0;
    int d = 0;
    try {
      d = std::stoi(s.substr(prefix.size()), &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad theory '" + s + "'");
    }
    if (used != s.size() - prefix.size() || d < 1)
      throw std::invalid_argument("bad thakur depth in '" + s + "'");
    return TheoryId::thakur(d);
  }
  throw std::invalid_argument("unknown theory '" + s + "' (none|reynolds|vp|lee|thakur:<d>)");
}

std::string to_string(const TheoryId& id) {
  switch (id.kind) {
    case TheoryId::Kind::None: return "none";
    case TheoryId::Kind::Reynolds: return "reynolds";
    case TheoryId::Kind::VafeiadisParkinson: return "vp";
    case TheoryId::Kind::Lee: return "lee";
    case TheoryId::Kind::Thakur: return "thakur:" + std::to_string(id.unfold_depth);
  }
  return "none";
}

void TheorySet::add(const Formula& f, TheoryTag tag) {
  if (!is_closed(f)) throw std::invalid_argument("theory formula is not closed: " + to_string(f));
  formulas.push_back(desugar(f));
  tags.push_back(tag);
  if (tag.arity) arities.insert(tag.arity);
}

int TheorySet::find(int number, std::size_t arity) const {
  for (std::size_t i = 0; i < tags.size(); ++i)
    if (tags[i].number == number && tags[i].arity == arity) return static_cast<int>(i);
  return -1;
}

Formula theory_formula(int number, std::size_t k) {
  if (k < 2) throw std::invalid_argument("points-to arity must be at least 2");
  const std::size_t n = k - 1;  // fields
  const Term e1 = v(1);
  const auto fields = vars(2, n);
  const Formula pto = Formula::points_to(concat({e1}, fields));
  const auto all = concat({e1}, fields);
  switch (number) {
    case 1:
      return close_forall(all, Formula::imp(Formula::conj(pto, Formula::mtrue()), Formula::bot()));
    case 2: {
      auto nonempty = Formula::neg(Formula::mtrue());
      return close_forall(all, Formula::imp(pto, Formula::neg(Formula::star(nonempty, nonempty))));
    }
    case 3:
    case 4: {
      const Term e3 = v(static_cast<int>(k) + 1);
      const auto fields2 = vars(static_cast<int>(k) + 2, n);
      const Formula pto2 = Formula::points_to(concat({e3}, fields2));
      auto quantified = concat(all, concat({e3}, fields2));
      if (number == 3)
        return close_forall(quantified,
                            Formula::imp(Formula::star(pto, pto2), Formula::neg(Formula::eq(e1, e3))));
      return close_forall(quantified, Formula::imp(Formula::conj(pto, pto2),
                                                   equalities(concat({e1}, fields), concat({e3}, fields2))));
    }
    case 5: {
      Formula body = close_forall(fields, Formula::neg(Formula::wand(pto, Formula::bot())));
      return Formula::exists(e1.name, body);
    }
    case 6:
      return close_forall(all, Formula::imp(pto, pto));
    case 7:
      return close_forall(all, Formula::dia(pto));
    case 8: {
      const auto others = vars(static_cast<int>(k) + 1, n);
      const Formula pto_other = Formula::points_to(concat({e1}, others));
      Formula differ = Formula::neg(equalities(fields, others));
      Formula inner = Formula::conj(differ, Formula::dia(pto_other));
      for (auto it = others.rbegin(); it != others.rend(); ++it) inner = Formula::exists(it->name, inner);
      return close_forall(all, Formula::imp(Formula::dia(pto), Formula::neg(inner)));
    }
    case 9:
      if (k != 2) throw std::invalid_argument("Formula 9 is defined for binary points-to only");
      return unfold_path(3);
    case 10: {
      const Formula nil_pto = Formula::points_to(concat({Term::constant("nil")}, fields));
      return close_forall(fields, Formula::imp(nil_pto, Formula::bot()));
    }
    default:
      throw std::invalid_argument("no theory formula " + std::to_string(number));
  }
}

namespace {

Formula path_impl(int depth, const Term& a, const Term& b, int next_var) {
  Formula step = Formula::points_to({a, b});
  if (depth <= 1) return step;
  const Term mid = Term::var("e" + std::to_string(next_var));
  Formula rest = path_impl(depth - 1, mid, b, next_var + 1);
  return Formula::disj(step, Formula::exists(mid.name, Formula::star(Formula::points_to({a, mid}), rest)));
}

}  // namespace

Formula path_formula(int depth, const Term& a, const Term& b) {
  if (depth < 1) throw std::invalid_argument("path depth must be at least 1");
  return path_impl(depth, a, b, 3);
}

Formula unfold_path(int depth) {
  const Term e1 = v(1), e2 = v(2);
  Formula body = Formula::imp(path_formula(depth, e1, e2), Formula::neg(Formula::eq(e1, e2)));
  return Formula::forall(e1.name, Formula::forall(e2.name, body));
}

TheorySet theory_formulas(const TheoryId& id, const std::set<std::size_t>& arities) {
  TheorySet out;
  out.provenance = id;
  if (id.kind == TheoryId::Kind::None) return out;
  if (arities.empty()) throw std::invalid_argument("theory needs at least one points-to arity");
  if (id.kind == TheoryId::Kind::Thakur && id.unfold_depth < 1)
    throw std::invalid_argument("thakur unfolding depth must be at least 1");
  for (std::size_t k : arities) {
    if (k < 2) throw std::invalid_argument("points-to arity must be at least 2");
    for (int n : {1, 2, 3, 4, 5, 6, 10}) out.add(theory_formula(n, k), {n, k});
    if (id.kind == TheoryId::Kind::VafeiadisParkinson) out.add(theory_formula(7, k), {7, k});
    if (id.kind == TheoryId::Kind::Lee) out.add(theory_formula(8, k), {8, k});
  }
  if (id.kind == TheoryId::Kind::Thakur && arities.count(2))
    out.add(unfold_path(id.unfold_depth), {9, 2});
  out.arities = arities;
  return out;
}

}  // namespace foasl
