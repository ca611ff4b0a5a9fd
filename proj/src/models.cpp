#include <algorithm>
#include <atomic>
#include <exception>
#include <random>

#include "foasl/models.hpp"

namespace foasl {

namespace {

class Evaluator {
 public:
  Evaluator(const Model& m, const std::map<std::string, int>* valuation)
      : m_(m), valuation_(valuation) {}

  bool at(int h, const Formula& f);

 private:
  int term(const Term& t) const;
  std::size_t tuple(const std::vector<Term>& args) const;
  bool bind(const std::string& x, int h, const Formula& body, bool want);

  const Model& m_;
  const std::map<std::string, int>* valuation_;
  std::vector<std::pair<std::string, int>> env_;
};

int Evaluator::term(const Term& t) const {
  if (t.is_var()) {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it)
      if (it->first == t.name) return it->second;
    if (valuation_) {
      auto it = valuation_->find(t.name);
      if (it != valuation_->end()) return it->second;
    }
    throw UnknownSymbol("unbound variable " + t.name);
  }
  auto it = m_.constants.find(t.name);
  if (it == m_.constants.end()) throw UnknownSymbol("unknown constant " + t.name);
  return it->second;
}

std::size_t Evaluator::tuple(const std::vector<Term>& args) const {
  std::size_t idx = 0;
  for (const auto& a : args) idx = idx * m_.domain + term(a);
  return idx;
}

// Is there (want) / is there no (!want) domain value making body true?
bool Evaluator::bind(const std::string& x, int h, const Formula& body, bool want) {
  for (int d = 0; d < m_.domain; ++d) {
    env_.push_back({x, d});
    bool v = at(h, body);
    env_.pop_back();
    if (v == want) return true;
  }
  return false;
}

bool Evaluator::at(int h, const Formula& f) {
  const auto& alg = m_.algebra;
  switch (f.op()) {
    case Op::MTrue: return h == 0;
    case Op::Bot: return false;
    case Op::True: return true;
    case Op::Pred: {
      auto it = m_.predicates.find({f.name(), f.arity()});
      if (it == m_.predicates.end()) throw UnknownSymbol("unknown predicate " + f.name());
      std::size_t per_world = 1;
      for (std::size_t i = 0; i < f.arity(); ++i) per_world *= m_.domain;
      return it->second.at(h * per_world + tuple(f.args()));
    }
    case Op::PointsTo: {
      auto it = m_.pointsto.find(f.arity());
      if (it == m_.pointsto.end())
        throw UnknownSymbol("no points-to of arity " + std::to_string(f.arity()));
      return it->second.at(tuple(f.args())) == h;
    }
    case Op::Eq: return term(f.args()[0]) == term(f.args()[1]);
    case Op::Imp: return !at(h, f.lhs()) || at(h, f.rhs());
    case Op::Neg: return !at(h, f.body());
    case Op::And: return at(h, f.lhs()) && at(h, f.rhs());
    case Op::Or: return at(h, f.lhs()) || at(h, f.rhs());
    case Op::Iff: return at(h, f.lhs()) == at(h, f.rhs());
    case Op::Star:
      for (auto [a, b] : alg.splits(h))
        if (at(a, f.lhs()) && at(b, f.rhs())) return true;
      return false;
    case Op::Wand:
      for (int h1 = 0; h1 < alg.size(); ++h1) {
        const auto& r = alg.results(h, h1);
        if (r.empty() || !at(h1, f.lhs())) continue;
        for (int h2 : r)
          if (!at(h2, f.rhs())) return false;
      }
      return true;
    case Op::Dia:
      for (int w = 0; w < alg.size(); ++w)
        if (at(w, f.body())) return true;
      return false;
    case Op::Box:
      for (int w = 0; w < alg.size(); ++w)
        if (!at(w, f.body())) return false;
      return true;
    case Op::Exists: return bind(f.name(), h, f.body(), true);
    case Op::Forall: return !bind(f.name(), h, f.body(), false);
  }
  return false;
}

int world_of(const ExtendedModel& em, Label l) {
  if (l.is_eps()) return 0;
  return em.rho.at(l);
}

}  // namespace

bool evaluate(const ExtendedModel& em, int world, const Formula& f) {
  if (world < 0 || world >= em.model.algebra.size()) throw std::out_of_range("world out of range");
  return Evaluator(em.model, &em.valuation).at(world, f);
}

bool evaluate(const Model& m, int world, const Formula& f) {
  if (world < 0 || world >= m.algebra.size()) throw std::out_of_range("world out of range");
  return Evaluator(m, nullptr).at(world, f);
}

bool falsifiable(const ExtendedModel& em, const Sequent& s) {
  for (const auto& a : s.atoms())
    if (!em.model.algebra.holds(world_of(em, a.left), world_of(em, a.right), world_of(em, a.result)))
      return false;
  Evaluator ev(em.model, &em.valuation);
  for (const auto& lf : s.gamma())
    if (!ev.at(world_of(em, lf.label), lf.formula)) return false;
  for (const auto& lf : s.delta())
    if (ev.at(world_of(em, lf.label), lf.formula)) return false;
  return true;
}

std::optional<ExtendedModel> find_falsifying(const ExtendedModel& base, const Sequent& s) {
  std::vector<Label> labels;
  for (Label l : s.labels())
    if (!l.is_eps() && !base.rho.count(l)) labels.push_back(l);
  std::vector<std::string> vars;
  auto note = [&](const LabelledFormula& lf) {
    for (const auto& x : free_variables(lf.formula))
      if (!base.valuation.count(x) && std::find(vars.begin(), vars.end(), x) == vars.end())
        vars.push_back(x);
  };
  for (const auto& lf : s.gamma()) note(lf);
  for (const auto& lf : s.delta()) note(lf);

  ExtendedModel em = base;
  const int n = em.model.algebra.size();
  const int d = em.model.domain;
  std::vector<int> digit(labels.size() + vars.size(), 0);
  while (true) {
    for (std::size_t i = 0; i < labels.size(); ++i) em.rho[labels[i]] = digit[i];
    for (std::size_t i = 0; i < vars.size(); ++i) em.valuation[vars[i]] = digit[labels.size() + i];
    if (falsifiable(em, s)) return em;
    std::size_t p = 0;
    while (p < digit.size()) {
      int limit = p < labels.size() ? n : d;
      if (++digit[p] < limit) break;
      digit[p++] = 0;
    }
    if (p == digit.size()) return std::nullopt;
  }
}

namespace {

PartialMonoid random_family_algebra(int n, std::mt19937_64& rng) {
  std::vector<std::uint32_t> family{0};
  while (static_cast<int>(family.size()) < n) {
    std::vector<std::uint32_t> next;
    for (std::uint32_t s : family)
      for (int b = 0; b < n - 1; ++b) {
        std::uint32_t t = s | (1u << b);
        if (t == s || std::find(family.begin(), family.end(), t) != family.end()) continue;
        if (std::find(next.begin(), next.end(), t) != next.end()) continue;
        bool closed = true;
        for (int c = 0; c < n - 1 && closed; ++c)
          if (t & (1u << c)) closed = std::find(family.begin(), family.end(), t & ~(1u << c)) != family.end();
        if (closed) next.push_back(t);
      }
    std::sort(next.begin(), next.end());
    family.push_back(next[std::uniform_int_distribution<std::size_t>(0, next.size() - 1)(rng)]);
  }
  return subset_algebra(family);
}

std::size_t power(int base, std::size_t e) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

Model sample_model(std::uint64_t seed, std::uint64_t index, const SampleBounds& bounds,
                   const Signature& sig) {
  if (bounds.max_worlds < 1 || bounds.max_domain < 1)
    throw std::invalid_argument("sample bounds must be positive");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  Model m;
  const int n = uniform(1, bounds.max_worlds);
  if (n <= 5) {
    const auto& cat = algebras_of_size(n);
    m.algebra = cat[uniform(0, static_cast<int>(cat.size()) - 1)];
  } else {
    m.algebra = random_family_algebra(n, rng);
  }
  m.domain = uniform(1, bounds.max_domain);
  for (const auto& c : sig.constants) m.constants[c] = uniform(0, m.domain - 1);
  for (const auto& [name, arity] : sig.predicates) {
    auto& table = m.predicates[{name, arity}];
    table.resize(n * power(m.domain, arity));
    for (auto& bit : table) bit = static_cast<std::uint8_t>(uniform(0, 1));
  }
  for (std::size_t k : sig.pointsto_arities) {
    auto& table = m.pointsto[k];
    table.resize(power(m.domain, k));
    for (auto& w : table) w = uniform(0, n - 1);
  }
  return m;
}

std::vector<Model> sample_models(std::uint64_t seed, std::size_t count, const SampleBounds& bounds,
                                 const Signature& sig) {
  std::vector<Model> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample_model(seed, i, bounds, sig));
  return out;
}

Signature signature_of(const TheorySet& t) {
  Signature sig;
  for (const auto& f : t.formulas) sig.merge(signature_of(f));
  for (std::size_t k : t.arities) {
    Signature a;
    a.pointsto_arities.push_back(k);
    sig.merge(a);
  }
  return sig;
}

namespace {

constexpr int kNoWorld = -1;
constexpr int kNotModel = -2;

// World where the goal fails in sample i, kNoWorld when it holds everywhere,
// kNotModel when the theory does not hold.
int check_sample(const Model& m, const Formula& goal, const TheorySet& theory) {
  Evaluator ev(m, nullptr);
  const int n = m.algebra.size();
  for (const auto& t : theory.formulas)
    for (int w = 0; w < n; ++w)
      if (!ev.at(w, t)) return kNotModel;
  for (int w = 0; w < n; ++w)
    if (!ev.at(w, goal)) return w;
  return kNoWorld;
}

struct Setup {
  Formula goal;
  Signature sig;
};

Setup setup(const Formula& f, const TheorySet& theory) {
  Setup s{universal_closure(f), signature_of(theory)};
  s.sig.merge(signature_of(s.goal));
  return s;
}

}  // namespace

std::optional<Counterexample> refute_serial(const Formula& f, const TheorySet& theory,
                                            std::uint64_t seed, std::size_t count,
                                            const SampleBounds& bounds, RefuteStats* stats) {
  const Setup su = setup(f, theory);
  std::optional<Counterexample> best;
  std::size_t models = 0;
  for (std::size_t i = 0; i < count; ++i) {
    Model m = sample_model(seed, i, bounds, su.sig);
    int r = check_sample(m, su.goal, theory);
    if (r == kNotModel) continue;
    ++models;
    if (r >= 0 && !best) best = Counterexample{i, std::move(m), r};
  }
  if (stats) *stats = {count, models};
  return best;
}

std::optional<Counterexample> refute(const Formula& f, const TheorySet& theory, std::uint64_t seed,
                                     std::size_t count, const SampleBounds& bounds,
                                     RefuteStats* stats) {
  const Setup su = setup(f, theory);
  std::vector<int> verdict(count, kNotModel);
  std::exception_ptr error;
  std::atomic<bool> failed{false};

#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      verdict[i] = check_sample(sample_model(seed, i, bounds, su.sig), su.goal, theory);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
      failed = true;
    }
  }
  if (error) std::rethrow_exception(error);

  std::optional<Counterexample> best;
  std::size_t models = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (verdict[i] == kNotModel) continue;
    ++models;
    if (verdict[i] >= 0 && !best) best = Counterexample{i, sample_model(seed, i, bounds, su.sig), verdict[i]};
  }
  if (stats) *stats = {count, models};
  return best;
}

}  // namespace foasl
