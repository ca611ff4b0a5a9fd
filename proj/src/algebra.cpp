#include <algorithm>
#include <stdexcept>

#include "foasl/models.hpp"

namespace foasl {

PartialMonoid::PartialMonoid(int size, bool with_unit)
    : n_(size), table_(static_cast<std::size_t>(size) * size), splits_(size) {
  if (size < 1) throw std::invalid_argument("an algebra needs at least the unit world");
  if (!with_unit) return;
  for (int h = 0; h < n_; ++h) {
    add(h, 0, h);
    add(0, h, h);
  }
}

void PartialMonoid::add(int a, int b, int c) {
  if (a < 0 || b < 0 || c < 0 || a >= n_ || b >= n_ || c >= n_)
    throw std::out_of_range("world out of range");
  std::array<int, 3> t{a, b, c};
  auto it = std::lower_bound(triples_.begin(), triples_.end(), t);
  if (it != triples_.end() && *it == t) return;
  triples_.insert(it, t);
  auto& r = table_[a * n_ + b];
  r.insert(std::lower_bound(r.begin(), r.end(), c), c);
  auto& s = splits_[c];
  s.insert(std::lower_bound(s.begin(), s.end(), std::pair{a, b}), std::pair{a, b});
}

bool PartialMonoid::holds(int a, int b, int c) const {
  const auto& r = results(a, b);
  return std::binary_search(r.begin(), r.end(), c);
}

int PartialMonoid::compose(int a, int b) const {
  const auto& r = results(a, b);
  return r.empty() ? -1 : r.front();
}

std::string to_string(Axiom a) {
  switch (a) {
    case Axiom::Identity: return "identity";
    case Axiom::Commutativity: return "commutativity";
    case Axiom::Associativity: return "associativity";
    case Axiom::Cancellativity: return "cancellativity";
    case Axiom::IndivisibleUnit: return "indivisible-unit";
    case Axiom::Disjointness: return "disjointness";
    case Axiom::CrossSplit: return "cross-split";
    case Axiom::PartialDeterminism: return "partial-determinism";
  }
  return "?";
}

std::string Violation::to_string() const {
  std::string out = foasl::to_string(axiom) + " (";
  for (std::size_t i = 0; i < witness.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(witness[i]);
  }
  return out + ")";
}

namespace {

// All y with (a o b) o c = y, and all y with a o (b o c) = y.
std::vector<int> assoc_left(const PartialMonoid& m, int a, int b, int c) {
  std::vector<int> out;
  for (int x : m.results(a, b))
    for (int y : m.results(x, c)) out.push_back(y);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> assoc_right(const PartialMonoid& m, int a, int b, int c) {
  std::vector<int> out;
  for (int z : m.results(b, c))
    for (int y : m.results(a, z)) out.push_back(y);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool has_cross_split(const PartialMonoid& m, int a, int b, int c, int d) {
  for (auto [ac, ad] : m.splits(a))
    for (auto [bc, bd] : m.splits(b))
      if (m.holds(ac, bc, c) && m.holds(ad, bd, d)) return true;
  return false;
}

}  // namespace

std::vector<Violation> validate_algebra(const PartialMonoid& m) {
  std::vector<Violation> out;
  const int n = m.size();
  for (int h = 0; h < n; ++h)
    if (!m.holds(h, 0, h)) out.push_back({Axiom::Identity, {h}});
  for (const auto& [a, b, c] : m.triples()) {
    if (!m.holds(b, a, c)) out.push_back({Axiom::Commutativity, {a, b, c}});
    if (c == 0 && a != 0) out.push_back({Axiom::IndivisibleUnit, {a, b}});
    if (a == b && a != 0) out.push_back({Axiom::Disjointness, {a, c}});
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (m.results(a, b).size() > 1) out.push_back({Axiom::PartialDeterminism, {a, b}});
      for (int c = 0; c < n; ++c)
        if (assoc_left(m, a, b, c) != assoc_right(m, a, b, c))
          out.push_back({Axiom::Associativity, {a, b, c}});
    }
  // a o b = c = a o d
  for (int c = 0; c < n; ++c) {
    const auto& sp = m.splits(c);
    for (std::size_t i = 0; i < sp.size(); ++i)
      for (std::size_t j = i + 1; j < sp.size(); ++j)
        if (sp[i].first == sp[j].first) out.push_back({Axiom::Cancellativity, {sp[i].first, sp[i].second, sp[j].second, c}});
  }
  for (int h = 0; h < n; ++h)
    for (auto [a, b] : m.splits(h))
      for (auto [c, d] : m.splits(h))
        if (!has_cross_split(m, a, b, c, d)) out.push_back({Axiom::CrossSplit, {a, b, c, d, h}});
  return out;
}

namespace {

std::vector<PartialMonoid> enumerate(int n) {
  std::vector<PartialMonoid> out;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
  // choice[p] == 0: undefined, else the result world
  std::vector<int> choice(pairs.size(), 0);
  while (true) {
    PartialMonoid m(n);
    for (std::size_t p = 0; p < pairs.size(); ++p)
      if (choice[p]) {
        m.add(pairs[p].first, pairs[p].second, choice[p]);
        m.add(pairs[p].second, pairs[p].first, choice[p]);
      }
    if (validate_algebra(m).empty()) out.push_back(std::move(m));
    std::size_t p = 0;
    while (p < choice.size() && ++choice[p] == n) choice[p++] = 0;
    if (p == choice.size()) break;
  }
  return out;
}

}  // namespace

const std::vector<PartialMonoid>& algebras_of_size(int n) {
  static const std::vector<std::vector<PartialMonoid>> catalog = [] {
    std::vector<std::vector<PartialMonoid>> c(6);
    for (int k = 1; k <= 5; ++k) c[k] = enumerate(k);
    return c;
  }();
  if (n < 1 || n > 5) throw std::invalid_argument("algebra catalog covers 1..5 worlds");
  return catalog[n];
}

PartialMonoid subset_algebra(const std::vector<std::uint32_t>& family) {
  if (family.empty() || family[0] != 0) throw std::invalid_argument("family must start with the empty set");
  const int n = static_cast<int>(family.size());
  PartialMonoid m(n);
  for (int a = 1; a < n; ++a)
    for (int b = 1; b < n; ++b) {
      if (family[a] & family[b]) continue;
      auto it = std::find(family.begin(), family.end(), family[a] | family[b]);
      if (it != family.end()) m.add(a, b, static_cast<int>(it - family.begin()));
    }
  return m;
}

}  // namespace foasl
