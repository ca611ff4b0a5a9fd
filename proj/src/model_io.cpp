#include <istream>
#include <ostream>
#include <sstream>

#include "foasl/models.hpp"

// Text format, one item per line, '#' comments:
//
//   worlds N
//   compose            then "a b c" triples (a o b = c), closed by "end"
//   domain D
//   const NAME V
//   pred NAME ARITY    then "w v1 .. vk" for each true entry, "end"
//   pto K              then "v1 .. vK w" for every tuple, "end"
//   world W            optional: the world a counterexample fails at

namespace foasl {

namespace {

std::vector<int> decode(std::size_t idx, int domain, std::size_t arity) {
  std::vector<int> out(arity);
  for (std::size_t i = arity; i-- > 0;) {
    out[i] = static_cast<int>(idx % domain);
    idx /= domain;
  }
  return out;
}

std::size_t power(int base, std::size_t e) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

void write_model(std::ostream& out, const Model& m, std::optional<int> world) {
  out << "worlds " << m.algebra.size() << "\ncompose\n";
  for (const auto& [a, b, c] : m.algebra.triples()) out << a << ' ' << b << ' ' << c << '\n';
  out << "end\ndomain " << m.domain << '\n';
  for (const auto& [name, v] : m.constants) out << "const " << name << ' ' << v << '\n';
  for (const auto& [key, table] : m.predicates) {
    out << "pred " << key.first << ' ' << key.second << '\n';
    const std::size_t per_world = power(m.domain, key.second);
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (!table[i]) continue;
      out << i / per_world;
      for (int v : decode(i % per_world, m.domain, key.second)) out << ' ' << v;
      out << '\n';
    }
    out << "end\n";
  }
  for (const auto& [k, table] : m.pointsto) {
    out << "pto " << k << '\n';
    for (std::size_t i = 0; i < table.size(); ++i) {
      for (int v : decode(i, m.domain, k)) out << v << ' ';
      out << table[i] << '\n';
    }
    out << "end\n";
  }
  if (world) out << "world " << *world << '\n';
}

namespace {

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Next non-blank line, split into words; false at end of input.
  bool next(std::vector<std::string>& words) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (auto p = line.find('#'); p != std::string::npos) line.erase(p);
      std::istringstream ss(line);
      words.clear();
      for (std::string w; ss >> w;) words.push_back(w);
      if (!words.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error("model file line " + std::to_string(line_no_) + ": " + msg);
  }

  int number(const std::string& w, int lo, int hi) const {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(w, &used);
    } catch (const std::exception&) {
      fail("expected a number, got '" + w + "'");
    }
    if (used != w.size() || v < lo || v > hi) fail("number '" + w + "' out of range");
    return v;
  }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

}  // namespace

Model read_model(std::istream& in, std::optional<int>* world) {
  Reader r(in);
  Model m;
  bool have_worlds = false;
  std::vector<std::string> w;
  auto need_worlds = [&] {
    if (!have_worlds) r.fail("'worlds' must come first");
  };
  if (world) world->reset();
  while (r.next(w)) {
    if (w[0] == "worlds" && w.size() == 2) {
      m.algebra = PartialMonoid(r.number(w[1], 1, 1 << 16), false);
      have_worlds = true;
    } else if (w[0] == "compose" && w.size() == 1) {
      need_worlds();
      const int n = m.algebra.size();
      while (r.next(w) && w[0] != "end") {
        if (w.size() != 3) r.fail("expected 'a b c'");
        m.algebra.add(r.number(w[0], 0, n - 1), r.number(w[1], 0, n - 1), r.number(w[2], 0, n - 1));
      }
    } else if (w[0] == "domain" && w.size() == 2) {
      m.domain = r.number(w[1], 1, 1 << 16);
    } else if (w[0] == "const" && w.size() == 3) {
      m.constants[w[1]] = r.number(w[2], 0, m.domain - 1);
    } else if (w[0] == "pred" && w.size() == 3) {
      need_worlds();
      const auto arity = static_cast<std::size_t>(r.number(w[2], 0, 64));
      const std::size_t per_world = power(m.domain, arity);
      auto& table = m.predicates[{w[1], arity}];
      table.assign(m.algebra.size() * per_world, 0);
      while (r.next(w) && w[0] != "end") {
        if (w.size() != arity + 1) r.fail("wrong number of entries in predicate row");
        std::size_t idx = r.number(w[0], 0, m.algebra.size() - 1);
        std::size_t tuple = 0;
        for (std::size_t i = 1; i < w.size(); ++i) tuple = tuple * m.domain + r.number(w[i], 0, m.domain - 1);
        table[idx * per_world + tuple] = 1;
      }
    } else if (w[0] == "pto" && w.size() == 2) {
      need_worlds();
      const auto k = static_cast<std::size_t>(r.number(w[1], 2, 64));
      auto& table = m.pointsto[k];
      table.assign(power(m.domain, k), -1);
      while (r.next(w) && w[0] != "end") {
        if (w.size() != k + 1) r.fail("wrong number of entries in points-to row");
        std::size_t tuple = 0;
        for (std::size_t i = 0; i < k; ++i) tuple = tuple * m.domain + r.number(w[i], 0, m.domain - 1);
        table[tuple] = r.number(w[k], 0, m.algebra.size() - 1);
      }
      for (int v : table)
        if (v < 0) r.fail("points-to table of arity " + std::to_string(k) + " is not total");
    } else if (w[0] == "world" && w.size() == 2) {
      need_worlds();
      int v = r.number(w[1], 0, m.algebra.size() - 1);
      if (world) *world = v;
    } else {
      r.fail("unexpected '" + w[0] + "'");
    }
  }
  if (!have_worlds) r.fail("missing 'worlds'");
  return m;
}

}  // namespace foasl
