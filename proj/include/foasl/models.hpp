#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "foasl/sequent.hpp"
#include "foasl/syntax.hpp"
#include "foasl/theory_set.hpp"

namespace foasl {

// Worlds are 0..size()-1; world 0 is the unit. The composition is kept as a
// relation of triples (a, b, c) meaning a o b = c, so that broken tables can
// be represented and reported by validate_algebra.
class PartialMonoid {
 public:
  // The unit laws (h o 0 = 0 o h = h) are added unless with_unit is false.
  explicit PartialMonoid(int size = 1, bool with_unit = true);

  int size() const { return n_; }
  void add(int a, int b, int c);
  bool holds(int a, int b, int c) const;
  // All c with a o b = c.
  const std::vector<int>& results(int a, int b) const { return table_[a * n_ + b]; }
  // The first such c, or -1.
  int compose(int a, int b) const;
  // All (a, b) with a o b = h.
  const std::vector<std::pair<int, int>>& splits(int h) const { return splits_[h]; }
  const std::vector<std::array<int, 3>>& triples() const { return triples_; }

  bool operator==(const PartialMonoid& o) const { return n_ == o.n_ && triples_ == o.triples_; }

 private:
  int n_;
  std::vector<std::array<int, 3>> triples_;  // sorted, unique
  std::vector<std::vector<int>> table_;
  std::vector<std::vector<std::pair<int, int>>> splits_;
};

enum class Axiom {
  Identity,
  Commutativity,
  Associativity,
  Cancellativity,
  IndivisibleUnit,
  Disjointness,
  CrossSplit,
  PartialDeterminism,
};

std::string to_string(Axiom a);

struct Violation {
  Axiom axiom;
  std::vector<int> witness;
  std::string to_string() const;
};

// Exhaustive check of the eight conditions; empty iff m is a separation algebra.
std::vector<Violation> validate_algebra(const PartialMonoid& m);

// Every separation algebra on exactly n worlds (n <= 5), unit fixed at 0.
// Isomorphic copies are not merged.
const std::vector<PartialMonoid>& algebras_of_size(int n);

// Disjoint union on a family of bitsets; the family must contain 0 and be
// closed under subsets. World i is family[i] (family[0] == 0).
PartialMonoid subset_algebra(const std::vector<std::uint32_t>& family);

struct Model {
  PartialMonoid algebra;
  int domain = 1;
  std::map<std::string, int> constants;
  // (name, arity) -> truth table indexed by world * domain^arity + tuple.
  std::map<std::pair<std::string, std::size_t>, std::vector<std::uint8_t>> predicates;
  // arity k -> world of each k-tuple (tuple index in base `domain`, first
  // argument most significant).
  std::map<std::size_t, std::vector<int>> pointsto;

  bool operator==(const Model&) const = default;
};

struct ExtendedModel {
  Model model;
  std::map<Label, int> rho;  // eps is always mapped to 0
  std::map<std::string, int> valuation;
};

class UnknownSymbol : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Satisfaction of f at `world`. Free variables are read from the valuation.
// Throws UnknownSymbol for constants, predicates or arities outside the model.
bool evaluate(const ExtendedModel& em, int world, const Formula& f);
bool evaluate(const Model& m, int world, const Formula& f);

// Atoms hold under rho, every antecedent formula is true and every
// succedent formula false. Labels missing from rho throw std::out_of_range.
bool falsifiable(const ExtendedModel& em, const Sequent& s);

// Extends base.rho / base.valuation over the labels and free variables of s
// it does not cover, looking for an assignment that falsifies s.
std::optional<ExtendedModel> find_falsifying(const ExtendedModel& base, const Sequent& s);

struct SampleBounds {
  int max_worlds = 4;
  int max_domain = 3;
};

// Model i of the stream for `seed`; independent of every other index.
Model sample_model(std::uint64_t seed, std::uint64_t index, const SampleBounds& bounds,
                   const Signature& sig);
std::vector<Model> sample_models(std::uint64_t seed, std::size_t count, const SampleBounds& bounds,
                                 const Signature& sig);

Signature signature_of(const TheorySet& t);

struct Counterexample {
  std::uint64_t index = 0;  // position in the sample stream
  Model model;
  int world = 0;
};

struct RefuteStats {
  std::size_t samples = 0;
  std::size_t theory_models = 0;  // samples on which every theory formula holds everywhere
};

// Searches samples 0..count-1 for a model of the theory in which the
// universal closure of f fails at some world. Returns the one with the
// smallest (index, world). The parallel and serial versions agree exactly.
std::optional<Counterexample> refute(const Formula& f, const TheorySet& theory, std::uint64_t seed,
                                     std::size_t count, const SampleBounds& bounds = {},
                                     RefuteStats* stats = nullptr);
std::optional<Counterexample> refute_serial(const Formula& f, const TheorySet& theory,
                                            std::uint64_t seed, std::size_t count,
                                            const SampleBounds& bounds = {},
                                            RefuteStats* stats = nullptr);

void write_model(std::ostream& out, const Model& m, std::optional<int> world = std::nullopt);
// Throws std::runtime_error on malformed input.
Model read_model(std::istream& in, std::optional<int>* world = nullptr);

}  // namespace foasl
