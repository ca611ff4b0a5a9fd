#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "foasl/syntax.hpp"

namespace foasl {

struct TheoryId {
  enum class Kind { None, Reynolds, VafeiadisParkinson, Lee, Thakur };

  Kind kind = Kind::None;
  int unfold_depth = 3;  // Thakur only

  static TheoryId none() { return {}; }
  static TheoryId reynolds() { return {Kind::Reynolds, 3}; }
  static TheoryId vp() { return {Kind::VafeiadisParkinson, 3}; }
  static TheoryId lee() { return {Kind::Lee, 3}; }
  static TheoryId thakur(int depth) { return {Kind::Thakur, depth}; }

  bool operator==(const TheoryId&) const = default;
};

// Parses `none`, `reynolds`, `vp`, `lee`, `thakur:<depth>`; throws
// std::invalid_argument otherwise.
TheoryId parse_theory_id(const std::string& s);
std::string to_string(const TheoryId& id);

// Which numbered theory formula an entry is; 0 marks user-supplied axioms.
struct TheoryTag {
  int number = 0;
  std::size_t arity = 0;

  bool operator==(const TheoryTag&) const = default;
};

// Closed, desugared formulas assumed at the root under a box.
struct TheorySet {
  std::vector<Formula> formulas;
  std::vector<TheoryTag> tags;  // parallel to formulas
  TheoryId provenance;
  std::set<std::size_t> arities;

  // Appends a closed formula (desugared on the way in).
  void add(const Formula& f, TheoryTag tag = {});
  // Index of the formula with this tag, or -1.
  int find(int number, std::size_t arity) const;
  bool empty() const { return formulas.empty(); }
  std::size_t size() const { return formulas.size(); }
};

}  // namespace foasl
